#pragma once

#include <string>
#include <vector>

#include "llmdisc/types.hpp"

namespace llmdisc {

// Parses a JSON array of role cards. Every record must carry non-empty
// agent_role, agent_speciality and agent_role_prompt.
std::vector<RoleCard> load_roles(const std::string& path);
std::vector<RoleCard> parse_roles(const json& j, const std::string& origin);

// Deterministic assignment: agent i gets
// roles[(seed mod |roles| + i) mod |roles|]. Distinct roles whenever
// agents <= |roles|; wraps around otherwise.
std::vector<RoleCard> assign_roles(const std::vector<RoleCard>& roles,
                                   int agents, long seed);

// "You are a {role} whose specialty is {speciality}. {prompt} Remember to
// claim your role in the beginning of each conversation. " (trailing space
// so the phase prompt can be appended directly).
std::string compose_role_preamble(const RoleCard& card);

}  // namespace llmdisc
