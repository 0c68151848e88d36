#include "llmdisc/roles.hpp"

#include <fstream>

#include "llmdisc/errors.hpp"

namespace llmdisc {

std::vector<RoleCard> parse_roles(const json& j, const std::string& origin) {
    if (!j.is_array())
        throw ParseError(origin + ": role file must be a JSON array");
    if (j.empty()) throw ParseError(origin + ": role file is empty");
    std::vector<RoleCard> roles;
    int idx = 0;
    for (const json& rec : j) {
        if (!rec.is_object())
            throw ParseError(origin + ": record " + std::to_string(idx) +
                             " is not an object");
        for (const char* field :
             {"agent_role", "agent_speciality", "agent_role_prompt"}) {
            if (!rec.contains(field) || !rec.at(field).is_string())
                throw ParseError(origin + ": record " + std::to_string(idx) +
                                 " missing string field '" + field + "'");
        }
        RoleCard card = rec.get<RoleCard>();
        try {
            validate(card);
        } catch (const ParseError& e) {
            throw ParseError(origin + ": record " + std::to_string(idx) + ": " +
                             e.what());
        }
        roles.push_back(std::move(card));
        ++idx;
    }
    return roles;
}

std::vector<RoleCard> load_roles(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open role file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    return parse_roles(j, path);
}

std::vector<RoleCard> assign_roles(const std::vector<RoleCard>& roles,
                                   int agents, long seed) {
    if (roles.empty()) throw ConfigError("cannot assign from an empty role set");
    if (agents < 0) throw ConfigError("agent count must be >= 0");
    long n = static_cast<long>(roles.size());
    long offset = ((seed % n) + n) % n;
    std::vector<RoleCard> out;
    out.reserve(agents);
    for (int i = 0; i < agents; ++i)
        out.push_back(roles[(offset + i) % n]);
    return out;
}

std::string compose_role_preamble(const RoleCard& card) {
    validate(card);
    return "You are a " + card.agent_role + " whose specialty is " +
           card.agent_speciality + ". " + card.agent_role_prompt +
           " Remember to claim your role in the beginning of each "
           "conversation. ";
}

}  // namespace llmdisc
