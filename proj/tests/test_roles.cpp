#include <set>

#include "doctest.h"
#include "llmdisc/errors.hpp"
#include "llmdisc/roles.hpp"
#include "test_util.hpp"

using namespace llmdisc;

TEST_CASE("bundled persona set loads in its published order") {
    std::vector<RoleCard> roles = load_roles(testutil::data_path("roles/personas.json"));
    REQUIRE(roles.size() == 10);
    CHECK(roles[0].agent_role == "Visionary Millionaire");
    CHECK(roles[5].agent_role == "Environmentalist");
    CHECK(roles[5].agent_speciality == "Sustainability and Environmental Health");
    CHECK(roles[9].agent_role == "Futurist");
    for (const RoleCard& card : roles) {
        CHECK(!card.agent_role_prompt.empty());
        CHECK(card.model_name == "gpt-3.5-turbo");
        CHECK(testutil::contains(card.agent_name, card.agent_role));
    }
}

TEST_CASE("bundled six-hat set loads") {
    std::vector<RoleCard> roles = load_roles(testutil::data_path("roles/six_hats.json"));
    REQUIRE(roles.size() == 6);
    CHECK(roles[0].agent_role == "White Hat");
    CHECK(roles[0].agent_speciality == "Information Analysis and Facts");
    std::set<std::string> names;
    for (const RoleCard& card : roles) names.insert(card.agent_role);
    CHECK(names.size() == 6);
}

TEST_CASE("role parsing reports record-level failures") {
    CHECK_THROWS_WITH_AS(parse_roles(json::object(), "x"),
                         doctest::Contains("must be a JSON array"), ParseError);
    CHECK_THROWS_WITH_AS(parse_roles(json::array(), "x"),
                         doctest::Contains("empty"), ParseError);

    json missing = json::array(
        {json{{"agent_role", "A"}, {"agent_speciality", "S"},
              {"agent_role_prompt", "P"}},
         json{{"agent_role", "B"}, {"agent_speciality", "S"}}});
    CHECK_THROWS_WITH_AS(parse_roles(missing, "x"),
                         doctest::Contains("record 1 missing string field "
                                           "'agent_role_prompt'"),
                         ParseError);

    json not_object = json::array({json::array()});
    CHECK_THROWS_WITH_AS(parse_roles(not_object, "x"),
                         doctest::Contains("record 0"), ParseError);

    testutil::TempDir tmp;
    testutil::write_file(tmp.sub("roles.json"), "[{]");
    CHECK_THROWS_AS(load_roles(tmp.sub("roles.json")), ParseError);
    CHECK_THROWS_AS(load_roles(tmp.sub("missing.json")), IoError);
}

TEST_CASE("role assignment rotates deterministically by seed") {
    std::vector<RoleCard> roles;
    for (int i = 0; i < 10; ++i) {
        RoleCard c;
        c.agent_role = "role" + std::to_string(i);
        c.agent_speciality = "s";
        c.agent_role_prompt = "p";
        roles.push_back(c);
    }

    std::vector<RoleCard> a = assign_roles(roles, 4, 0);
    REQUIRE(a.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(a[i] == roles[i]);

    std::vector<RoleCard> b = assign_roles(roles, 4, 7);
    CHECK(b[0] == roles[7]);
    CHECK(b[1] == roles[8]);
    CHECK(b[2] == roles[9]);
    CHECK(b[3] == roles[0]);

    std::vector<RoleCard> neg = assign_roles(roles, 2, -3);
    CHECK(neg[0] == roles[7]);  // -3 mod 10 -> 7

    std::vector<RoleCard> three(roles.begin(), roles.begin() + 3);
    std::vector<RoleCard> wrapped = assign_roles(three, 5, 1);
    CHECK(wrapped[0] == three[1]);
    CHECK(wrapped[1] == three[2]);
    CHECK(wrapped[2] == three[0]);
    CHECK(wrapped[3] == three[1]);
    CHECK(wrapped[4] == three[2]);

    SUBCASE("distinct roles whenever the set is large enough") {
        for (long seed : {0L, 3L, 9L, 12345L}) {
            std::vector<RoleCard> assigned = assign_roles(roles, 10, seed);
            std::set<std::string> seen;
            for (const RoleCard& c : assigned) seen.insert(c.agent_role);
            CHECK(seen.size() == 10);
        }
    }
    CHECK_THROWS_AS(assign_roles({}, 2, 0), ConfigError);
}

TEST_CASE("role preamble matches the recorded agent prompt prefix") {
    std::vector<RoleCard> roles = load_roles(testutil::data_path("roles/personas.json"));
    std::string preamble = compose_role_preamble(roles[5]);  // Environmentalist
    std::string fixture =
        testutil::read_file(testutil::fixture_path("agent1_initiation_prompt.txt"));
    CHECK(testutil::starts_with(fixture, preamble));

    for (const RoleCard& card : roles) {
        std::string p = compose_role_preamble(card);
        CHECK(testutil::starts_with(p, "You are a " + card.agent_role +
                                           " whose specialty is " +
                                           card.agent_speciality + ". "));
        CHECK(testutil::contains(p, card.agent_role_prompt));
        CHECK(testutil::ends_with(
            p, " Remember to claim your role in the beginning of each "
               "conversation. "));
    }
}
