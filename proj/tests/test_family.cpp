#include <catch2/catch_amalgamated.hpp>

#include "ubp/family.hpp"
#include "ubp/json_io.hpp"

#include <string>
#include <vector>

using namespace ubp;

namespace {

ParseCode code_of(const std::string& text, int* rule_index = nullptr) {
  try {
    parse_family(text);
  } catch (const ParseError& e) {
    if (rule_index) *rule_index = e.rule_index();
    return e.code();
  }
  FAIL("expected ParseError");
  return ParseCode::MalformedJson;
}

}  // namespace

TEST_CASE("named families have the expected rules") {
  UpdateFamily f;

  REQUIRE(named_family("twonbr", f));
  REQUIRE(f.rules.size() == 6);
  for (const auto& r : f.rules) CHECK(r.size() == 2);
  CHECK(f.range == 1);
  CHECK(f.all_offsets() ==
        std::vector<Site>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});

  REQUIRE(named_family("threenbr", f));
  REQUIRE(f.rules.size() == 4);
  for (const auto& r : f.rules) CHECK(r.size() == 3);

  REQUIRE(named_family("onenbr", f));
  REQUIRE(f.rules.size() == 4);
  for (const auto& r : f.rules) CHECK(r.size() == 1);

  REQUIRE(named_family("duarte", f));
  REQUIRE(f.rules.size() == 3);
  for (const auto& r : f.rules) CHECK(r.size() == 2);
  CHECK(f.all_offsets() == std::vector<Site>{{-1, 0}, {0, -1}, {0, 1}});

  REQUIRE(named_family("east", f));
  REQUIRE(f.rules.size() == 1);
  CHECK(f.rules[0] == std::vector<Site>{{1, 0}});

  CHECK_FALSE(named_family("nope", f));
}

TEST_CASE("validated sorts offsets and rules canonically") {
  UpdateFamily f = UpdateFamily::validated(
      {{{2, 0}, {0, 2}, {1, 1}}, {{0, 1}}, {{1, 0}, {-1, 0}}});
  REQUIRE(f.rules.size() == 3);
  CHECK(f.rules[0] == std::vector<Site>{{0, 1}});
  CHECK(f.rules[1] == std::vector<Site>{{-1, 0}, {1, 0}});
  CHECK(f.rules[2] == std::vector<Site>{{0, 2}, {1, 1}, {2, 0}});
  CHECK(f.range == 2);
}

TEST_CASE("validated rejects bad input with positional codes") {
  CHECK_THROWS_AS(UpdateFamily::validated({}), ParseError);
  try {
    UpdateFamily::validated({});
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::EmptyFamily);
    CHECK(e.rule_index() == -1);
  }

  try {
    UpdateFamily::validated({{{1, 0}}, {}});
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::EmptyRule);
    CHECK(e.rule_index() == 1);
  }

  try {
    UpdateFamily::validated({{{0, 0}}});
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::OriginInRule);
    CHECK(e.rule_index() == 0);
  }

  try {
    UpdateFamily::validated({{{1, 0}}, {{2, 1}, {2, 1}}});
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::DuplicateOffset);
    CHECK(e.rule_index() == 1);
  }

  try {
    UpdateFamily::validated({{{kMaxOffset + 1, 0}}});
  } catch (const ParseError& e) {
    CHECK(e.code() == ParseCode::OffsetOverflow);
    CHECK(e.rule_index() == 0);
  }
  CHECK_NOTHROW(UpdateFamily::validated({{{kMaxOffset, -kMaxOffset}}}));
}

TEST_CASE("parse_family accepts the documented shape") {
  UpdateFamily f = parse_family(R"({"rules": [[[1, 0], [0, 1]], [[-1, 0]]]})");
  REQUIRE(f.rules.size() == 2);
  CHECK(f.rules[0] == std::vector<Site>{{-1, 0}});
  CHECK(f.rules[1] == std::vector<Site>{{0, 1}, {1, 0}});
}

TEST_CASE("parse_family error codes") {
  int idx = -2;

  CHECK(code_of("{nope") == ParseCode::MalformedJson);
  CHECK(code_of("[1,2,3]") == ParseCode::BadShape);
  CHECK(code_of(R"({"rules": 5})") == ParseCode::BadShape);
  CHECK(code_of(R"({})") == ParseCode::BadShape);
  CHECK(code_of(R"({"rules": []})") == ParseCode::EmptyFamily);
  CHECK(code_of(R"({"rules": [[]]})", &idx) == ParseCode::EmptyRule);
  CHECK(idx == 0);
  CHECK(code_of(R"({"rules": [[[1,0]], [[0,0]]]})", &idx) ==
        ParseCode::OriginInRule);
  CHECK(idx == 1);
  CHECK(code_of(R"({"rules": [[[1,0],[1,0]]]})") == ParseCode::DuplicateOffset);
  CHECK(code_of(R"({"rules": [[[1073741825,0]]]})") ==
        ParseCode::OffsetOverflow);
  CHECK(code_of(R"({"rules": [[[1e300,0]]]})") == ParseCode::OffsetOverflow);
  CHECK(code_of(R"({"rules": [[[1.5,0]]]})") == ParseCode::BadShape);
  CHECK(code_of(R"({"rules": [[[1,"a"]]]})") == ParseCode::BadShape);
  CHECK(code_of(R"({"rules": [[[1]]]})") == ParseCode::BadShape);
  CHECK(code_of(R"({"rules": [[[1,2,3]]]})") == ParseCode::BadShape);
}

TEST_CASE("family serialization round trips") {
  for (const char* name : {"twonbr", "threenbr", "onenbr", "duarte", "east"}) {
    UpdateFamily f;
    REQUIRE(named_family(name, f));
    std::string text = serialize_family(f);
    UpdateFamily g = parse_family(text);
    CHECK(g.rules == f.rules);
    CHECK(g.range == f.range);
    CHECK(serialize_family(g) == text);
  }
}

TEST_CASE("serialized family text is stable") {
  UpdateFamily f;
  REQUIRE(named_family("east", f));
  CHECK(serialize_family(f) == "{\n  \"rules\": [\n    [\n      [\n        1,\n        0\n      ]\n    ]\n  ]\n}\n");
}

TEST_CASE("all_offsets deduplicates across rules") {
  UpdateFamily f = UpdateFamily::validated({{{1, 0}, {0, 1}}, {{1, 0}, {2, 2}}});
  CHECK(f.all_offsets() == std::vector<Site>{{0, 1}, {1, 0}, {2, 2}});
}
