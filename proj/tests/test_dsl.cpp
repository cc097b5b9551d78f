#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "groupdens/dsl.hpp"

using namespace groupdens;

TEST_CASE("group expressions parse to the canonical name", "[dsl]") {
  for (const char* text : {"Zmod(6)", "Sym(4)", "Dih(5)", "Z", "Z^2", "Z^3",
                           "Free(1)", "Free(2)"}) {
    Group g(dsl::parse_group(text));
    CHECK(g.name() == text);
  }
  // Whitespace and product syntax normalize.
  CHECK(Group(dsl::parse_group("  Zmod( 12 ) ")).name() == "Zmod(12)");
  CHECK(Group(dsl::parse_group("Zmod(2) x Zmod(3)")).name() ==
        "Zmod(2) x Zmod(3)");
}

TEST_CASE("group capacity and validity limits", "[dsl]") {
  CHECK_THROWS_AS(dsl::parse_group("Sym(9)"), CapacityError);
  CHECK_THROWS_AS(dsl::parse_group("Z^0"), CapacityError);
  // Mixed finite-infinite products are rejected up front.
  CHECK_THROWS_AS(dsl::parse_group("Z x Zmod(2)"), Unsupported);
  CHECK_THROWS_AS(dsl::parse_group("Blah(3)"), ParseError);
}

TEST_CASE("parse errors carry the offending position", "[dsl]") {
  try {
    dsl::parse_group("Zmod(4) x Blah(2)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 11);
    CHECK(std::string(e.what()).find("Blah") != std::string::npos);
  }
  Group c4(GroupSpec::cyclic(4));
  try {
    dsl::parse_set("{0,1} | frobnicate(2)", c4);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 9);
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }
  CHECK_THROWS_AS(dsl::parse_set("{0,1", c4), ParseError);
  CHECK_THROWS_AS(dsl::parse_set("{0,1} extra", c4), ParseError);
  CHECK_THROWS_AS(dsl::parse_set("{9}", c4), Error);  // out-of-range element
}

TEST_CASE("operator binding strength", "[dsl]") {
  Group c4(GroupSpec::cyclic(4));
  // | binds loosest, then &, then *, then !.
  auto s = dsl::parse_set("{0} | {1} & {2} * !{3}", c4);
  CHECK(dsl::canonical_print(c4, s) == "{0}|{1}&{2}*!{3}");
  auto t = dsl::parse_set("(({0} | {1}) & {2}) * {3}", c4);
  CHECK(dsl::canonical_print(c4, t) == "(({0}|{1})&{2})*{3}");
}

TEST_CASE("printing is a fixpoint of parsing", "[dsl]") {
  // Nested unions flatten, so one reprint reaches the canonical form.
  Group c4(GroupSpec::cyclic(4));
  auto s = dsl::parse_set("({0}|{1})|({2}|{3})", c4);
  std::string canon = dsl::canonical_print(c4, s);
  CHECK(canon == "{0}|{1}|{2}|{3}");
  CHECK(dsl::canonical_print(c4, dsl::parse_set(canon, c4)) == canon);
}

TEST_CASE("free-group elements read as words", "[dsl]") {
  Group f2(GroupSpec::free_group(2));
  auto s = dsl::parse_set("{e, aB, ba}", f2);
  auto es = enumerate_set(f2, s);
  REQUIRE(es.size() == 3);
  CHECK(es[0] == Elem{{}});
  CHECK(f2.print_elem(es[1]) == "aB");
  CHECK(f2.print_elem(es[2]) == "ba");
  // Element literals are canonical: unreduced words are rejected, matching
  // what print_elem can ever emit.
  CHECK_THROWS_AS(dsl::parse_set("{aA}", f2), InvalidElement);
  CHECK_THROWS_AS(dsl::parse_set("{c}", f2), InvalidElement);
}

TEST_CASE("golden corpus round-trips", "[dsl]") {
  std::ifstream in(std::string(GOLDEN_DIR) + "/sets.tsv");
  REQUIRE(in.good());
  std::string line;
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string gname, input, expected;
    REQUIRE(std::getline(ls, gname, '\t'));
    REQUIRE(std::getline(ls, input, '\t'));
    REQUIRE(std::getline(ls, expected, '\t'));
    INFO(gname << " : " << input);
    Group g(dsl::parse_group(gname));
    auto s = dsl::parse_set(input, g);
    CHECK(dsl::canonical_print(g, s) == expected);
    // The canonical text must parse back to the same tree and reprint
    // unchanged.
    auto s2 = dsl::parse_set(expected, g);
    CHECK(dsl::set_equal(s, s2));
    CHECK(dsl::canonical_print(g, s2) == expected);
    ++rows;
  }
  CHECK(rows >= 26);
}
