#include <catch2/catch_amalgamated.hpp>

#include "groupdens/group.hpp"

using namespace groupdens;

TEST_CASE("orders, exponents, abelianness", "[group]") {
  Group c6(GroupSpec::cyclic(6));
  CHECK(c6.order() == 6);
  CHECK(c6.exponent() == 6);
  CHECK(c6.abelian());

  Group s3(GroupSpec::symmetric(3));
  CHECK(s3.order() == 6);
  CHECK(s3.exponent() == 6);  // lcm(1,2,3)
  CHECK_FALSE(s3.abelian());

  Group d4(GroupSpec::dihedral(4));
  CHECK(d4.order() == 8);
  CHECK(d4.exponent() == 4);
  CHECK_FALSE(d4.abelian());
  CHECK(Group(GroupSpec::dihedral(2)).abelian());  // Klein four

  Group p(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(3)}));
  CHECK(p.order() == 6);
  CHECK(p.exponent() == 6);
  CHECK(p.abelian());

  Group z2(GroupSpec::free_abelian(2));
  CHECK_FALSE(z2.finite());
  CHECK(z2.abelian());
  CHECK_THROWS_AS(z2.order(), Unsupported);
  CHECK_THROWS_AS(z2.exponent(), Unsupported);
  CHECK_THROWS_AS(z2.full_window(), Unsupported);
}

TEST_CASE("cyclic arithmetic", "[group]") {
  Group c4(GroupSpec::cyclic(4));
  CHECK(c4.mul(elem1(2), elem1(3)) == elem1(1));
  CHECK(c4.inv(elem1(1)) == elem1(3));
  CHECK(c4.inv(elem1(0)) == elem1(0));
  CHECK(c4.identity() == elem1(0));
  CHECK(c4.conj(elem1(1), elem1(2)) == elem1(1));
}

TEST_CASE("symmetric group composes right-to-left", "[group]") {
  // Permutations are indexed by lexicographic rank: for n=3,
  // 0=012 1=021 2=102 3=120 4=201 5=210.
  Group s3(GroupSpec::symmetric(3));
  // (01) composed after (12) maps 0->1->2? no: b=(12) first, then a=(01).
  CHECK(s3.mul(elem1(2), elem1(1)) == elem1(3));  // = cycle 120
  CHECK(s3.mul(elem1(1), elem1(2)) == elem1(4));  // opposite order differs
  CHECK(s3.inv(elem1(3)) == elem1(4));
  CHECK(s3.inv(elem1(2)) == elem1(2));  // transpositions are involutions
  // Conjugating a transposition by a 3-cycle gives another transposition.
  Elem t = s3.conj(elem1(2), elem1(3));
  CHECK((t == elem1(1) || t == elem1(5)));
}

TEST_CASE("dihedral relation s r s = r^-1", "[group]") {
  Group d5(GroupSpec::dihedral(5));
  Elem r = elem1(1), s = elem1(5);
  CHECK(d5.mul(d5.mul(s, r), s) == d5.inv(r));
  CHECK(d5.mul(s, s) == d5.identity());
  // r has order 5.
  Elem x = r;
  for (int i = 0; i < 4; ++i) x = d5.mul(x, r);
  CHECK(x == d5.identity());
}

TEST_CASE("free abelian arithmetic and printing", "[group]") {
  Group z2(GroupSpec::free_abelian(2));
  Elem a{{1, -2}}, b{{3, 5}};
  CHECK(z2.mul(a, b) == Elem{{4, 3}});
  CHECK(z2.inv(a) == Elem{{-1, 2}});
  CHECK(z2.print_elem(a) == "(1,-2)");
  Group z(GroupSpec::free_abelian(1));
  CHECK(z.print_elem(elem1(-7)) == "-7");
}

TEST_CASE("free group words reduce", "[group]") {
  Group f2(GroupSpec::free_group(2));
  Elem a{{1}}, A{{-1}}, b{{2}};
  CHECK(f2.mul(a, A) == Elem{{}});
  CHECK(f2.mul(f2.mul(a, b), f2.inv(b)) == a);
  Elem w = f2.mul(a, f2.mul(b, A));  // a b a^-1
  CHECK(f2.print_elem(w) == "abA");
  CHECK(f2.inv(w) == Elem{{1, -2, -1}});
  CHECK(f2.print_elem(Elem{{}}) == "e");
  // conjugation is reduced on the fly
  CHECK(f2.conj(a, b) == Elem{{-2, 1, 2}});
}

TEST_CASE("ball sizes follow the growth of the group", "[group]") {
  Group f2(GroupSpec::free_group(2));
  CHECK(f2.ball(0).size() == 1);
  CHECK(f2.ball(1).size() == 5);
  CHECK(f2.ball(2).size() == 17);   // 1 + 4 + 12
  CHECK(f2.ball(6).size() == 1457);  // 1 + 4(3^6-1)/2 geometric shells
  Group z2(GroupSpec::free_abelian(2));
  CHECK(z2.ball(1).size() == 9);
  CHECK(z2.ball(3).size() == 49);
  // Finite groups ignore the radius and give the full carrier.
  Group c5(GroupSpec::cyclic(5));
  CHECK(c5.ball(0).size() == 5);
}

TEST_CASE("canonical element order", "[group]") {
  Group z2(GroupSpec::free_abelian(2));
  auto w = z2.ball(1);
  REQUIRE(w.size() == 9);
  CHECK(w.elems[0] == Elem{{0, 0}});  // identity first
  CHECK(w.elems[1] == Elem{{-1, -1}});
  CHECK(w.elems[8] == Elem{{1, 1}});
  for (size_t i = 0; i + 1 < w.size(); ++i)
    CHECK(z2.less(w.elems[i], w.elems[i + 1]));

  Group f2(GroupSpec::free_group(2));
  auto bw = f2.ball(1);
  REQUIRE(bw.size() == 5);
  CHECK(f2.print_elem(bw.elems[0]) == "e");
  CHECK(f2.print_elem(bw.elems[1]) == "a");
  CHECK(f2.print_elem(bw.elems[2]) == "A");
  CHECK(f2.print_elem(bw.elems[3]) == "b");
  CHECK(f2.print_elem(bw.elems[4]) == "B");
}

TEST_CASE("window indexing is consistent", "[group]") {
  Group z(GroupSpec::free_abelian(1));
  auto w = z.ball(2);  // -2..2 ordered 0,-1,1,-2,2
  REQUIRE(w.size() == 5);
  for (uint32_t i = 0; i < w.size(); ++i)
    CHECK(w.index_of(w.elems[i]) == i);
  CHECK(w.contains(elem1(2)));
  CHECK_FALSE(w.contains(elem1(3)));
}

TEST_CASE("index round trips on finite carriers", "[group]") {
  Group d3(GroupSpec::dihedral(3));
  for (uint64_t i = 0; i < d3.order(); ++i)
    CHECK(d3.to_index(d3.from_index(i)) == i);
  CHECK_THROWS_AS(d3.from_index(6), InvalidElement);
  Group f1(GroupSpec::free_group(1));
  CHECK_THROWS_AS(f1.to_index(Elem{{}}), Unsupported);
}

TEST_CASE("product groups split and join indices", "[group]") {
  Group p(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(3)}));
  for (uint64_t i = 0; i < 6; ++i) {
    auto ix = p.split_index(static_cast<long long>(i));
    CHECK(p.join_index(ix) == i);
  }
  // (1,1) * (1,2) = (0,0): first factor most significant.
  Elem a = elem1(static_cast<long long>(p.join_index({1, 1})));
  Elem b = elem1(static_cast<long long>(p.join_index({1, 2})));
  CHECK(p.mul(a, b) == elem1(0));
  CHECK(p.print_elem(a) == "(1,1)");
}

TEST_CASE("group names are canonical", "[group]") {
  CHECK(Group(GroupSpec::cyclic(12)).name() == "Zmod(12)");
  CHECK(Group(GroupSpec::symmetric(4)).name() == "Sym(4)");
  CHECK(Group(GroupSpec::dihedral(6)).name() == "Dih(6)");
  CHECK(Group(GroupSpec::free_abelian(1)).name() == "Z");
  CHECK(Group(GroupSpec::free_abelian(3)).name() == "Z^3");
  CHECK(Group(GroupSpec::free_group(2)).name() == "Free(2)");
  Group p(GroupSpec::product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}));
  CHECK(p.name() == "Zmod(2) x Zmod(2)");
}

TEST_CASE("invalid elements are rejected", "[group]") {
  Group c4(GroupSpec::cyclic(4));
  CHECK_THROWS_AS(c4.mul(elem1(4), elem1(0)), InvalidElement);
  CHECK_THROWS_AS(c4.mul(elem1(-1), elem1(0)), InvalidElement);
  Group f2(GroupSpec::free_group(2));
  CHECK_THROWS_AS(f2.check_elem(Elem{{3}}), InvalidElement);   // no such letter
  CHECK_THROWS_AS(f2.check_elem(Elem{{1, -1}}), InvalidElement);  // unreduced
  Group z2(GroupSpec::free_abelian(2));
  CHECK_THROWS_AS(z2.check_elem(elem1(0)), InvalidElement);  // wrong arity
}

TEST_CASE("regular action permutes the carrier", "[group]") {
  Group c4(GroupSpec::cyclic(4));
  auto act = Action::regular(c4);
  CHECK(act.points == 4);
  // g acts by translation: table[g][x] = g + x.
  for (uint64_t g = 0; g < 4; ++g)
    for (uint32_t x = 0; x < 4; ++x)
      CHECK(act.act(g, x) == (g + x) % 4);
}
