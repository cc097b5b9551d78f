#include <catch2/catch_amalgamated.hpp>

#include "groupdens/dsl.hpp"
#include "groupdens/rational.hpp"
#include "groupdens/sets.hpp"

using namespace groupdens;

namespace {

std::vector<Elem> ones(std::initializer_list<long long> xs) {
  std::vector<Elem> out;
  for (auto x : xs) out.push_back(elem1(x));
  return out;
}

}  // namespace

TEST_CASE("explicit sets are sorted and deduplicated", "[sets]") {
  Group c5(GroupSpec::cyclic(5));
  auto a = make_explicit(c5, ones({3, 1, 3, 0}));
  auto es = enumerate_set(c5, a);
  REQUIRE(es.size() == 3);
  CHECK(es[0] == elem1(0));
  CHECK(es[1] == elem1(1));
  CHECK(es[2] == elem1(3));
  CHECK(set_contains(c5, a, elem1(3)));
  CHECK_FALSE(set_contains(c5, a, elem1(2)));
}

TEST_CASE("difference set of an interval", "[sets]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = make_explicit(c4, ones({0, 1}));
  auto aa = set_product(a, set_inverse(a));
  Bits bs = realize(c4, aa, c4.full_window());
  CHECK(bs[0]);
  CHECK(bs[1]);
  CHECK_FALSE(bs[2]);
  CHECK(bs[3]);
}

TEST_CASE("boolean operations realize on windows", "[sets]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = make_explicit(c4, ones({0, 1}));
  auto b = make_explicit(c4, ones({1, 2}));
  auto w = c4.full_window();
  Bits u = realize(c4, set_union({a, b}), w);
  CHECK(u.count() == 3);
  Bits i = realize(c4, set_inter({a, b}), w);
  REQUIRE(i.count() == 1);
  CHECK(i[1]);
  Bits c = realize(c4, set_compl(a), w);
  CHECK(c.count() == 2);
  CHECK(c[2]);
  CHECK(c[3]);
}

TEST_CASE("shift and conjugation", "[sets]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = make_explicit(c4, ones({0, 1}));
  Bits sh = realize(c4, set_shift(c4, elem1(1), a), c4.full_window());
  CHECK(sh[1]);
  CHECK(sh[2]);
  CHECK(sh.count() == 2);

  Group s3(GroupSpec::symmetric(3));
  // Conjugating the transposition 102 by the 3-cycle 120 moves it.
  auto t = make_explicit(s3, ones({2}));
  auto ct = set_conj(s3, t, elem1(3));
  auto es = enumerate_set(s3, ct);
  REQUIRE(es.size() == 1);
  CHECK(es[0] == s3.conj(elem1(2), elem1(3)));
}

TEST_CASE("conjugation closure is a no-op on abelian groups", "[sets]") {
  Group c6(GroupSpec::cyclic(6));
  auto a = make_explicit(c6, ones({1, 4}));
  auto e = make_explicit(c6, ones({0, 2, 3}));
  Bits lhs = realize(c6, set_wr(a, e), c6.full_window());
  Bits rhs = realize(c6, a, c6.full_window());
  CHECK(lhs == rhs);
}

TEST_CASE("conjugation closure sweeps a conjugacy class", "[sets]") {
  Group s3(GroupSpec::symmetric(3));
  auto a = make_explicit(s3, ones({2}));           // one transposition
  auto full = make_explicit(s3, ones({0, 1, 2, 3, 4, 5}));
  Bits bs = realize(s3, set_wr(a, full), s3.full_window());
  // all three transpositions: lex ranks 1, 2, 5
  CHECK(bs.count() == 3);
  CHECK(bs[1]);
  CHECK(bs[2]);
  CHECK(bs[5]);
}

TEST_CASE("residue sets broadcast a single modulus", "[sets]") {
  Group z2(GroupSpec::free_abelian(2));
  auto r = make_residues(z2, {3}, {Elem{{0, 0}}, Elem{{1, 2}}});
  CHECK(set_contains(z2, r, Elem{{3, -3}}));
  CHECK(set_contains(z2, r, Elem{{4, -1}}));
  CHECK_FALSE(set_contains(z2, r, Elem{{1, 0}}));
  // classes are reduced mod the moduli
  auto r2 = make_residues(z2, {3, 3}, {Elem{{4, -1}}});
  CHECK(set_contains(z2, r2, Elem{{1, 2}}));
}

TEST_CASE("residues realize periodically on a window", "[sets]") {
  Group z(GroupSpec::free_abelian(1));
  auto evens = make_residues(z, {2}, {elem1(0)});
  auto w = z.ball(3);  // 0,-1,1,-2,2,-3,3
  Bits bs = realize(z, evens, w);
  CHECK(bs[w.index_of(elem1(0))]);
  CHECK(bs[w.index_of(elem1(-2))]);
  CHECK(bs[w.index_of(elem1(2))]);
  CHECK(bs.count() == 3);
}

TEST_CASE("prefix sets and their inverses", "[sets]") {
  Group f2(GroupSpec::free_group(2));
  auto p = make_prefix(f2, {1, -1});  // words starting with a or a^-1
  CHECK(set_contains(f2, p, Elem{{1, 2}}));       // ab
  CHECK(set_contains(f2, p, Elem{{-1, -1, 2}}));  // AAb
  CHECK_FALSE(set_contains(f2, p, Elem{{}}));     // identity has no first letter
  CHECK_FALSE(set_contains(f2, p, Elem{{2, 1}}));  // ba

  // x is in inv(p) iff x^-1 starts with a or a^-1: Ba inverts to Ab.
  auto ip = set_inverse(p);
  CHECK(set_contains(f2, ip, Elem{{-2, 1}}));
  CHECK_FALSE(set_contains(f2, ip, Elem{{1, -2}}));  // aB inverts to bA
}

TEST_CASE("prefix product membership agrees with brute force", "[sets]") {
  Group f2(GroupSpec::free_group(2));
  using L = std::vector<long long>;
  const std::vector<std::pair<L, L>> combos = {
      {{1}, {1}}, {{1}, {2}}, {{1, -1}, {2}}, {{1, 2}, {-1}}};
  for (const auto& [l1, l2] : combos) {
    auto p1 = make_prefix(f2, l1);
    auto p2 = make_prefix(f2, l2);
    auto prod = set_product(p1, set_inverse(p2));
    // z in P1 P2^-1 iff z v in P1 for some v in P2; witnesses never need to
    // be longer than |z| plus one letter, so a ball search is conclusive.
    std::vector<Elem> wits;
    for (const auto& v : f2.ball(6).elems)
      if (set_contains(f2, p2, v)) wits.push_back(v);
    for (const auto& z : f2.ball(4).elems) {
      bool brute = false;
      for (const auto& v : wits)
        if (set_contains(f2, p1, f2.mul(z, v))) {
          brute = true;
          break;
        }
      REQUIRE(set_contains(f2, prod, z) == brute);
    }
  }
}

TEST_CASE("enumerability and decidability classification", "[sets]") {
  Group z(GroupSpec::free_abelian(1));
  Group f2(GroupSpec::free_group(2));
  auto ex = make_explicit(z, ones({0, 5}));
  auto re = make_residues(z, {2}, {elem1(1)});
  auto pf = make_prefix(f2, {1});
  CHECK(set_enumerable(z, ex));
  CHECK_FALSE(set_enumerable(z, re));
  CHECK_FALSE(set_enumerable(f2, pf));
  CHECK(set_decidable(z, re));
  CHECK(set_decidable(f2, pf));
  CHECK(enumerate_set(z, empty_set()).empty());
  CHECK_FALSE(set_contains(z, empty_set(), elem1(0)));
}

TEST_CASE("periodic normal form merges unions", "[sets]") {
  Group z(GroupSpec::free_abelian(1));
  auto u = set_union({make_residues(z, {4}, {elem1(0)}),
                      make_residues(z, {4}, {elem1(2)})});
  auto f = residue_normal(z, u);
  REQUIRE(f.has_value());
  Rat density = Rat(static_cast<long long>(f->classes.size()),
                    static_cast<long long>(detail::box_size(f->moduli)));
  CHECK(density == rat(1, 2));
  // A shifted copy is still periodic; an explicit finite set is not.
  CHECK(residue_normal(z, set_shift(z, elem1(3), u)).has_value());
  CHECK_FALSE(residue_normal(z, make_explicit(z, ones({0, 1}))).has_value());
}

TEST_CASE("quotients of periodic sets are exact", "[sets]") {
  Group z(GroupSpec::free_abelian(1));
  auto r = make_residues(z, {6}, {elem1(0), elem1(2), elem1(5)});
  auto q = quotient_set(z, r);
  REQUIRE(q.has_value());
  const Group& t = *q->first.target;
  CHECK(t.finite());
  auto img = enumerate_set(t, q->second);
  CHECK(Rat(static_cast<long long>(img.size()),
            static_cast<long long>(t.order())) == rat(1, 2));
  // The reduction map respects membership.
  for (long long x = -12; x <= 12; ++x)
    CHECK(set_contains(t, q->second, q->first.apply(elem1(x))) ==
          set_contains(z, r, elem1(x)));
}
