#include <catch2/catch_amalgamated.hpp>

#include "groupdens/comb.hpp"
#include "groupdens/dsl.hpp"

using namespace groupdens;

namespace {

std::vector<Elem> ones(std::initializer_list<long long> xs) {
  std::vector<Elem> out;
  for (auto x : xs) out.push_back(elem1(x));
  return out;
}

SetPtr parse(const std::string& text, const Group& g) {
  return dsl::parse_set(text, g);
}

}  // namespace

TEST_CASE("partition cover bound sequence", "[comb]") {
  // max over k of 1 + k + ... + k^(n-k): 1, 2, 3, 7, 15, then factorial-ish.
  CHECK(partition_cover_bound(1) == 1);
  CHECK(partition_cover_bound(2) == 2);
  CHECK(partition_cover_bound(3) == 3);
  CHECK(partition_cover_bound(4) == 7);
  CHECK(partition_cover_bound(5) == 15);
  CHECK(partition_cover_bound(6) == 40);
}

TEST_CASE("packing translates of finite-group sets", "[comb]") {
  Group c6(GroupSpec::cyclic(6));
  auto p = packing_index(c6, parse("{0,3}", c6));
  CHECK_FALSE(p.at_least);
  CHECK(p.value == 3);
  REQUIRE(p.witness.size() == 3);
  // Witness translates really are pairwise disjoint.
  auto diff = diff_right(parse("{0,3}", c6));
  for (size_t i = 0; i < p.witness.size(); ++i)
    for (size_t j = i + 1; j < p.witness.size(); ++j)
      CHECK_FALSE(set_contains(
          c6, diff, c6.mul(c6.inv(p.witness[i]), p.witness[j])));
  CHECK(packing_index(c6, parse("{0,1,2}", c6)).value == 2);
  CHECK_THROWS_AS(packing_index(c6, empty_set()), Error);
}

TEST_CASE("covering translates of finite-group sets", "[comb]") {
  Group c6(GroupSpec::cyclic(6));
  auto c = covering_number(c6, parse("{0,1}", c6));
  CHECK(c.kind == CovResult::Kind::Exact);
  CHECK(c.value == 3);
  // A cap below the optimum degrades to the greedy certificate.
  auto capped = covering_number(c6, parse("{0}", c6), 3);
  CHECK(capped.kind == CovResult::Kind::AtMost);
  CHECK(capped.value == 6);
}

TEST_CASE("periodic sets on Z pack and cover through the quotient", "[comb]") {
  Group z(GroupSpec::free_abelian(1));
  auto evens = parse("residues(2;0)", z);
  auto p = packing_index(z, evens);
  CHECK_FALSE(p.at_least);
  CHECK(p.value == 2);
  auto c = covering_number(z, evens);
  CHECK(c.kind == CovResult::Kind::Exact);
  CHECK(c.value == 2);
  // Finitely many translates of a finite set never cover Z.
  CHECK(covering_number(z, parse("{0,2}", z)).kind ==
        CovResult::Kind::Infinite);
  Group f2(GroupSpec::free_group(2));
  CHECK_THROWS_AS(covering_number(f2, parse("prefix(a)", f2)), Unsupported);
}

TEST_CASE("free-group prefix packings certify lower bounds", "[comb]") {
  Group f2(GroupSpec::free_group(2));
  auto ball = f2.ball(6);
  auto p = packing_index(f2, parse("prefix(a,A)", f2), 6, &ball);
  CHECK(p.at_least);  // window-restricted search: only a lower bound
  CHECK(p.value == 6);
  CHECK(p.witness.size() == 6);
}

TEST_CASE("packing times density stays below one", "[comb]") {
  Group c5(GroupSpec::cyclic(5));
  for (const char* text : {"{0}", "{0,1}", "{0,2}", "{0,1,2}"}) {
    auto a = parse(text, c5);
    auto p = packing_index(c5, a);
    REQUIRE_FALSE(p.at_least);
    Rat dens = rat(static_cast<long long>(enumerate_set(c5, a).size()), 5);
    CHECK(Rat(static_cast<long long>(p.value)) * dens <= 1);
  }
}

TEST_CASE("partition analysis finds a well-covered cell", "[comb]") {
  Group c4(GroupSpec::cyclic(4));
  auto r = partition_analyze(
      c4, {parse("{0,2}", c4), parse("{1,3}", c4)});
  REQUIRE(r.cells.size() == 2);
  CHECK(r.small_cov);
  CHECK(r.bound == 2);
  CHECK(r.cover_within_bound);
  CHECK(r.wr_small);
  CHECK(r.cells[0].is12_value == rat(1, 2));
  CHECK(r.cells[0].pack.value == 2);
  CHECK(r.cells[0].cov_diff.value == 2);
  REQUIRE(r.conj_invariant_route.has_value());
  CHECK(*r.conj_invariant_route);

  Group c6(GroupSpec::cyclic(6));
  auto r6 = partition_analyze(c6, {parse("{0,2,4}", c6), parse("{1,3,5}", c6)});
  CHECK(r6.small_cov);
  CHECK(r6.cover_within_bound);
}

TEST_CASE("sum of densities above one forces a full product", "[comb]") {
  Group c4(GroupSpec::cyclic(4));
  CHECK(ergo_sum_check(c4, parse("{0,1,2}", c4), parse("{0,1,2}", c4)));
  CHECK(ergo_sum_check(c4, parse("{0,1}", c4), parse("{0,1}", c4)));  // vacuous
  CHECK_FALSE(is_right_thick(c4, parse("{0,1,2}", c4)));
  CHECK(is_right_thick(c4, parse("{0,1,2,3}", c4)));
}

TEST_CASE("covering of a product against the density product", "[comb]") {
  Group c6(GroupSpec::cyclic(6));
  CHECK(density_cover_check(c6, parse("{0,1}", c6), parse("{0,3}", c6)));
  CHECK(density_cover_check(c6, parse("{0}", c6), parse("{0}", c6)));
}

TEST_CASE("homothety witnesses in canonical order", "[comb]") {
  Group c5(GroupSpec::cyclic(5));
  auto a = parse("{0,2,4}", c5);
  auto h = homothety_witness(c5, a, ones({0, 1}));
  REQUIRE(h.has_value());
  CHECK(h->degree == 1);  // x + 4 comes before any multiplier
  CHECK(h->constants[0] == elem1(4));
  CHECK(h->apply(c5, elem1(0)) == elem1(4));
  CHECK(h->apply(c5, elem1(1)) == elem1(0));

  auto h2 = homothety_witness(c5, a, ones({0, 1, 2}));
  REQUIRE(h2.has_value());
  CHECK(h2->degree == 2);  // 2x + 0: degree one genuinely fails here
  CHECK(h2->constants[0] == elem1(0));

  Group c4(GroupSpec::cyclic(4));
  CHECK_FALSE(
      homothety_witness(c4, parse("{0}", c4), ones({0, 1})).has_value());
}

TEST_CASE("homothety search on a nonabelian group", "[comb]") {
  Group s3(GroupSpec::symmetric(3));
  // Identity-like map a0 x a1 with a0 = a1 = e maps any F into itself.
  auto all = parse("{0,1,2,3,4,5}", s3);
  auto h = homothety_witness(s3, all, ones({0, 3}));
  REQUIRE(h.has_value());
  CHECK(h->degree == 1);
  CHECK(h->constants[0] == elem1(0));
  CHECK(h->constants[1] == elem1(0));
}

TEST_CASE("cube sizes for almost-invariant boxes", "[comb]") {
  auto r = folner_set(1, ones({-1, 0, 1}), rat(1, 5));
  CHECK(r.side == 11);
  CHECK(r.defect == rat(2, 11));
  CHECK(r.boundary == 2);
  CHECK(r.volume == 11);
  auto r0 = folner_set(1, ones({0}), rat(1, 5));
  CHECK(r0.side == 1);
  CHECK(r0.defect == rat(0));
  std::vector<Elem> box9;
  for (long long x = -1; x <= 1; ++x)
    for (long long y = -1; y <= 1; ++y) box9.push_back(Elem{{x, y}});
  auto r2 = folner_set(2, box9, rat(1, 10));
  CHECK(r2.side == 41);
  CHECK(r2.defect == rat(168, 1681));
  CHECK_THROWS_AS(folner_set(0, {}, rat(1, 5)), Error);
  CHECK_THROWS_AS(folner_set(1, ones({0}), rat(0)), Error);
}

TEST_CASE("shift representability inside a window", "[comb]") {
  Group z(GroupSpec::free_abelian(1));
  auto evens = parse("residues(2;0)", z);
  auto w = z.ball(4);
  auto y = finitely_representable(z, parse("{0,2}", z), evens, w);
  REQUIRE(y.has_value());
  CHECK(*y == elem1(0));
  CHECK_FALSE(
      finitely_representable(z, parse("{0,1}", z), evens, w).has_value());
}

TEST_CASE("conjugated difference covers within the reciprocal bound", "[comb]") {
  Group c6(GroupSpec::cyclic(6));
  auto r = conj_cover_check(c6, parse("{0,1}", c6));
  CHECK(r.ok);
  CHECK(r.sis_lower == rat(1, 3));
  CHECK(r.bound == 3);
  CHECK(r.e_witness.size() == 1);
  CHECK(r.cov_wr == 2);
  CHECK(r.cov_fourfold == 2);

  Group s3(GroupSpec::symmetric(3));
  auto rs = conj_cover_check(s3, parse("{0,2}", s3));
  CHECK(rs.ok);
  CHECK(rs.sis_lower == rat(1, 3));
  CHECK(rs.cov_wr == 3);
  CHECK(rs.cov_fourfold == 3);
  CHECK_THROWS_AS(conj_cover_check(c6, empty_set()), Error);
}
