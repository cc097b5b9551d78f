#include <catch2/catch_amalgamated.hpp>

#include "groupdens/density.hpp"
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

TEST_CASE("all inf-sup functionals collapse on finite groups", "[density]") {
  // On a finite group every variant equals |A| / |G|.
  Group c4(GroupSpec::cyclic(4));
  auto a = parse("{0,1}", c4);
  CHECK(is12(c4, a).value() == rat(1, 2));
  CHECK(si21(c4, a).value() == rat(1, 2));
  CHECK(us12(c4, a).value() == rat(1, 2));
  CHECK(iss213(c4, a).value() == rat(1, 2));

  Group c5(GroupSpec::cyclic(5));
  CHECK(is12(c5, parse("{0,1,2}", c5)).value() == rat(3, 5));

  Group s3(GroupSpec::symmetric(3));
  CHECK(is12(s3, parse("{0,3,4}", s3)).value() == rat(1, 2));

  CHECK(is12(c4, empty_set()).value() == rat(0));
  CHECK(is12(c4, parse("{0,1,2,3}", c4)).value() == rat(1));
}

TEST_CASE("uniform-support restriction can only raise the inf", "[density]") {
  Group c6(GroupSpec::cyclic(6));
  auto a = parse("{0,1}", c6);
  // Default support budget covers the carrier: exact 1/3 via F = {0,2,4}.
  auto full = us12(c6, a);
  CHECK(full.kind == DensityResult::Kind::Exact);
  CHECK(full.lo == rat(1, 3));
  // Supports of size <= 2 cannot do better than 1/2, and the truncated
  // search honestly reports only an upper bound.
  DensityConfig small;
  small.kmax = 2;
  auto cut = us12(c6, a, nullptr, small);
  CHECK(cut.kind == DensityResult::Kind::UpperBound);
  CHECK(cut.hi == rat(1, 2));
  CHECK(uss213_search(c6, a).value() == rat(1, 3));
}

TEST_CASE("periodic sets on Z go through the finite quotient", "[density]") {
  Group z(GroupSpec::free_abelian(1));
  auto evens = parse("residues(2;0)", z);
  auto r = is12(z, evens);
  CHECK(r.kind == DensityResult::Kind::Exact);
  CHECK(r.lo == rat(1, 2));
  CHECK(r.method == "quotient");
  // An explicit window requests the windowed estimate instead: sound upper
  // bounds, here all equal to the quotient value.
  for (int n : {2, 4, 8}) {
    std::vector<Elem> es;
    for (long long i = 0; i < n; ++i) es.push_back(elem1(i));
    Window w = Window::of(es);
    auto wr = is12(z, evens, &w);
    CHECK(wr.kind == DensityResult::Kind::UpperBound);
    CHECK(wr.hi == rat(1, 2));
    CHECK(wr.method == "lp-game");
  }
  std::vector<Elem> es;
  for (long long i = 0; i < 4; ++i) es.push_back(elem1(i));
  Window w4 = Window::of(es);
  CHECK(us12(z, evens, &w4).hi == rat(1, 2));
  CHECK(iss213(z, evens, &w4).hi == rat(1, 2));
}

TEST_CASE("prefix sets admit small windowed bounds", "[density]") {
  Group f2(GroupSpec::free_group(2));
  auto pa = parse("prefix(a,A)", f2);
  // Support {b^-i : i < 6}: the six translates of prefix(a,A) by powers of b
  // are disjoint, so some point is covered at most 1/6 of the time.
  std::vector<Elem> supp;
  for (int i = 0; i < 6; ++i) supp.push_back(Elem{std::vector<long long>(i, -2)});
  Window sw = Window::of(supp);
  auto r = is12(f2, pa, &sw);
  CHECK(r.kind == DensityResult::Kind::UpperBound);
  CHECK(r.hi == rat(1, 6));

  auto pb = parse("prefix(b,B)", f2);
  std::vector<Elem> suppA;
  for (int i = 0; i < 6; ++i)
    suppA.push_back(Elem{std::vector<long long>(i, -1)});
  Window swa = Window::of(suppA);
  CHECK(is12(f2, pb, &swa).hi == rat(1, 6));
}

TEST_CASE("sup-inf-sup brackets the simple density", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  auto r = sis123(c4, parse("{0,1}", c4));
  CHECK(r.lo <= rat(1, 2));
  CHECK(rat(1, 2) <= r.hi);
  Group c6(GroupSpec::cyclic(6));
  auto r6 = sis123(c6, parse("{0,3}", c6));
  CHECK(r6.lo <= rat(1, 3));
  CHECK(rat(1, 3) <= r6.hi);
}

TEST_CASE("subadditivization against a strictly superadditive base", "[density]") {
  // f(B) = (|B|/4)^2 on Zmod(4): the subadditive envelope lifts {0,1} to 3/4
  // via the complement pair.
  Group c4(GroupSpec::cyclic(4));
  auto f = [](const Bits& bs) {
    Rat x = rat(static_cast<long long>(bs.count()), 4);
    return x * x;
  };
  Bits ab(4);
  ab[0] = 1;
  ab[1] = 1;
  auto r = subadditivize(c4, f, ab);
  CHECK(r.kind == DensityResult::Kind::Exact);
  CHECK(r.lo == rat(3, 4));
  CHECK(r.witness_points.size() == 1);
  // Carriers beyond the exhaustive-enumeration limit are refused.
  Group c16(GroupSpec::cyclic(16));
  Bits big(16);
  big[0] = 1;
  CHECK_THROWS_AS(subadditivize(c16, f, big), CapacityError);
}

TEST_CASE("subadditivized density matches the plain one at desk scale",
          "[density]") {
  Group c4(GroupSpec::cyclic(4));
  CHECK(his12(c4, parse("{0,1}", c4)).value() == rat(1, 2));
  CHECK(his12(c4, parse("{0}", c4)).value() == rat(1, 4));
  Group z(GroupSpec::free_abelian(1));
  CHECK_THROWS_AS(his12(z, parse("{0}", z)), Unsupported);
}

TEST_CASE("upper density on windows of Z", "[density]") {
  Group z(GroupSpec::free_abelian(1));
  auto r = dstar_window(z, parse("{0,7}", z));
  CHECK(r.kind == DensityResult::Kind::LowerBound);
  CHECK(r.lo == rat(1, 4));
  REQUIRE(r.sequence.size() == 8);
  CHECK(r.sequence[0] == rat(1));
  CHECK(r.sequence[6] == rat(1, 7));
  CHECK(r.sequence[7] == rat(1, 4));
  CHECK(r.method == "subset-enum");

  auto q = dstar_window(z, parse("residues(3;0,1)", z));
  CHECK(q.kind == DensityResult::Kind::Exact);
  CHECK(q.lo == rat(2, 3));
  CHECK(q.method == "quotient");
  auto u = dstar_window(z, parse("residues(4;0) | residues(4;2)", z));
  CHECK(u.kind == DensityResult::Kind::Exact);
  CHECK(u.lo == rat(1, 2));

  Group f2(GroupSpec::free_group(2));
  CHECK_THROWS_AS(dstar_window(f2, parse("prefix(a)", f2)), Unsupported);
}

TEST_CASE("intersection numbers by game and by enumeration", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  std::vector<SetPtr> halves = {parse("{0,1}", c4), parse("{2,3}", c4)};
  auto w = c4.full_window();
  auto lp = kelley_lp(c4, halves, w);
  auto br = kelley_bruteforce(c4, halves, w);
  CHECK(lp.value == rat(1, 2));
  CHECK(br.value == rat(1, 2));
  CHECK(br.tuple == std::vector<size_t>{0, 0, 1, 1});

  // The translate family of a set ties the intersection number to is12.
  Group c5(GroupSpec::cyclic(5));
  auto a = parse("{0,1,2}", c5);
  std::vector<SetPtr> fam;
  for (long long x = 0; x < 5; ++x) fam.push_back(set_shift(c5, elem1(x), a));
  CHECK(kelley_lp(c5, fam, c5.full_window()).value == rat(3, 5));
  CHECK(kelley_lp(c5, fam, c5.full_window()).value ==
        is12(c5, a).value());
}

TEST_CASE("coset actions evaluate like the regular one", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  Bits ab(4);
  ab[0] = 1;
  ab[1] = 1;
  CHECK(is12_action(Action::regular(c4), ab).value() == rat(1, 2));
  // Index-two cosets of Zmod(4): two points, one marked.
  auto act = Action::cosets(c4, ones({0, 2}));
  Bits half(act.points);
  half[0] = 1;
  CHECK(is12_action(act, half).value() == rat(1, 2));
}

TEST_CASE("pattern evaluation at arity two", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = parse("{0,1}", c4);
  CHECK(eval_extremal(c4, a, {"is", {1, 2}}).value() == rat(1, 2));
  CHECK(eval_extremal(c4, a, {"si", {1, 2}}).value() == rat(1, 2));
  CHECK(eval_extremal(c4, a, {"uS", {1, 2}}).value() == rat(1, 2));
  CHECK(eval_extremal(c4, a, {"sI", {1, 2}}).value() == rat(1, 2));
  CHECK(eval_extremal(c4, a, {"uu", {1, 2}}).value() == rat(0));
  CHECK(eval_extremal(c4, a, {"ss", {1, 2}}).value() == rat(1));
}

TEST_CASE("rigid outer quantifiers are pure point choices", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = parse("{0,1}", c4);
  // A pure outer point can dodge every translate: the mixed game value 1/2
  // must not leak in.
  auto si = eval_extremal(c4, a, {"Si", {2, 1}});
  CHECK(si.kind == DensityResult::Kind::Exact);
  CHECK(si.lo == rat(0));
  CHECK(si.method == "point-scan");
  REQUIRE(si.witness_points.size() == 1);
  CHECK(eval_extremal(c4, a, {"Is", {2, 1}}).value() == rat(1));
  CHECK(eval_extremal(c4, a, {"Su", {2, 1}}).value() == rat(0));
}

TEST_CASE("pattern evaluation at arity three", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = parse("{0,1}", c4);
  CHECK(eval_extremal(c4, a, {"iss", {1, 2, 3}}).value() == rat(1, 2));
  auto br = eval_extremal(c4, a, {"ssi", {1, 2, 3}});
  CHECK(br.kind == DensityResult::Kind::Interval);
  CHECK(br.lo == rat(1, 2));  // attained: uniform on an index-two subgroup
  CHECK(br.hi == rat(1));
  CHECK(eval_extremal(c4, a, {"sis", {1, 2, 3}}).value() == rat(1, 2));
  Group c6(GroupSpec::cyclic(6));
  auto a6 = parse("{0,1}", c6);
  CHECK(eval_extremal(c6, a6, {"iss", {2, 1, 3}}).value() == rat(1, 3));
  CHECK(eval_extremal(c6, a6, {"sis", {1, 2, 3}}).value() == rat(1, 3));
}

TEST_CASE("invalid or unsupported patterns are rejected", "[density]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = parse("{0,1}", c4);
  // Rigid letters belong to the quantifier holding the last product slot.
  CHECK_THROWS_AS(eval_extremal(c4, a, {"Suu", {3, 1, 2}}), Error);
  // A rigid quantifier behind an opposite-direction prefix has no sound
  // pure reduction.
  CHECK_THROWS_AS(eval_extremal(c4, a, {"sIu", {1, 3, 2}}), Unsupported);
  CHECK_THROWS_AS(eval_extremal(c4, a, {"is", {1, 1}}), Error);
  CHECK_THROWS_AS(eval_extremal(c4, a, {"isis", {1, 2, 3, 4}}), Error);
  Group z(GroupSpec::free_abelian(1));
  CHECK_THROWS_AS(eval_extremal(z, parse("{0}", z), {"is", {1, 2}}),
                  Unsupported);
}

TEST_CASE("chain of inequalities between the functionals", "[density]") {
  // is12 <= his12 <= iss213 pointwise, checked on a few masks.
  Group c5(GroupSpec::cyclic(5));
  for (const char* text : {"{0}", "{0,1}", "{0,2}", "{0,1,3}"}) {
    auto a = parse(text, c5);
    Rat lo = is12(c5, a).value();
    Rat mid = his12(c5, a).value();
    Rat hi = iss213(c5, a).value();
    CHECK(lo <= mid);
    CHECK(mid <= hi);
  }
}
