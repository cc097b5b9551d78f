#include <catch2/catch_amalgamated.hpp>

#include "groupdens/measure.hpp"

using namespace groupdens;

namespace {

std::vector<Elem> ones(std::initializer_list<long long> xs) {
  std::vector<Elem> out;
  for (auto x : xs) out.push_back(elem1(x));
  return out;
}

}  // namespace

TEST_CASE("construction normalizes and validates", "[measure]") {
  auto m = Measure::of({{elem1(0), rat(1, 2)},
                        {elem1(0), rat(1, 4)},
                        {elem1(1), rat(0)},
                        {elem1(2), rat(1, 4)}});
  REQUIRE(m.support_size() == 2);  // duplicate merged, zero dropped
  CHECK(m.weights()[0].second == rat(3, 4));
  CHECK_THROWS_AS(Measure::of({{elem1(0), rat(1, 2)}}), Error);
  CHECK_THROWS_AS(Measure::of({{elem1(0), rat(3, 2)}, {elem1(1), rat(-1, 2)}}),
                  Error);
  CHECK_THROWS_AS(Measure::uniform({}), Error);
  CHECK(Measure::dirac(elem1(7)).support_size() == 1);
}

TEST_CASE("measures evaluate sets exactly", "[measure]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = make_explicit(c4, ones({0, 1}));
  auto mu = Measure::uniform(ones({0, 2}));
  CHECK(mu(c4, a) == rat(1, 2));
  CHECK(Measure::dirac(elem1(1))(c4, a) == rat(1));
  CHECK(Measure::dirac(elem1(3))(c4, a) == rat(0));

  Group z(GroupSpec::free_abelian(1));
  auto evens = make_residues(z, {2}, {elem1(0)});
  CHECK(Measure::uniform(ones({0, 1, 2, 3}))(z, evens) == rat(1, 2));
}

TEST_CASE("convolution of diracs multiplies the points", "[measure]") {
  Group s3(GroupSpec::symmetric(3));
  auto m = convolve(s3, Measure::dirac(elem1(2)), Measure::dirac(elem1(1)));
  REQUIRE(m.support_size() == 1);
  CHECK(m.weights()[0].first == elem1(3));
}

TEST_CASE("self-convolution of a uniform pair", "[measure]") {
  Group c4(GroupSpec::cyclic(4));
  auto u = Measure::uniform(ones({0, 1}));
  auto m = convolve(c4, u, u);
  REQUIRE(m.support_size() == 3);
  CHECK(m.weights()[0] == std::pair<Elem, Rat>(elem1(0), rat(1, 4)));
  CHECK(m.weights()[1] == std::pair<Elem, Rat>(elem1(1), rat(1, 2)));
  CHECK(m.weights()[2] == std::pair<Elem, Rat>(elem1(2), rat(1, 4)));
}

TEST_CASE("translate mass profile", "[measure]") {
  Group c4(GroupSpec::cyclic(4));
  auto a = make_explicit(c4, ones({0, 1}));
  auto mu = Measure::uniform(ones({0, 1}));
  // mu * delta_x (A) as x walks the carrier: 1, 1/2, 0, 1/2.
  CHECK(act_mass(c4, mu, a, elem1(0)) == rat(1));
  CHECK(act_mass(c4, mu, a, elem1(1)) == rat(1, 2));
  CHECK(act_mass(c4, mu, a, elem1(2)) == rat(0));
  CHECK(act_mass(c4, mu, a, elem1(3)) == rat(1, 2));
}

TEST_CASE("shift defect of boxes shrinks linearly", "[measure]") {
  Group z(GroupSpec::free_abelian(1));
  for (long long n : {10, 50}) {
    std::vector<Elem> box;
    for (long long x = -n; x <= n; ++x) box.push_back(elem1(x));
    CHECK(shift_defect(z, Measure::uniform(box), elem1(1)) ==
          Rat(2, 2 * n + 1));
  }
  CHECK(shift_defect(z, Measure::dirac(elem1(0)), elem1(1)) == rat(2));
  CHECK(shift_defect(z, Measure::dirac(elem1(0)), elem1(0)) == rat(0));
}

TEST_CASE("set-level invariance defect", "[measure]") {
  Group c6(GroupSpec::cyclic(6));
  auto a = make_explicit(c6, ones({0, 1}));
  auto mu = Measure::uniform(ones({0, 1, 2}));
  // Shifting A by 1 keeps mass 2/3; shifting by 2 drops it to 1/3.
  CHECK(invariance_defect(c6, mu, a, ones({1})) == rat(0));
  CHECK(invariance_defect(c6, mu, a, ones({1, 2})) == rat(1, 3));
}
