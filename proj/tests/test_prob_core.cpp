#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "growthlab/random_variable.hpp"

using namespace growthlab;

namespace {

SpacePtr two_atom(double p0 = 0.5) {
  return FilteredSpace::build({{"a", p0}, {"b", 1.0 - p0}}, {{{"a", "b"}}, {{"a"}, {"b"}}});
}

RandomVariable midpoints(const SpacePtr& sp) {
  int n = sp->atom_count();
  std::vector<ExtReal> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = ExtReal((i + 0.5) / n);
  return RandomVariable(sp, vals);
}

}  // namespace

TEST_CASE("build validates the smallest nontrivial space") {
  auto sp = two_atom();
  CHECK(sp->atom_count() == 2);
  CHECK(sp->depth() == 1);
  CHECK(sp->cell_count(0) == 1);
  CHECK(sp->cell_count(1) == 2);
  CHECK(sp->cell_count(5) == 2);  // stationary tail
}

TEST_CASE("build rejects bad inputs") {
  CHECK_THROWS_AS(FilteredSpace::build({{"a", 0.5}, {"b", 0.6}}, {{{"a", "b"}}}),
                  BadProbabilities);
  CHECK_THROWS_AS(FilteredSpace::build({{"a", 0.5}, {"b", 0.5}}, {{{"a"}, {"b"}}}),
                  NonTrivialRoot);
  // coarser after finer: t=1 splits, t=2 merges back
  CHECK_THROWS_AS(
      FilteredSpace::build({{"a", 0.25}, {"b", 0.25}, {"c", 0.5}},
                           {{{"a", "b", "c"}}, {{"a"}, {"b"}, {"c"}}, {{"a", "b"}, {"c"}}}),
      NonRefining);
  CHECK_THROWS_AS(FilteredSpace::build({{"a", 1.0}, {"a", 0.0}}, {{{"a"}}}), BadProbabilities);
}

TEST_CASE("dyadic construction") {
  CHECK_THROWS_AS(FilteredSpace::dyadic(0), BadProbabilities);

  auto d1 = FilteredSpace::dyadic(1);
  CHECK(d1->atom_count() == 2);
  CHECK(d1->partition_at(1).size() == 2);
  CHECK(d1->partition_at(1)[0] == FilteredSpace::Cell{0});

  auto d3 = FilteredSpace::dyadic(3);
  CHECK(d3->cell_count(2) == 4);
  for (const auto& cell : d3->partition_at(2)) CHECK(cell.size() == 2);

  auto d12 = FilteredSpace::dyadic(12);
  CHECK(d12->atom_count() == 4096);
  CHECK(d12->atom_prob(17) == doctest::Approx(std::ldexp(1.0, -12)));
}

TEST_CASE("measurability") {
  auto d3 = FilteredSpace::dyadic(3);
  auto x = midpoints(d3);
  CHECK(is_measurable(RandomVariable::constant(d3, ExtReal(2.0)), 0));
  CHECK(is_measurable(RandomVariable::constant(d3, ExtReal(2.0)), 7));
  CHECK_FALSE(is_measurable(x, 0));
  CHECK(is_measurable(x, 3));
  CHECK(is_measurable(x, 99));  // level clamps to the depth
}

TEST_CASE("conditional expectation basics") {
  auto sp = two_atom();
  RandomVariable x(sp, {ExtReal(1.0), ExtReal(3.0)});
  auto e = cond_expect(x, 0);
  CHECK(e[0] == ExtReal(2.0));
  CHECK(e[1] == ExtReal(2.0));

  // mixed infinities collapse to -inf under the conventions
  RandomVariable y(sp, {ExtReal::pos_inf(), ExtReal::neg_inf()});
  CHECK(cond_expect(y, 0)[0] == ExtReal::neg_inf());

  // midpoints of dyadic depth 3: left cell at t=1 averages {1,3,5,7}/16
  auto d3 = FilteredSpace::dyadic(3);
  auto m = cond_expect(midpoints(d3), 1);
  CHECK(m[0] == ExtReal(0.25));
  CHECK(m[3] == ExtReal(0.25));
  CHECK(m[4] == ExtReal(0.75));
}

TEST_CASE("conditional expectation properties on random variables") {
  auto d3 = FilteredSpace::dyadic(3);
  std::mt19937_64 rng(7);
  auto draw = [&] { return (rng() >> 11) * 0x1.0p-53 * 10.0 - 5.0; };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ExtReal> xs(8), ys(8);
    for (int i = 0; i < 8; ++i) {
      xs[i] = ExtReal(draw());
      ys[i] = ExtReal(draw());
    }
    RandomVariable x(d3, xs), y(d3, ys);

    for (int t : {0, 1, 2, 3}) CHECK(is_measurable(cond_expect(x, t), t));

    // tower: E[E[X|F_s] | F_t] = E[X|F_t] for s >= t
    auto via_s = cond_expect(cond_expect(x, 2), 1);
    auto direct = cond_expect(x, 1);
    for (int i = 0; i < 8; ++i)
      CHECK(via_s[i].raw() == doctest::Approx(direct[i].raw()).epsilon(1e-12));

    // linearity: E[2X + 3Y | F_t] = 2E[X|F_t] + 3E[Y|F_t]
    auto lhs = cond_expect(x * ExtReal(2.0) + y * ExtReal(3.0), 1);
    auto rhs = cond_expect(x, 1) * ExtReal(2.0) + cond_expect(y, 1) * ExtReal(3.0);
    for (int i = 0; i < 8; ++i) CHECK(lhs[i].raw() == doctest::Approx(rhs[i].raw()).epsilon(1e-12));

    // monotonicity: X <= X + |Y| pointwise
    auto bigger = x + y.map(+[](ExtReal v) { return ExtReal(std::abs(v.raw())); });
    auto ex = cond_expect(x, 2);
    auto eb = cond_expect(bigger, 2);
    for (int i = 0; i < 8; ++i) CHECK(ex[i] <= eb[i] + ExtReal(1e-12));
  }
}

TEST_CASE("indicator variables") {
  auto d2 = FilteredSpace::dyadic(2);
  auto all = indicator(d2, 1, {0, 1});
  for (int i = 0; i < 4; ++i) CHECK(all[i] == ExtReal(1.0));
  auto none = indicator(d2, 1, {});
  for (int i = 0; i < 4; ++i) CHECK(none[i] == ExtReal(0.0));
  auto left = indicator(d2, 1, {0});
  CHECK(left[0] == ExtReal(1.0));
  CHECK(left[1] == ExtReal(1.0));
  CHECK(left[2] == ExtReal(0.0));
  CHECK(left[3] == ExtReal(0.0));
  CHECK(is_measurable(left, 1));
  CHECK_THROWS_AS(indicator(d2, 1, {5}), UnknownCell);
}
