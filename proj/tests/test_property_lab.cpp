#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "growthlab/lab.hpp"

using namespace growthlab;
using namespace growthlab::lab;

namespace {

/// Planted bug: leaks the global mean into every cell (breaks locality).
Assessor cross_cell_leak() {
  return Assessor::custom(
      "cross_cell_leak",
      [](int t, const RandomVariable& x) {
        auto base = Assessor::entropic(1.0).evaluate(t, x);
        auto global = cond_expect(x, 0);
        return base + global[0] * ExtReal(0.1);
      },
      AssessorFlags{}, true);
}

/// Planted bug: order-reversing map.
Assessor anti_monotone() {
  return Assessor::custom(
      "anti_monotone",
      [](int t, const RandomVariable& x) { return cond_expect(x, t) * ExtReal(-1.0); },
      AssessorFlags{}, true);
}

/// Planted bug: almost cash additive, but drifts.
Assessor drifting_shift() {
  return Assessor::custom(
      "drifting_shift",
      [](int t, const RandomVariable& x) {
        return cond_expect(x, t) * ExtReal(1.0 + 1e-6);
      },
      AssessorFlags{.cash_additive = true}, true);
}

/// Planted bug: oscillating bump, neither monotone nor cash additive, which
/// is exactly what the corrected quasi-concavity chain relies on.
Assessor sin_bump() {
  return Assessor::custom(
      "sin_bump",
      [](int t, const RandomVariable& x) {
        auto bent = x.map(+[](ExtReal v) {
          return v.is_finite() ? ExtReal(v.raw() + 3.0 * std::sin(3.0 * v.raw())) : v;
        });
        return cond_expect(bent, t);
      },
      AssessorFlags{}, true);
}

}  // namespace

TEST_CASE("instances are deterministic in (seed, trial)") {
  InstanceGen gen{.seed = 42};
  auto a = gen_instance(gen, 7);
  auto b = gen_instance(gen, 7);
  CHECK(a.name == b.name);
  CHECK(a.space->atom_count() == b.space->atom_count());
  CHECK(a.t == b.t);
  CHECK(a.s == b.s);
  for (int i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  for (int T = 0; T <= gen.horizon; ++T) {
    auto la = a.process.log_at(T), lb = b.process.log_at(T);
    for (int i = 0; i < la.size(); ++i) CHECK(la[i] == lb[i]);
  }
  auto c = gen_instance(gen, 8);
  CHECK(a.name != c.name);
}

TEST_CASE("positivity flag forces v_tilde; absorption probability produces deaths") {
  InstanceGen positive{.seed = 1, .positive_only = true};
  for (int trial = 0; trial < 30; ++trial) CHECK(gen_instance(positive, trial).process.v_tilde());

  InstanceGen dying{.seed = 1, .positive_only = false, .absorption_prob = 0.3};
  int absorbed = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = gen_instance(dying, trial);
    for (int i = 0; i < inst.space->atom_count(); ++i)
      if (!inst.process.absorption_time(i).is_pos_inf()) {
        ++absorbed;
        break;
      }
  }
  CHECK(absorbed > 5);  // some paths must die and stay dead (validated on build)
}

TEST_CASE("built-in assessors pass the axiom checks") {
  InstanceGen gen{.seed = 11};
  for (const auto& mu : {Assessor::entropic(-1.0), Assessor::entropic(0.7),
                         Assessor::neg_avar(0.5)}) {
    auto local = check_local(mu, gen, 60);
    CHECK(local.verdict == Verdict::pass);
    auto mono = check_monotone(mu, gen, 60);
    CHECK(mono.verdict == Verdict::pass);
    auto cash = check_cash_additive(mu, gen, 60);
    CHECK(cash.verdict == Verdict::pass);
  }
}

TEST_CASE("planted bugs are caught with witnesses") {
  InstanceGen gen{.seed = 13};
  auto leak = check_local(cross_cell_leak(), gen, 60);
  CHECK(leak.verdict == Verdict::fail);
  REQUIRE_FALSE(leak.failures.empty());
  CHECK(leak.failures[0].violation > 0.0);

  auto anti = check_monotone(anti_monotone(), gen, 60);
  CHECK(anti.verdict == Verdict::fail);
  CHECK_FALSE(anti.failures.empty());

  auto drift = check_cash_additive(drifting_shift(), gen, 60);
  CHECK(drift.verdict == Verdict::fail);

  // a broken index that skips the normalization is caught by scale invariance
  auto unnormalized = [](const ValueProcess& v, int t, const Assessor& mu, int t_max) {
    return horizon_seq_unnormalized(v, t, mu, t_max);
  };
  auto scale = check_scale_invariant(Assessor::entropic(1.0), gen, 40, unnormalized);
  CHECK(scale.verdict == Verdict::fail);

  // the quasi-concavity chain needs monotone + cash additive
  auto qc = check_quasiconcave_corrected(sin_bump(), gen, 40, 8);
  CHECK(qc.verdict == Verdict::fail);
}

TEST_CASE("index-level axioms hold for the real pipeline") {
  InstanceGen gen{.seed = 17};
  InstanceGen absorbing{.seed = 17, .positive_only = false, .absorption_prob = 0.15};
  for (const auto& mu : {Assessor::entropic(-1.0), Assessor::entropic(0.0),
                         Assessor::entropic(1.0)}) {
    CHECK(check_local_index(mu, gen, 40).verdict == Verdict::pass);
    CHECK(check_scale_invariant(mu, gen, 40).verdict == Verdict::pass);
    CHECK(check_monotone_index(mu, gen, 40).verdict == Verdict::pass);
    CHECK(check_quasiconcave_corrected(mu, gen, 40, 10).verdict == Verdict::pass);
    // absorbed paths exercise the -inf branches
    CHECK(check_local_index(mu, absorbing, 40).verdict == Verdict::pass);
    CHECK(check_quasiconcave_corrected(mu, absorbing, 40, 10).verdict == Verdict::pass);
  }
  CHECK(check_gamma_monotone(gen, {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}, 40, 10).verdict ==
        Verdict::pass);
}

TEST_CASE("assessor-level martingale directions match the theory") {
  InstanceGen gen{.seed = 19};
  CHECK(check_supermartingale_assessor(Assessor::entropic(0.0), gen, 80).verdict == Verdict::pass);
  CHECK(check_supermartingale_assessor(Assessor::entropic(1.0), gen, 80).verdict == Verdict::pass);
  CHECK(check_submartingale_assessor(Assessor::entropic(0.0), gen, 80).verdict == Verdict::pass);
  CHECK(check_submartingale_assessor(Assessor::entropic(-1.0), gen, 80).verdict == Verdict::pass);
  // strict risk attitudes break the opposite direction
  CHECK(check_supermartingale_assessor(Assessor::entropic(-1.0), gen, 80).verdict ==
        Verdict::fail);
  CHECK(check_submartingale_assessor(Assessor::entropic(1.0), gen, 80).verdict == Verdict::fail);
  // negative AVaR is submartingale time consistent
  CHECK(check_submartingale_assessor(Assessor::neg_avar(0.5), gen, 80).verdict == Verdict::pass);
}

TEST_CASE("strong time consistency: entropic passes, neg_avar fails with a witness") {
  InstanceGen gen{.seed = 23};
  for (double g : {-1.0, 0.0, 0.8})
    CHECK(check_strong_tc(Assessor::entropic(g), gen, 120).verdict == Verdict::pass);

  auto rep = check_strong_tc(Assessor::neg_avar(0.5), gen, 500);
  CHECK(rep.verdict == Verdict::fail);
  REQUIRE_FALSE(rep.failures.empty());
  const auto& w = rep.failures[0];
  CHECK(w.violation > 1e-9);

  // the witness replays: same seed and trial give the same violating instance
  auto again = check_strong_tc(Assessor::neg_avar(0.5), gen, w.trial + 1);
  REQUIRE_FALSE(again.failures.empty());
  CHECK(again.failures[0].trial == w.trial);
  CHECK(again.failures[0].cell == w.cell);
  CHECK(again.failures[0].violation == w.violation);
  CHECK(again.failures[0].instance == w.instance);
}

TEST_CASE("liminf-level martingale checks with inconclusive handling") {
  auto sp = FilteredSpace::dyadic(2);
  // hand-made estimates: f_t = 1 on the root, f_s = (0.5, 1.5) on the halves
  LiminfEstimate at_t{sp, 0, 0, {ExtReal(1.0)}, {true}, {0.0}};
  LiminfEstimate at_s{sp, 1, 1, {ExtReal(0.5), ExtReal(1.5)}, {true, true}, {0.0, 0.0}};
  // E[f_s] = 1 = f_t: both directions hold with equality
  CHECK(check_supermartingale("sup", at_t, at_s, 1e-12, 5).verdict == Verdict::pass);
  CHECK(check_submartingale("sub", at_t, at_s, 1e-12, 5).verdict == Verdict::pass);

  LiminfEstimate low_t{sp, 0, 0, {ExtReal(0.2)}, {true}, {0.0}};
  auto sup = check_supermartingale("sup", low_t, at_s, 1e-12, 5);
  CHECK(sup.verdict == Verdict::fail);  // 0.2 < E[f_s] = 1
  CHECK(sup.failures[0].violation == doctest::Approx(0.8));
  CHECK(check_submartingale("sub", low_t, at_s, 1e-12, 5).verdict == Verdict::pass);

  // nonconverged s-cell makes the root inconclusive, never pass/fail
  LiminfEstimate shaky_s{sp, 1, 1, {ExtReal(0.5), ExtReal(1.5)}, {true, false}, {0.0, 9.9}};
  auto inc = check_supermartingale("sup", low_t, shaky_s, 1e-12, 5);
  CHECK(inc.verdict == Verdict::inconclusive);
  CHECK(inc.failures.empty());
}

TEST_CASE("constant process: equality case passes both directions") {
  auto sp = FilteredSpace::dyadic(2);
  auto ones = ValueProcess::from_log_generator(
      sp, [sp](int) { return RandomVariable::constant(sp, ExtReal(0.0)); }, true, "ones");
  EstimatorConfig cfg{60, 10, 1e-6};
  auto e0 = rsc(ones, 0, 1.0, cfg);
  auto e1 = rsc(ones, 1, 1.0, cfg);
  CHECK(check_supermartingale("sup", e0, e1, 1e-12, 3).verdict == Verdict::pass);
  CHECK(check_submartingale("sub", e0, e1, 1e-12, 3).verdict == Verdict::pass);
}

TEST_CASE("expected verdict table") {
  CHECK(expected_verdict("strong_tc", Assessor::entropic(1.0)) == Verdict::pass);
  CHECK(expected_verdict("strong_tc", Assessor::neg_avar(0.5)) == Verdict::fail);
  CHECK(expected_verdict("supermartingale", Assessor::entropic(1.0)) == Verdict::pass);
  CHECK(expected_verdict("supermartingale", Assessor::entropic(-1.0)) == Verdict::fail);
  CHECK(expected_verdict("submartingale", Assessor::entropic(-1.0)) == Verdict::pass);
  CHECK(expected_verdict("submartingale", Assessor::entropic(1.0)) == Verdict::fail);
  CHECK(expected_verdict("locality", Assessor::entropic(1.0)) == Verdict::pass);
}
