#pragma once

#include <cstdint>
#include <optional>

#include "growthlab/growth.hpp"

namespace growthlab::lab {

struct Witness {
  std::uint64_t seed = 0;
  int trial = -1;
  std::string instance;
  int t = -1;
  int s = -1;
  int cell = -1;
  double violation = 0.0;
  std::string note;
};

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct CheckReport {
  std::string property;
  int trials = 0;
  std::vector<Witness> failures;
  int inconclusive_count = 0;
  Verdict verdict = Verdict::pass;

  void finish();  // derives the verdict from failures / inconclusive counts
};

/// Deterministic instance source: small random filtered spaces (depth and
/// branching capped so exhaustive per-cell assertions stay cheap), value
/// processes built as multiplicative walks, and bounded random variables.
struct InstanceGen {
  std::uint64_t seed = 0;
  int max_depth = 4;
  int max_branching = 3;
  double value_lo = 0.25;
  double value_hi = 4.0;
  bool positive_only = true;
  double absorption_prob = 0.0;  // per cell per step, when not positive_only
  int horizon = 12;
};

struct Instance {
  SpacePtr space;
  ValueProcess process;
  RandomVariable x;  // bounded variable for assessor-level checks
  int t = 0;
  int s = 1;  // t < s
  std::string name;
};

/// Deterministic in (gen.seed, trial): the same pair always rebuilds the
/// identical instance, which is what makes witnesses replayable.
Instance gen_instance(const InstanceGen& gen, int trial);

// --- assessor-level checks -------------------------------------------------

/// I_A f_t(X) = I_A f_t(I_A X), exact per cell.
CheckReport check_local(const Assessor& mu, const InstanceGen& gen, int trials);

/// X <= Y pointwise implies f_t(X) <= f_t(Y), within tol.
CheckReport check_monotone(const Assessor& mu, const InstanceGen& gen, int trials,
                           double tol = 1e-10);

/// f_t(X + m) = f_t(X) + m for finite F_t-measurable m.
CheckReport check_cash_additive(const Assessor& mu, const InstanceGen& gen, int trials,
                                double tol = 1e-12);

/// mu_s(X) >= mu_s(Y) everywhere implies mu_t(X) >= mu_t(Y) everywhere; for
/// the entropic family additionally the recursion mu_t(mu_s(X)) = mu_t(X) to
/// 1e-12. Besides independent pairs the search tries Y = mu_s(X) held
/// cellwise constant, which pins the premise and is where average value at
/// risk breaks.
CheckReport check_strong_tc(const Assessor& mu, const InstanceGen& gen, int trials);

/// f_t(X) >= E[f_s(X)|F_t] - tol (and the submartingale mirror), plus the
/// logical-equivalence check between the implication form and the
/// supermartingale inequality on the computed arrays.
CheckReport check_supermartingale_assessor(const Assessor& mu, const InstanceGen& gen, int trials,
                                           double tol = 1e-12);
CheckReport check_submartingale_assessor(const Assessor& mu, const InstanceGen& gen, int trials,
                                         double tol = 1e-12);

// --- index-level checks (per horizon) --------------------------------------

/// Pluggable sequence functional so the self-tests can plant broken indices.
using HorizonFn =
    std::function<HorizonSequence(const ValueProcess&, int, const Assessor&, int)>;

/// Per-horizon values on a masked cell equal the unmasked ones, bit for bit.
CheckReport check_local_index(const Assessor& mu, const InstanceGen& gen, int trials,
                              const HorizonFn& fn = nullptr);

/// g_T(scale_at(V, t, beta)) = g_T(V) bit for bit for F_t-measurable beta > 0.
CheckReport check_scale_invariant(const Assessor& mu, const InstanceGen& gen, int trials,
                                  const HorizonFn& fn = nullptr);

/// V <= V' pointwise implies mu_t(ln V_T)/T <= mu_t(ln V'_T)/T per horizon.
CheckReport check_monotone_index(const Assessor& mu, const InstanceGen& gen, int trials,
                                 double tol = 1e-10);

/// The finite-horizon inequality behind quasi-concavity, with the ln(lambda)
/// correction: mu_t(ln(lam V_T + (1-lam)V'_T)) >=
/// min(mu_t(ln V_T) + ln lam, mu_t(ln V'_T) + ln(1-lam)) - tol.
CheckReport check_quasiconcave_corrected(const Assessor& mu, const InstanceGen& gen, int trials,
                                         int t_max, double tol = 1e-10);

/// Criterion values nondecreasing along a gamma grid, per horizon and per
/// estimate, within 1e-12.
CheckReport check_gamma_monotone(const InstanceGen& gen, const std::vector<double>& gammas,
                                 int trials, int t_max);
CheckReport check_gamma_monotone(const std::vector<ValueProcess>& processes,
                                 const std::vector<double>& gammas, int t,
                                 const EstimatorConfig& cfg);

// --- liminf-level time consistency on computed estimates -------------------

/// Supermartingale inequality f_t >= E[f_s | F_t] - tol per converged cell,
/// plus the implication-form equivalence with canonical witness m_s = f_s
/// and randomized dominated alternatives. Nonconverged cells come back
/// inconclusive, never pass or fail.
CheckReport check_supermartingale(const std::string& name, const LiminfEstimate& at_t,
                                  const LiminfEstimate& at_s, double tol, std::uint64_t seed);
CheckReport check_submartingale(const std::string& name, const LiminfEstimate& at_t,
                                const LiminfEstimate& at_s, double tol, std::uint64_t seed);

/// What the theory predicts a campaign should return, so unexpected results
/// can drive exit codes.
Verdict expected_verdict(const std::string& property, const Assessor& mu);

}  // namespace growthlab::lab
