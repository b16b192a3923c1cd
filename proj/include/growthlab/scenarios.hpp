#pragma once

#include <cstdint>

#include "growthlab/growth.hpp"

namespace growthlab::scenarios {

/// One expected-vs-computed line of a scenario reproduction.
struct ScenarioRecord {
  std::string check;
  std::string expected;
  std::string computed;
  double gap = 0.0;
  bool pass = false;
};

struct ScenarioResult {
  std::string name;
  std::string params;
  std::vector<ScenarioRecord> records;

  bool all_pass() const;
};

// --- process builders -------------------------------------------------------

/// The dyadic worked example: on the depth-D uniform dyadic space, X is the
/// atom midpoint and V_T = exp(T * E[X | F_min(T,D)]). Strictly positive.
ValueProcess dyadic_vhat(int depth);

/// Closed-form target of the criterion for dyadic_vhat at (t, gamma, cell):
/// left endpoint of the cell for gamma < 0, midpoint at gamma = 0, right
/// endpoint for gamma > 0, with the exact +-2^-(D+1) depth-truncation shift
/// on the endpoint regimes.
double dyadic_vhat_expected(int depth, int t, double gamma, int cell);

/// Counterexample processes on the uniform N-grid over [0,1] (F_1 = atoms).
/// The branch set [0, 1/T] is realized as the atoms lying fully inside it
/// (at least one), so horizons are capped at T <= N.
ValueProcess notacc_process(int grid_n);  // 1/T on the branch, e^T off it
ValueProcess notrej_process(int grid_n);  // T e^T on the branch, 1 off it

/// The gamma = 0 pair: e^{-T^2}/e^T branches and e^{T^2}/1 branches.
std::pair<ValueProcess, ValueProcess> gamma0_counterexamples(int grid_n);

// --- scenario runs -----------------------------------------------------------

ScenarioResult run_dyadic_vhat(int depth, const EstimatorConfig& cfg, double tol);

/// Supermartingale failure at gamma = -1: phi_1 = 1 off the first atom,
/// phi_0 near zero, and the Prop-4.2 inequality broken by ~1.
ScenarioResult run_notacc(int grid_n, const EstimatorConfig& cfg);

/// Submartingale mirror at gamma = +1.
ScenarioResult run_notrej(int grid_n, const EstimatorConfig& cfg);

/// gamma = 0 analogues; the grid keeps an exact-arithmetic violation of
/// size ~1/N. run_gamma0_a also carries the risk-seeking positive-part
/// mismatch checks (gamma = 0 and the e^{-T}/e^{T} split at gamma = -1).
ScenarioResult run_gamma0_a(int grid_n);
ScenarioResult run_gamma0_b(int grid_n);

/// esssup + essinf on a (+inf, -inf, 0) variable: the direct evaluation gives
/// -inf, the hat-extension +inf; on bounded variables they coincide.
ScenarioResult run_fatou_remark(int bounded_trials = 50, std::uint64_t seed = 1);

/// K-point quantized standard normal step: the criterion constant lands on
/// gamma/2 within the quantization tolerance, exactly 0 at gamma = 0.
ScenarioResult run_gaussian_iid(int k_points, double tol = 2e-3);

/// Equiprobable-bin conditional-mean quantization of N(0,1), mirrored so the
/// grid is antisymmetric to the last bit.
std::vector<StepPoint> gaussian_step(int k_points);

const std::vector<std::string>& scenario_names();

}  // namespace growthlab::scenarios
