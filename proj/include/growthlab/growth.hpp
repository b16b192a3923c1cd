#pragma once

#include "growthlab/assessor.hpp"
#include "growthlab/process.hpp"

namespace growthlab {

struct EstimatorConfig {
  int t_max = 2000;
  int window = 50;    // tail window width; the estimate is a min over W+1 horizons
  double tol = 1e-3;  // convergence: tail spread below this flags a cell converged
};

/// Finite-horizon index sequence g_T = mu_t(ln(V_T/V_t)) / T for
/// T = t+1..t_max, stored per cell of the partition at min(t, depth).
struct HorizonSequence {
  SpacePtr space;
  int t = 0;
  int t_max = 0;
  int level = 0;
  std::vector<std::vector<ExtReal>> values;  // [T - (t+1)][cell]

  RandomVariable at_horizon(int T) const;
};

/// Tail-window realization of the liminf: per-cell minimum over the last
/// window horizons, with the max-min spread as a convergence diagnostic.
/// Cells that reached -inf are considered converged.
struct LiminfEstimate {
  SpacePtr space;
  int t = 0;
  int level = 0;
  std::vector<ExtReal> cell_values;
  std::vector<bool> converged;
  std::vector<double> tail_spread;

  RandomVariable value() const;
  bool all_converged() const;
};

HorizonSequence horizon_seq(const ValueProcess& v, int t, const Assessor& mu, int t_max);

/// Same sweep without the /V_t normalization: mu_t(ln V_T) / T. This is the
/// other side of the independence-of-current-state condition.
HorizonSequence horizon_seq_unnormalized(const ValueProcess& v, int t, const Assessor& mu,
                                         int t_max);

LiminfEstimate liminf_estimate(const HorizonSequence& seq, int window, double tol);

/// The index itself: liminf estimate of the horizon sequence. Streams the
/// sweep so only the tail window is held in memory; equal to the
/// horizon_seq + liminf_estimate composition.
LiminfEstimate growth_index(const ValueProcess& v, int t, const Assessor& mu,
                            const EstimatorConfig& cfg);

/// Risk sensitive criterion: growth_index with the entropic family, computed
/// through the specialization ln E[(V_T/V_t)^gamma | F_t] / (gamma T) with
/// log-sum-exp stabilization. rsc_sweep shares the per-horizon log ratios
/// across a gamma grid.
LiminfEstimate rsc(const ValueProcess& v, int t, double gamma, const EstimatorConfig& cfg);
std::vector<LiminfEstimate> rsc_sweep(const ValueProcess& v, int t,
                                      const std::vector<double>& gammas,
                                      const EstimatorConfig& cfg);
/// Per-horizon values of the specialization, for cross-checks against the
/// generic assessor path.
HorizonSequence rsc_horizon_seq(const ValueProcess& v, int t, double gamma, int t_max);

/// Positive part of the criterion for gamma > 0, cross-checked against the
/// risk-seeking route that assesses only positive log-returns.
struct RscPlusResult {
  LiminfEstimate clipped;       // max(rsc, 0) per cell
  LiminfEstimate seeking_path;  // liminf of mu([ln V_T/V_t]+) / T
};
RscPlusResult rsc_plus(const ValueProcess& v, int t, double gamma, const EstimatorConfig& cfg);

/// Exact constant value of the criterion for an i.i.d. product process:
/// the per-step cumulant ln(sum p_j e^{gamma x_j}) / gamma (the mean at
/// gamma = 0, summed pairwise from both ends so symmetric grids cancel
/// exactly).
double iid_rsc_closed_form(const std::vector<StepPoint>& step, double gamma);

/// Compares the index with and without the /V_t normalization; their gap is
/// what decides whether the index is independent of the current state.
struct NormalizationGapReport {
  LiminfEstimate normalized;
  LiminfEstimate unnormalized;
  std::vector<double> gap;  // per cell; 0 when both sides are -inf
  double bound;             // max_cell |ln V_t| / (t_max - window)
  int inconclusive_cells;   // cells with a nonconverged side

  bool pass(double tol) const;
};
NormalizationGapReport check_enough1(const ValueProcess& v, int t, const Assessor& mu,
                                     const EstimatorConfig& cfg);

}  // namespace growthlab
