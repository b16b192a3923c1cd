#include "growthlab/growth.hpp"

#include <algorithm>
#include <cmath>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

ExtReal div_signed(ExtReal a, double c) {
  if (a.is_pos_inf()) return c > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
  if (a.is_neg_inf()) return c > 0 ? ExtReal::neg_inf() : ExtReal::pos_inf();
  return ExtReal(a.raw() / c);
}

bool is_risk_seeking(const Assessor& mu) {
  if (mu.kind() == AssessorKind::risk_seeking) return true;
  if (mu.kind() == AssessorKind::hat) return is_risk_seeking(mu.base());
  return false;
}

const Assessor* unwrap_entropic(const Assessor& mu) {
  if (mu.kind() == AssessorKind::entropic) return &mu;
  if (mu.kind() == AssessorKind::hat) return unwrap_entropic(mu.base());
  return nullptr;
}

/// Drives g_T for T = t+1..t_max, handling the cells where V_t = 0 (the
/// index is -inf there, or 0 for risk-seeking assessors) and checking that
/// zero values only ever spread (absorption).
void sweep_horizons(const ValueProcess& v, int t, const Assessor& mu, int t_max, bool normalize,
                    const std::function<void(int, const std::vector<ExtReal>&)>& emit) {
  if (t < 0 || t_max <= t) throw SchemaError("horizon sweep needs 0 <= t < t_max");
  const auto& space = *v.space();
  const bool seeking = is_risk_seeking(mu);

  if (v.is_iid()) {
    const Assessor* ent = unwrap_entropic(mu);
    if (ent == nullptr)
      throw UnsupportedProcess("iid product processes support the entropic family only");
    if (!normalize && t > 0)
      throw UnsupportedProcess("un-normalized index of an iid product needs t = 0");
    double kappa = iid_rsc_closed_form(v.iid_step(), ent->gamma());
    double lv0 = std::log(v.iid_v0());
    std::vector<ExtReal> g(1);
    for (int T = t + 1; T <= t_max; ++T) {
      double num = normalize ? (T - t) * kappa : lv0 + T * kappa;
      g[0] = ExtReal(num / T);
      emit(T, g);
    }
    return;
  }

  const int level = space.level(t);
  const auto& part = space.partition_at(level);
  const int ncell = static_cast<int>(part.size());

  RandomVariable log_vt = v.log_at(t);
  std::vector<bool> degenerate(ncell, false);
  for (int c = 0; c < ncell; ++c)
    degenerate[c] = log_vt.cell_value(level, c).is_neg_inf();

  std::vector<bool> was_zero(space.atom_count(), false);
  std::vector<ExtReal> g(ncell);
  for (int T = t + 1; T <= t_max; ++T) {
    RandomVariable x = normalize ? v.log_ratio(T, t) : v.log_at(T);
    // zero set may only grow
    for (int i = 0; i < space.atom_count(); ++i) {
      bool zero = x[i].is_neg_inf() && !degenerate[space.cell_of_atom(level, i)];
      if (was_zero[i] && !zero)
        throw AbsorptionViolation(v.describe() + " revives after zero at t=" + std::to_string(T));
      was_zero[i] = was_zero[i] || zero;
    }
    RandomVariable mx = mu.evaluate(t, x);
    for (int c = 0; c < ncell; ++c) {
      if (normalize && degenerate[c])
        g[c] = seeking ? ExtReal(0.0) : ExtReal::neg_inf();
      else
        g[c] = div_signed(mx.cell_value(level, c), static_cast<double>(T));
    }
    emit(T, g);
  }
}

/// Collects the tail window of a sweep and turns it into a LiminfEstimate.
class WindowCollector {
 public:
  WindowCollector(SpacePtr space, int t, int ncell, int t_max, int window, double tol)
      : space_(std::move(space)), t_(t), t_max_(t_max), window_(window), tol_(tol) {
    if (window < 1) throw WindowTooLarge("window must be >= 1");
    if (t_max - t <= window)
      throw WindowTooLarge("window " + std::to_string(window) + " does not fit below t_max " +
                           std::to_string(t_max));
    tail_.assign(ncell, {});
    for (auto& w : tail_) w.reserve(window + 1);
  }

  void feed(int T, const std::vector<ExtReal>& g) {
    if (T < t_max_ - window_) return;
    for (size_t c = 0; c < tail_.size(); ++c) tail_[c].push_back(g[c]);
  }

  LiminfEstimate finish() const {
    LiminfEstimate est;
    est.space = space_;
    est.t = t_;
    est.level = space_->level(t_);
    int ncell = static_cast<int>(tail_.size());
    est.cell_values.resize(ncell);
    est.converged.resize(ncell);
    est.tail_spread.resize(ncell);
    for (int c = 0; c < ncell; ++c) {
      ExtReal lo = tail_[c][0], hi = tail_[c][0];
      for (ExtReal v : tail_[c]) {
        lo = ext_min(lo, v);
        hi = ext_max(hi, v);
      }
      est.cell_values[c] = lo;
      est.tail_spread[c] = ext_abs_gap(lo, hi);
      est.converged[c] = lo.is_neg_inf() || est.tail_spread[c] < tol_;
    }
    return est;
  }

 private:
  SpacePtr space_;
  int t_, t_max_, window_;
  double tol_;
  std::vector<std::vector<ExtReal>> tail_;
};

int cells_for(const ValueProcess& v, int t) {
  return v.is_iid() ? 1 : v.space()->cell_count(t);
}

/// One specialized row: g_T(cell) = ln E[(V_T/V_t)^gamma | cell] / (gamma T),
/// given the log-ratios at horizon T.
void rsc_row(const FilteredSpace& space, int level, const std::vector<bool>& degenerate,
             const RandomVariable& lr, double gamma, int T, std::vector<ExtReal>& g) {
  const auto& part = space.partition_at(level);
  std::vector<double> w;
  std::vector<ExtReal> z;
  for (size_t c = 0; c < part.size(); ++c) {
    if (degenerate[c]) {
      g[c] = ExtReal::neg_inf();
      continue;
    }
    double pc = space.cell_prob(level, static_cast<int>(c));
    if (gamma == 0.0) {
      // E[ln(V_T/V_t) | cell] / T with the conditional-expectation conventions
      double pos = 0.0, neg = 0.0;
      bool ninf = false;
      for (int atom : part[c]) {
        ExtReal x = lr[atom];
        if (x.is_neg_inf())
          ninf = true;
        else if (x.raw() >= 0)
          pos += space.atom_prob(atom) * x.raw();
        else
          neg += space.atom_prob(atom) * (-x.raw());
      }
      g[c] = ninf ? ExtReal::neg_inf() : ExtReal((pos - neg) / (pc * T));
    } else {
      w.clear();
      z.clear();
      for (int atom : part[c]) {
        w.push_back(space.atom_prob(atom) / pc);
        z.push_back(ExtReal(gamma) * lr[atom]);
      }
      g[c] = div_signed(log_mean_exp(w, z), gamma * T);
    }
  }
}

}  // namespace

RandomVariable HorizonSequence::at_horizon(int T) const {
  return RandomVariable::from_cells(space, level, values[T - (t + 1)]);
}

RandomVariable LiminfEstimate::value() const {
  return RandomVariable::from_cells(space, level, cell_values);
}

bool LiminfEstimate::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

namespace {
HorizonSequence collect_seq(const ValueProcess& v, int t, const Assessor& mu, int t_max,
                            bool normalize) {
  HorizonSequence seq;
  seq.space = v.space();
  seq.t = t;
  seq.t_max = t_max;
  seq.level = v.space()->level(t);
  seq.values.reserve(t_max - t);
  sweep_horizons(v, t, mu, t_max, normalize,
                 [&](int, const std::vector<ExtReal>& g) { seq.values.push_back(g); });
  return seq;
}
}  // namespace

HorizonSequence horizon_seq(const ValueProcess& v, int t, const Assessor& mu, int t_max) {
  return collect_seq(v, t, mu, t_max, true);
}

HorizonSequence horizon_seq_unnormalized(const ValueProcess& v, int t, const Assessor& mu,
                                         int t_max) {
  return collect_seq(v, t, mu, t_max, false);
}

LiminfEstimate liminf_estimate(const HorizonSequence& seq, int window, double tol) {
  WindowCollector acc(seq.space, seq.t, static_cast<int>(seq.values[0].size()), seq.t_max, window,
                      tol);
  for (int T = seq.t + 1; T <= seq.t_max; ++T) acc.feed(T, seq.values[T - (seq.t + 1)]);
  return acc.finish();
}

LiminfEstimate growth_index(const ValueProcess& v, int t, const Assessor& mu,
                            const EstimatorConfig& cfg) {
  WindowCollector acc(v.space(), t, cells_for(v, t), cfg.t_max, cfg.window, cfg.tol);
  sweep_horizons(v, t, mu, cfg.t_max, /*normalize=*/true,
                 [&](int T, const std::vector<ExtReal>& g) { acc.feed(T, g); });
  return acc.finish();
}

std::vector<LiminfEstimate> rsc_sweep(const ValueProcess& v, int t,
                                      const std::vector<double>& gammas,
                                      const EstimatorConfig& cfg) {
  if (v.is_iid()) {
    std::vector<LiminfEstimate> out;
    out.reserve(gammas.size());
    for (double g : gammas) out.push_back(growth_index(v, t, Assessor::entropic(g), cfg));
    return out;
  }
  if (t < 0 || cfg.t_max <= t) throw SchemaError("horizon sweep needs 0 <= t < t_max");

  const auto& space = *v.space();
  const int level = space.level(t);
  const auto& part = space.partition_at(level);
  const int ncell = static_cast<int>(part.size());

  RandomVariable log_vt = v.log_at(t);
  std::vector<bool> degenerate(ncell);
  for (int c = 0; c < ncell; ++c) degenerate[c] = log_vt.cell_value(level, c).is_neg_inf();

  std::vector<WindowCollector> acc;
  acc.reserve(gammas.size());
  for (size_t i = 0; i < gammas.size(); ++i)
    acc.emplace_back(v.space(), t, ncell, cfg.t_max, cfg.window, cfg.tol);

  std::vector<ExtReal> g(ncell);
  std::vector<bool> was_zero(space.atom_count(), false);
  for (int T = t + 1; T <= cfg.t_max; ++T) {
    RandomVariable lr = v.log_ratio(T, t);
    for (int i = 0; i < space.atom_count(); ++i) {
      bool zero = lr[i].is_neg_inf() && !degenerate[space.cell_of_atom(level, i)];
      if (was_zero[i] && !zero)
        throw AbsorptionViolation(v.describe() + " revives after zero at t=" + std::to_string(T));
      was_zero[i] = was_zero[i] || zero;
    }
    for (size_t gi = 0; gi < gammas.size(); ++gi) {
      rsc_row(space, level, degenerate, lr, gammas[gi], T, g);
      acc[gi].feed(T, g);
    }
  }
  std::vector<LiminfEstimate> out;
  out.reserve(gammas.size());
  for (auto& a : acc) out.push_back(a.finish());
  return out;
}

LiminfEstimate rsc(const ValueProcess& v, int t, double gamma, const EstimatorConfig& cfg) {
  return rsc_sweep(v, t, {gamma}, cfg)[0];
}

HorizonSequence rsc_horizon_seq(const ValueProcess& v, int t, double gamma, int t_max) {
  if (v.is_iid()) return horizon_seq(v, t, Assessor::entropic(gamma), t_max);
  if (t < 0 || t_max <= t) throw SchemaError("horizon sweep needs 0 <= t < t_max");
  const auto& space = *v.space();
  const int level = space.level(t);
  const int ncell = space.cell_count(level);

  RandomVariable log_vt = v.log_at(t);
  std::vector<bool> degenerate(ncell);
  for (int c = 0; c < ncell; ++c) degenerate[c] = log_vt.cell_value(level, c).is_neg_inf();

  HorizonSequence seq;
  seq.space = v.space();
  seq.t = t;
  seq.t_max = t_max;
  seq.level = level;
  seq.values.reserve(t_max - t);
  std::vector<ExtReal> g(ncell);
  for (int T = t + 1; T <= t_max; ++T) {
    rsc_row(space, level, degenerate, v.log_ratio(T, t), gamma, T, g);
    seq.values.push_back(g);
  }
  return seq;
}

RscPlusResult rsc_plus(const ValueProcess& v, int t, double gamma, const EstimatorConfig& cfg) {
  if (!(gamma > 0.0)) throw SchemaError("rsc_plus needs gamma > 0");
  RscPlusResult res{rsc(v, t, gamma, cfg),
                    growth_index(v, t, Assessor::risk_seeking(Assessor::entropic(gamma)), cfg)};
  for (auto& val : res.clipped.cell_values) val = val.positive_part();
  return res;
}

double iid_rsc_closed_form(const std::vector<StepPoint>& step, double gamma) {
  if (step.empty()) throw BadDistribution("empty step distribution");
  double total = 0.0;
  for (const auto& s : step) {
    if (!(s.p > 0.0) || !std::isfinite(s.p) || !std::isfinite(s.x))
      throw BadDistribution("step distribution needs finite outcomes and positive weights");
    total += s.p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadDistribution("step probabilities sum to " + std::to_string(total));

  if (gamma == 0.0) {
    // pairwise from both ends: mirrored grids cancel exactly
    double sum = 0.0;
    int i = 0, j = static_cast<int>(step.size()) - 1;
    while (i < j) {
      sum += step[i].p * step[i].x + step[j].p * step[j].x;
      ++i;
      --j;
    }
    if (i == j) sum += step[i].p * step[i].x;
    return sum;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : step) m = std::max(m, gamma * s.x);
  double acc = 0.0;
  for (const auto& s : step) acc += s.p * std::exp(gamma * s.x - m);
  return (m + std::log(acc)) / gamma;
}

NormalizationGapReport check_enough1(const ValueProcess& v, int t, const Assessor& mu,
                                     const EstimatorConfig& cfg) {
  NormalizationGapReport rep;
  {
    WindowCollector acc(v.space(), t, cells_for(v, t), cfg.t_max, cfg.window, cfg.tol);
    sweep_horizons(v, t, mu, cfg.t_max, true,
                   [&](int T, const std::vector<ExtReal>& g) { acc.feed(T, g); });
    rep.normalized = acc.finish();
  }
  {
    WindowCollector acc(v.space(), t, cells_for(v, t), cfg.t_max, cfg.window, cfg.tol);
    sweep_horizons(v, t, mu, cfg.t_max, false,
                   [&](int T, const std::vector<ExtReal>& g) { acc.feed(T, g); });
    rep.unnormalized = acc.finish();
  }
  int ncell = static_cast<int>(rep.normalized.cell_values.size());
  rep.gap.resize(ncell);
  rep.inconclusive_cells = 0;
  for (int c = 0; c < ncell; ++c) {
    rep.gap[c] = ext_abs_gap(rep.normalized.cell_values[c], rep.unnormalized.cell_values[c]);
    if (!rep.normalized.converged[c] || !rep.unnormalized.converged[c]) ++rep.inconclusive_cells;
  }
  rep.bound = 0.0;
  if (v.is_iid()) {
    rep.bound = std::abs(std::log(v.iid_v0())) / (cfg.t_max - cfg.window);
  } else {
    RandomVariable log_vt = v.log_at(t);
    int level = v.space()->level(t);
    for (int c = 0; c < v.space()->cell_count(level); ++c) {
      ExtReal lv = log_vt.cell_value(level, c);
      if (lv.is_finite()) rep.bound = std::max(rep.bound, std::abs(lv.raw()));
    }
    rep.bound /= (cfg.t_max - cfg.window);
  }
  return rep;
}

bool NormalizationGapReport::pass(double tol) const {
  for (size_t c = 0; c < gap.size(); ++c) {
    if (!normalized.converged[c] || !unnormalized.converged[c]) continue;
    if (gap[c] > tol) return false;
  }
  return true;
}

}  // namespace growthlab
