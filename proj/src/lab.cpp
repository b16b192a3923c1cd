#include "growthlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "growthlab/errors.hpp"

namespace growthlab::lab {

namespace {

/// All draws go through explicit bit arithmetic so instances replay
/// identically across standard libraries.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed, int trial)
      : eng(seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(trial) + 1))) {}

  double uniform(double lo, double hi) {
    double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }
};

struct TreeNode {
  std::vector<TreeNode> kids;
  int leaves = 1;
};

TreeNode grow_tree(Rng& rng, int depth, int max_branching, bool force_split) {
  TreeNode node;
  if (depth == 0) return node;
  int b = force_split && max_branching >= 2 ? rng.uniform_int(2, max_branching)
                                            : rng.uniform_int(1, max_branching);
  node.leaves = 0;
  for (int i = 0; i < b; ++i) {
    node.kids.push_back(grow_tree(rng, depth - 1, max_branching, false));
    node.leaves += node.kids.back().leaves;
  }
  return node;
}

void collect_level(const TreeNode& node, int level, int start,
                   std::vector<std::pair<int, int>>& spans) {
  if (level == 0 || node.kids.empty()) {
    spans.emplace_back(start, node.leaves);
    return;
  }
  for (const auto& kid : node.kids) {
    collect_level(kid, level - 1, start, spans);
    start += kid.leaves;
  }
}

SpacePtr random_space(Rng& rng, int max_depth, int max_branching, int* depth_out) {
  int depth = rng.uniform_int(1, max_depth);
  TreeNode root = grow_tree(rng, depth, max_branching, true);

  int n = root.leaves;
  std::vector<Atom> atoms(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms[i] = {"w" + std::to_string(i), rng.uniform(0.2, 1.0)};
    total += atoms[i].p;
  }
  for (auto& a : atoms) a.p /= total;

  std::vector<std::vector<std::vector<std::string>>> partitions;
  for (int level = 0; level <= depth; ++level) {
    std::vector<std::pair<int, int>> spans;
    collect_level(root, level, 0, spans);
    std::vector<std::vector<std::string>> cells;
    for (auto [start, count] : spans) {
      std::vector<std::string> ids;
      for (int i = start; i < start + count; ++i) ids.push_back(atoms[i].id);
      cells.push_back(std::move(ids));
    }
    partitions.push_back(std::move(cells));
  }
  *depth_out = depth;
  return FilteredSpace::build(std::move(atoms), partitions);
}

ValueProcess random_process(Rng& rng, const SpacePtr& sp, const InstanceGen& gen) {
  std::vector<RandomVariable> vals;
  std::vector<ExtReal> prev = {ExtReal(rng.uniform(gen.value_lo, gen.value_hi))};
  vals.push_back(RandomVariable::from_cells(sp, 0, prev));
  for (int t = 1; t <= gen.horizon; ++t) {
    int level = sp->level(t);
    int prev_level = sp->level(t - 1);
    std::vector<ExtReal> cur(sp->cell_count(level));
    for (int c = 0; c < sp->cell_count(level); ++c) {
      int atom = sp->partition_at(level)[c][0];
      ExtReal parent = prev[sp->cell_of_atom(prev_level, atom)];
      if (parent == ExtReal(0.0) ||
          (!gen.positive_only && rng.bernoulli(gen.absorption_prob))) {
        cur[c] = ExtReal(0.0);
      } else {
        double v = parent.raw() * rng.uniform(0.5, 1.7);
        cur[c] = ExtReal(std::clamp(v, gen.value_lo * 0.01, gen.value_hi * 100.0));
      }
    }
    vals.push_back(RandomVariable::from_cells(sp, level, cur));
    prev = cur;
  }
  return ValueProcess::from_values(AdaptedProcess::explicit_values(sp, vals));
}

RandomVariable random_bounded(Rng& rng, const SpacePtr& sp, double lo = -3.0, double hi = 3.0) {
  std::vector<ExtReal> v(sp->atom_count());
  for (auto& x : v) x = ExtReal(rng.uniform(lo, hi));
  return RandomVariable(sp, v);
}

RandomVariable random_cellwise(Rng& rng, const SpacePtr& sp, int t, double lo, double hi) {
  std::vector<ExtReal> cells(sp->cell_count(t));
  for (auto& c : cells) c = ExtReal(rng.uniform(lo, hi));
  return RandomVariable::from_cells(sp, sp->level(t), cells);
}

/// Nonempty strict subset of the cells at level t (needs >= 2 cells).
std::vector<int> random_cell_subset(Rng& rng, const SpacePtr& sp, int t) {
  int ncell = sp->cell_count(t);
  std::vector<int> chosen;
  for (int c = 0; c < ncell; ++c)
    if (rng.bernoulli(0.5)) chosen.push_back(c);
  if (chosen.empty()) chosen.push_back(rng.uniform_int(0, ncell - 1));
  if (static_cast<int>(chosen.size()) == ncell) chosen.pop_back();
  return chosen;
}

Witness make_witness(const InstanceGen& gen, int trial, const Instance& inst, int cell,
                     double violation, std::string note) {
  return Witness{gen.seed, trial, inst.name, inst.t, inst.s, cell, violation, std::move(note)};
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

void CheckReport::finish() {
  if (!failures.empty())
    verdict = Verdict::fail;
  else if (inconclusive_count > 0)
    verdict = Verdict::inconclusive;
  else
    verdict = Verdict::pass;
}

Instance gen_instance(const InstanceGen& gen, int trial) {
  Rng rng(gen.seed, trial);
  int depth = 0;
  SpacePtr space = random_space(rng, gen.max_depth, gen.max_branching, &depth);
  ValueProcess process = random_process(rng, space, gen);
  RandomVariable x = random_bounded(rng, space);
  int t = rng.uniform_int(0, depth);
  int s = rng.uniform_int(t + 1, depth + 2);
  std::string name = "seed=" + std::to_string(gen.seed) + ",trial=" + std::to_string(trial) +
                     ",atoms=" + std::to_string(space->atom_count()) +
                     ",depth=" + std::to_string(depth);
  return Instance{std::move(space), std::move(process), std::move(x), t, s, std::move(name)};
}

// ---------------------------------------------------------------------------
// assessor-level checks
// ---------------------------------------------------------------------------

CheckReport check_local(const Assessor& mu, const InstanceGen& gen, int trials) {
  CheckReport rep;
  rep.property = "locality(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xA5A5, trial);
    int t = inst.t;
    if (inst.space->cell_count(t) < 2) t = inst.space->depth();
    if (inst.space->cell_count(t) < 2) continue;
    auto cells = random_cell_subset(rng, inst.space, t);
    auto mask = indicator(inst.space, t, cells);
    auto fx = mu.evaluate(t, inst.x);
    auto fm = mu.evaluate(t, mask * inst.x);
    for (int c : cells) {
      int atom = inst.space->partition_at(t)[c][0];
      if (!(fx[atom] == fm[atom])) {
        rep.failures.push_back(make_witness(gen, trial, inst, c, ext_abs_gap(fx[atom], fm[atom]),
                                            "masked evaluation differs inside the mask"));
        break;
      }
    }
  }
  rep.finish();
  return rep;
}

CheckReport check_monotone(const Assessor& mu, const InstanceGen& gen, int trials, double tol) {
  CheckReport rep;
  rep.property = "monotonicity(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xB6B6, trial);
    double hi = trial % 7 == 0 ? 0.0 : 2.0;  // include the zero-perturbation edge
    auto bump = random_bounded(rng, inst.space, 0.0, hi);
    auto fx = mu.evaluate(inst.t, inst.x);
    auto fy = mu.evaluate(inst.t, inst.x + bump);
    for (int i = 0; i < fx.size(); ++i) {
      if (!ext_ge_tol(fy[i], fx[i], tol)) {
        rep.failures.push_back(make_witness(gen, trial, inst, inst.space->cell_of_atom(inst.t, i),
                                            ext_abs_gap(fy[i], fx[i]),
                                            "value decreased under a nonnegative bump"));
        break;
      }
    }
  }
  rep.finish();
  return rep;
}

CheckReport check_cash_additive(const Assessor& mu, const InstanceGen& gen, int trials,
                                double tol) {
  CheckReport rep;
  rep.property = "cash_additivity(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xC7C7, trial);
    auto m = random_cellwise(rng, inst.space, inst.t, -2.0, 2.0);
    auto shifted = mu.evaluate(inst.t, inst.x + m);
    auto direct = mu.evaluate(inst.t, inst.x) + m;
    for (int i = 0; i < shifted.size(); ++i) {
      double gap = ext_abs_gap(shifted[i], direct[i]);
      if (gap > tol) {
        rep.failures.push_back(make_witness(gen, trial, inst, inst.space->cell_of_atom(inst.t, i),
                                            gap, "f(X+m) != f(X)+m"));
        break;
      }
    }
  }
  rep.finish();
  return rep;
}

CheckReport check_strong_tc(const Assessor& mu, const InstanceGen& gen, int trials) {
  CheckReport rep;
  rep.property = "strong_tc(" + mu.describe() + ")";
  rep.trials = trials;
  const bool entropic = mu.kind() == AssessorKind::entropic;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xD8D8, trial);
    int t = inst.t, s = inst.s;
    auto x = inst.x;
    auto y = trial % 11 == 0 ? x : random_bounded(rng, inst.space);  // include X = Y
    auto mu_sx = mu.evaluate(s, x);

    std::vector<std::pair<RandomVariable, RandomVariable>> pairs = {
        {x, y}, {y, x}, {x, mu_sx}};  // the third pins the premise exactly
    bool witnessed = false;
    for (const auto& [a, b] : pairs) {
      auto sa = mu.evaluate(s, a);
      auto sb = mu.evaluate(s, b);
      bool premise = true;
      for (int i = 0; i < sa.size() && premise; ++i) premise = ext_ge_tol(sa[i], sb[i], 1e-12);
      if (!premise) continue;
      auto ta = mu.evaluate(t, a);
      auto tb = mu.evaluate(t, b);
      for (int i = 0; i < ta.size(); ++i) {
        if (!ext_ge_tol(ta[i], tb[i], 1e-9)) {
          rep.failures.push_back(make_witness(gen, trial, inst, inst.space->cell_of_atom(t, i),
                                              ext_abs_gap(ta[i], tb[i]),
                                              "mu_s ordered but mu_t reversed"));
          witnessed = true;
          break;
        }
      }
      if (witnessed) break;
    }
    if (witnessed) continue;

    if (entropic) {
      auto nested = mu.evaluate(t, mu_sx);
      auto direct = mu.evaluate(t, x);
      for (int i = 0; i < nested.size(); ++i) {
        double gap = ext_abs_gap(nested[i], direct[i]);
        if (gap > 1e-12) {
          rep.failures.push_back(make_witness(gen, trial, inst, inst.space->cell_of_atom(t, i),
                                              gap, "recursion mu_t(mu_s(X)) != mu_t(X)"));
          break;
        }
      }
    }
  }
  rep.finish();
  return rep;
}

namespace {

/// Shared core of the martingale-direction checks: sign +1 asserts
/// f_t >= E[f_s|F_t] - tol, sign -1 the mirror. Also replays the implication
/// form of time consistency with the canonical witness m_s = f_s plus
/// dominated (or dominating) alternatives and demands, as pure logic, that
/// it match the inequality.
void martingale_core(const RandomVariable& f_t, const RandomVariable& f_s, int t, int sign,
                     double tol, Rng& rng, CheckReport& rep, const Witness& stub) {
  auto proj = cond_expect(f_s, t);
  bool inequality_holds = true;
  for (int i = 0; i < f_t.size(); ++i) {
    bool ok = sign > 0 ? ext_ge_tol(f_t[i], proj[i], tol) : ext_ge_tol(proj[i], f_t[i], tol);
    if (!ok) {
      Witness w = stub;
      w.cell = i;
      w.violation = ext_abs_gap(f_t[i], proj[i]);
      w.note = sign > 0 ? "f_t < E[f_s|F_t] beyond tolerance" : "f_t > E[f_s|F_t] beyond tolerance";
      rep.failures.push_back(std::move(w));
      inequality_holds = false;
      break;
    }
  }

  auto implication = [&](const RandomVariable& m) {
    auto em = cond_expect(m, t);
    for (int i = 0; i < f_t.size(); ++i) {
      bool ok = sign > 0 ? ext_ge_tol(f_t[i], em[i], tol) : ext_ge_tol(em[i], f_t[i], tol);
      if (!ok) return false;
    }
    return true;
  };
  if (implication(f_s) != inequality_holds) {
    Witness w = stub;
    w.note = "canonical witness disagrees with the inequality";
    rep.failures.push_back(std::move(w));
  }
  for (int k = 0; k < 3 && inequality_holds; ++k) {
    auto noise = random_bounded(rng, f_t.space(), 0.0, 1.5);
    auto m = sign > 0 ? f_s - noise : f_s + noise;
    if (!implication(m)) {
      Witness w = stub;
      w.note = "dominated witness breaks the implication";
      rep.failures.push_back(std::move(w));
      break;
    }
  }
}

CheckReport martingale_assessor(const Assessor& mu, const InstanceGen& gen, int trials, double tol,
                                int sign, const char* name) {
  CheckReport rep;
  rep.property = std::string(name) + "(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xE9E9, trial);
    auto f_t = mu.evaluate(inst.t, inst.x);
    auto f_s = mu.evaluate(inst.s, inst.x);
    size_t before = rep.failures.size();
    martingale_core(f_t, f_s, inst.t, sign, tol, rng, rep,
                    make_witness(gen, trial, inst, -1, 0.0, ""));
    if (rep.failures.size() > before && rep.failures.size() > 8) break;  // enough witnesses
  }
  rep.finish();
  return rep;
}

}  // namespace

CheckReport check_supermartingale_assessor(const Assessor& mu, const InstanceGen& gen, int trials,
                                           double tol) {
  return martingale_assessor(mu, gen, trials, tol, +1, "supermartingale");
}

CheckReport check_submartingale_assessor(const Assessor& mu, const InstanceGen& gen, int trials,
                                         double tol) {
  return martingale_assessor(mu, gen, trials, tol, -1, "submartingale");
}

// ---------------------------------------------------------------------------
// index-level checks
// ---------------------------------------------------------------------------

namespace {
HorizonSequence default_seq(const ValueProcess& v, int t, const Assessor& mu, int t_max) {
  return horizon_seq(v, t, mu, t_max);
}
}  // namespace

CheckReport check_local_index(const Assessor& mu, const InstanceGen& gen, int trials,
                              const HorizonFn& fn) {
  const HorizonFn seq_fn = fn ? fn : default_seq;
  CheckReport rep;
  rep.property = "locality_index(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0xF1F1, trial);
    int t = inst.t;
    if (inst.space->cell_count(t) < 2) t = inst.space->depth();
    if (inst.space->cell_count(t) < 2) continue;
    auto cells = random_cell_subset(rng, inst.space, t);
    auto mask = indicator(inst.space, t, cells);
    SpacePtr sp = inst.space;
    ValueProcess v = inst.process;
    auto masked = ValueProcess::from_log_generator(
        sp,
        [v, mask, sp, t](int T) {
          auto lv = v.log_at(T);
          if (T < t) return lv;
          std::vector<ExtReal> out(lv.size());
          for (int i = 0; i < lv.size(); ++i)
            out[i] = mask[i] == ExtReal(1.0) ? lv[i] : ExtReal::neg_inf();
          return RandomVariable(sp, out);
        },
        false, "masked");
    auto s1 = seq_fn(inst.process, t, mu, gen.horizon);
    auto s2 = seq_fn(masked, t, mu, gen.horizon);
    bool bad = false;
    for (size_t k = 0; k < s1.values.size() && !bad; ++k)
      for (int c : cells)
        if (!(s1.values[k][c] == s2.values[k][c])) {
          rep.failures.push_back(make_witness(gen, trial, inst, c,
                                              ext_abs_gap(s1.values[k][c], s2.values[k][c]),
                                              "masked index differs inside the mask"));
          bad = true;
          break;
        }
  }
  rep.finish();
  return rep;
}

CheckReport check_scale_invariant(const Assessor& mu, const InstanceGen& gen, int trials,
                                  const HorizonFn& fn) {
  const HorizonFn seq_fn = fn ? fn : default_seq;
  CheckReport rep;
  rep.property = "scale_invariance(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0x1212, trial);
    int t = inst.t;
    auto beta = trial % 9 == 0 ? RandomVariable::constant(inst.space, ExtReal(10.0))
                               : random_cellwise(rng, inst.space, t, 0.1, 10.0);
    auto scaled = scale_at(inst.process, t, beta);
    auto s1 = seq_fn(inst.process, t, mu, gen.horizon);
    auto s2 = seq_fn(scaled, t, mu, gen.horizon);
    bool bad = false;
    for (size_t k = 0; k < s1.values.size() && !bad; ++k)
      for (size_t c = 0; c < s1.values[k].size(); ++c)
        if (!(s1.values[k][c] == s2.values[k][c])) {
          rep.failures.push_back(make_witness(gen, trial, inst, static_cast<int>(c),
                                              ext_abs_gap(s1.values[k][c], s2.values[k][c]),
                                              "scaling leaked into the index"));
          bad = true;
          break;
        }
  }
  rep.finish();
  return rep;
}

CheckReport check_monotone_index(const Assessor& mu, const InstanceGen& gen, int trials,
                                 double tol) {
  CheckReport rep;
  rep.property = "monotonicity_index(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0x2323, trial);
    // dominating process: multiply by an adapted factor >= 1
    std::vector<RandomVariable> vals;
    for (int T = 0; T <= gen.horizon; ++T) {
      auto factor = random_cellwise(rng, inst.space, T, 1.0, 3.0);
      vals.push_back(inst.process.at(T) * factor);
    }
    auto dominating = ValueProcess::from_values(AdaptedProcess::explicit_values(inst.space, vals));
    auto s1 = horizon_seq_unnormalized(inst.process, inst.t, mu, gen.horizon);
    auto s2 = horizon_seq_unnormalized(dominating, inst.t, mu, gen.horizon);
    bool bad = false;
    for (size_t k = 0; k < s1.values.size() && !bad; ++k)
      for (size_t c = 0; c < s1.values[k].size(); ++c)
        if (!ext_ge_tol(s2.values[k][c], s1.values[k][c], tol)) {
          rep.failures.push_back(make_witness(gen, trial, inst, static_cast<int>(c),
                                              ext_abs_gap(s2.values[k][c], s1.values[k][c]),
                                              "index decreased under pointwise domination"));
          bad = true;
          break;
        }
  }
  rep.finish();
  return rep;
}

CheckReport check_quasiconcave_corrected(const Assessor& mu, const InstanceGen& gen, int trials,
                                         int t_max, double tol) {
  CheckReport rep;
  rep.property = "quasiconcavity_corrected(" + mu.describe() + ")";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    Rng rng(gen.seed ^ 0x3434, trial);
    // second process on the same space
    auto w = [&] {
      std::vector<RandomVariable> vals;
      for (int T = 0; T <= gen.horizon; ++T)
        vals.push_back(random_cellwise(rng, inst.space, T, gen.value_lo, gen.value_hi));
      return ValueProcess::from_values(AdaptedProcess::explicit_values(inst.space, vals));
    }();
    int t = inst.t;
    auto lam = random_cellwise(rng, inst.space, t, 0.05, 0.95);
    auto mixed = mix_processes(inst.process, w, t, lam);

    int horizon = std::min(t_max, gen.horizon);
    auto sm = horizon_seq_unnormalized(mixed, t, mu, horizon);
    auto sv = horizon_seq_unnormalized(inst.process, t, mu, horizon);
    auto sw = horizon_seq_unnormalized(w, t, mu, horizon);
    bool bad = false;
    int level = inst.space->level(t);
    for (size_t k = 0; k < sm.values.size() && !bad; ++k) {
      for (size_t c = 0; c < sm.values[k].size(); ++c) {
        int atom = inst.space->partition_at(level)[c][0];
        double T = static_cast<double>(t + 1 + static_cast<int>(k));
        ExtReal lhs = sm.values[k][c] * ExtReal(T);
        ExtReal rhs = ext_min(sv.values[k][c] * ExtReal(T) + ExtReal(std::log(lam[atom].raw())),
                              sw.values[k][c] * ExtReal(T) +
                                  ExtReal(std::log(1.0 - lam[atom].raw())));
        if (!ext_ge_tol(lhs, rhs, tol)) {
          rep.failures.push_back(make_witness(gen, trial, inst, static_cast<int>(c),
                                              ext_abs_gap(lhs, rhs),
                                              "mixture fell below the corrected minimum"));
          bad = true;
          break;
        }
      }
    }
    // boundary lam = 1 reduces to the first process exactly
    if (!bad) {
      auto boundary =
          mix_processes(inst.process, w, t, RandomVariable::constant(inst.space, ExtReal(1.0)));
      auto sb = horizon_seq_unnormalized(boundary, t, mu, horizon);
      for (size_t k = 0; k < sb.values.size() && !bad; ++k)
        for (size_t c = 0; c < sb.values[k].size(); ++c)
          if (!(sb.values[k][c] == sv.values[k][c])) {
            rep.failures.push_back(make_witness(gen, trial, inst, static_cast<int>(c), 0.0,
                                                "lambda = 1 boundary is not the identity"));
            bad = true;
            break;
          }
    }
  }
  rep.finish();
  return rep;
}

CheckReport check_gamma_monotone(const InstanceGen& gen, const std::vector<double>& gammas,
                                 int trials, int t_max) {
  CheckReport rep;
  rep.property = "gamma_monotonicity";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Instance inst = gen_instance(gen, trial);
    int horizon = std::min(t_max, gen.horizon);
    std::vector<HorizonSequence> seqs;
    seqs.reserve(gammas.size());
    for (double g : gammas)
      seqs.push_back(horizon_seq(inst.process, inst.t, Assessor::entropic(g), horizon));
    bool bad = false;
    for (size_t gi = 0; gi + 1 < gammas.size() && !bad; ++gi)
      for (size_t k = 0; k < seqs[gi].values.size() && !bad; ++k)
        for (size_t c = 0; c < seqs[gi].values[k].size(); ++c)
          if (!ext_ge_tol(seqs[gi + 1].values[k][c], seqs[gi].values[k][c], 1e-12)) {
            rep.failures.push_back(make_witness(
                gen, trial, inst, static_cast<int>(c),
                ext_abs_gap(seqs[gi + 1].values[k][c], seqs[gi].values[k][c]),
                "per-horizon value decreased along the gamma grid"));
            bad = true;
            break;
          }
  }
  rep.finish();
  return rep;
}

CheckReport check_gamma_monotone(const std::vector<ValueProcess>& processes,
                                 const std::vector<double>& gammas, int t,
                                 const EstimatorConfig& cfg) {
  CheckReport rep;
  rep.property = "gamma_monotonicity";
  rep.trials = static_cast<int>(processes.size());
  int trial = 0;
  for (const auto& v : processes) {
    auto ests = rsc_sweep(v, t, gammas, cfg);
    for (size_t gi = 0; gi + 1 < gammas.size(); ++gi)
      for (size_t c = 0; c < ests[gi].cell_values.size(); ++c) {
        if (!ests[gi].converged[c] || !ests[gi + 1].converged[c]) {
          ++rep.inconclusive_count;
          continue;
        }
        if (!ext_ge_tol(ests[gi + 1].cell_values[c], ests[gi].cell_values[c], 1e-12))
          rep.failures.push_back(
              Witness{0, trial, v.describe(), t, -1, static_cast<int>(c),
                      ext_abs_gap(ests[gi + 1].cell_values[c], ests[gi].cell_values[c]),
                      "estimate decreased along the gamma grid"});
      }
    ++trial;
  }
  rep.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// liminf-level time consistency
// ---------------------------------------------------------------------------

namespace {

CheckReport martingale_estimates(const std::string& name, const LiminfEstimate& at_t,
                                 const LiminfEstimate& at_s, double tol, std::uint64_t seed,
                                 int sign) {
  CheckReport rep;
  rep.property = name;
  rep.trials = 1;
  const auto& space = *at_t.space;
  RandomVariable f_t = at_t.value();
  RandomVariable f_s = at_s.value();
  auto proj = cond_expect(f_s, at_t.t);

  // a t-cell is decidable when it and every s-cell inside it converged
  int ncell_t = space.cell_count(at_t.level);
  std::vector<bool> decidable(ncell_t, true);
  bool all_decidable = true;
  for (int c = 0; c < ncell_t; ++c) {
    if (!at_t.converged[c]) decidable[c] = false;
    for (int atom : space.partition_at(at_t.level)[c])
      if (!at_s.converged[space.cell_of_atom(at_s.level, atom)]) decidable[c] = false;
    if (!decidable[c]) {
      ++rep.inconclusive_count;
      all_decidable = false;
    }
  }

  bool inequality_holds = true;
  for (int c = 0; c < ncell_t; ++c) {
    if (!decidable[c]) continue;
    int atom = space.partition_at(at_t.level)[c][0];
    bool ok =
        sign > 0 ? ext_ge_tol(f_t[atom], proj[atom], tol) : ext_ge_tol(proj[atom], f_t[atom], tol);
    if (!ok) {
      inequality_holds = false;
      rep.failures.push_back(Witness{seed, 0, "estimates", at_t.t, at_s.t, c,
                                     ext_abs_gap(f_t[atom], proj[atom]),
                                     sign > 0 ? "f_t < E[f_s|F_t]" : "f_t > E[f_s|F_t]"});
    }
  }

  if (all_decidable) {
    auto implication = [&](const RandomVariable& m) {
      auto em = cond_expect(m, at_t.t);
      for (int i = 0; i < f_t.size(); ++i) {
        bool ok = sign > 0 ? ext_ge_tol(f_t[i], em[i], tol) : ext_ge_tol(em[i], f_t[i], tol);
        if (!ok) return false;
      }
      return true;
    };
    if (implication(f_s) != inequality_holds)
      rep.failures.push_back(Witness{seed, 0, "estimates", at_t.t, at_s.t, -1, 0.0,
                                     "canonical witness disagrees with the inequality"});
    Rng rng(seed, 1);
    for (int k = 0; k < 3 && inequality_holds; ++k) {
      auto noise = random_bounded(rng, at_t.space, 0.0, 1.0);
      auto m = sign > 0 ? f_s - noise : f_s + noise;
      if (!implication(m)) {
        rep.failures.push_back(Witness{seed, 0, "estimates", at_t.t, at_s.t, -1, 0.0,
                                       "dominated witness breaks the implication"});
        break;
      }
    }
  }
  rep.finish();
  return rep;
}

}  // namespace

CheckReport check_supermartingale(const std::string& name, const LiminfEstimate& at_t,
                                  const LiminfEstimate& at_s, double tol, std::uint64_t seed) {
  return martingale_estimates(name, at_t, at_s, tol, seed, +1);
}

CheckReport check_submartingale(const std::string& name, const LiminfEstimate& at_t,
                                const LiminfEstimate& at_s, double tol, std::uint64_t seed) {
  return martingale_estimates(name, at_t, at_s, tol, seed, -1);
}

Verdict expected_verdict(const std::string& property, const Assessor& mu) {
  const bool entropic = mu.kind() == AssessorKind::entropic;
  if (property == "strong_tc")
    return mu.kind() == AssessorKind::neg_avar ? Verdict::fail : Verdict::pass;
  if (property == "supermartingale" && entropic)
    return mu.gamma() >= 0.0 ? Verdict::pass : Verdict::fail;
  if (property == "submartingale" && entropic)
    return mu.gamma() <= 0.0 ? Verdict::pass : Verdict::fail;
  return Verdict::pass;
}

}  // namespace growthlab::lab
