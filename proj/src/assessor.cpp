#include "growthlab/assessor.hpp"

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

}  // namespace

ExtReal log_mean_exp(const std::vector<double>& weights, const std::vector<ExtReal>& z) {
  double m = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i].is_pos_inf()) return ExtReal::pos_inf();
    if (!z[i].is_neg_inf()) m = std::max(m, z[i].raw());
  }
  if (std::isinf(m)) return ExtReal::neg_inf();  // every term is exp(-inf) = 0
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i)
    if (!z[i].is_neg_inf()) s += weights[i] * std::exp(z[i].raw() - m);
  return ExtReal(m + std::log(s));
}

// ---------------------------------------------------------------------------
// Utilities
// ---------------------------------------------------------------------------

UtilitySpec UtilitySpec::identity() {
  UtilitySpec u;
  u.name = "identity";
  u.forward = [](ExtReal x) { return x; };
  u.inverse = [](ExtReal y) { return y; };
  u.bi_lipschitz = true;
  u.cash_additive_ce = true;
  return u;
}

UtilitySpec UtilitySpec::exponential(double gamma) {
  if (gamma == 0.0) return identity();
  UtilitySpec u;
  u.name = "exp(" + std::to_string(gamma) + ")";
  double sign = gamma > 0 ? 1.0 : -1.0;
  u.forward = [gamma, sign](ExtReal x) { return ExtReal(sign) * ext_exp(x * ExtReal(gamma)); };
  u.inverse = [gamma, sign](ExtReal y) {
    return div_signed(ext_log(y * ExtReal(sign)), gamma);
  };
  u.bi_lipschitz = false;
  u.cash_additive_ce = true;
  return u;
}

UtilitySpec UtilitySpec::power(double p) {
  if (!(p > 0.0)) throw SchemaError("power utility needs p > 0");
  UtilitySpec u;
  u.name = "power(" + std::to_string(p) + ")";
  u.forward = [p](ExtReal x) {
    if (!x.is_finite()) return x;
    double v = x.raw();
    return ExtReal(std::copysign(std::pow(std::abs(v), p), v));
  };
  u.inverse = [p](ExtReal y) {
    if (!y.is_finite()) return y;
    double v = y.raw();
    return ExtReal(std::copysign(std::pow(std::abs(v), 1.0 / p), v));
  };
  u.bi_lipschitz = (p == 1.0);
  return u;
}

UtilitySpec UtilitySpec::custom(std::string name, std::function<ExtReal(ExtReal)> fwd,
                                std::function<ExtReal(ExtReal)> inv, bool bi_lipschitz) {
  UtilitySpec u;
  u.name = std::move(name);
  u.forward = std::move(fwd);
  u.inverse = std::move(inv);
  u.bi_lipschitz = bi_lipschitz;
  return u;
}

ExtReal UtilitySpec::invert(ExtReal y, double hint_lo, double hint_hi) const {
  if (inverse) return inverse(y);
  if (y.is_pos_inf()) return ExtReal::pos_inf();
  if (y.is_neg_inf()) return ExtReal::neg_inf();
  ExtReal lim_lo = forward(ExtReal::neg_inf());
  ExtReal lim_hi = forward(ExtReal::pos_inf());
  if (y <= lim_lo) return ExtReal::neg_inf();
  if (y >= lim_hi) return ExtReal::pos_inf();

  double lo = hint_lo, hi = hint_hi;
  if (!(lo < hi)) { lo = hint_lo - 1.0; hi = hint_lo + 1.0; }
  double step = hi - lo;
  int budget = 200;
  while (forward(ExtReal(lo)) > y) {
    lo -= step;
    step *= 2.0;
    if (--budget == 0) throw InversionFailure("no lower bracket for " + name);
  }
  step = hi - lo;
  while (forward(ExtReal(hi)) < y) {
    hi += step;
    step *= 2.0;
    if (--budget == 0) throw InversionFailure("no upper bracket for " + name);
  }
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // hit double resolution
    if (forward(ExtReal(mid)) < y)
      lo = mid;
    else
      hi = mid;
  }
  return ExtReal(0.5 * (lo + hi));
}

// ---------------------------------------------------------------------------
// Assessor implementations
// ---------------------------------------------------------------------------

struct Assessor::Impl {
  AssessorKind kind_;
  AssessorFlags flags_;
  bool handles_extended_ = true;

  virtual ~Impl() = default;
  virtual RandomVariable eval(int t, const RandomVariable& x) const = 0;
  virtual std::string describe() const = 0;
};

namespace {

struct EntropicImpl final : Assessor::Impl {
  double gamma;

  explicit EntropicImpl(double g) : gamma(g) {
    kind_ = AssessorKind::entropic;
    flags_ = {.cash_additive = true, .bi_lipschitz = false, .satisfies_enough1 = true};
  }

  RandomVariable eval(int t, const RandomVariable& x) const override {
    if (gamma == 0.0) return cond_expect(x, t);
    const auto& space = *x.space();
    const auto& part = space.partition_at(t);
    std::vector<ExtReal> out(part.size());
    std::vector<double> w;
    std::vector<ExtReal> z;
    for (size_t c = 0; c < part.size(); ++c) {
      double pc = space.cell_prob(t, static_cast<int>(c));
      w.clear();
      z.clear();
      for (int atom : part[c]) {
        w.push_back(space.atom_prob(atom) / pc);
        z.push_back(ExtReal(gamma) * x[atom]);
      }
      out[c] = div_signed(log_mean_exp(w, z), gamma);
    }
    return RandomVariable::from_cells(x.space(), t, out);
  }

  std::string describe() const override { return "entropic(" + std::to_string(gamma) + ")"; }
};

struct CertaintyEquivImpl final : Assessor::Impl {
  UtilitySpec u;

  explicit CertaintyEquivImpl(UtilitySpec spec) : u(std::move(spec)) {
    kind_ = AssessorKind::certainty_equiv;
    flags_ = {.cash_additive = u.cash_additive_ce,
              .bi_lipschitz = u.bi_lipschitz,
              .satisfies_enough1 = u.bi_lipschitz || u.cash_additive_ce};
  }

  RandomVariable eval(int t, const RandomVariable& x) const override {
    RandomVariable ux = RandomVariable(x.space(), [&] {
      std::vector<ExtReal> vals(x.size());
      for (int i = 0; i < x.size(); ++i) vals[i] = u.forward(x[i]);
      return vals;
    }());
    RandomVariable mean = cond_expect(ux, t);
    const auto& part = x.space()->partition_at(t);
    std::vector<ExtReal> out(part.size());
    for (size_t c = 0; c < part.size(); ++c) {
      // bracket hint: the finite value range inside the cell
      double lo = 1.0, hi = -1.0;
      for (int atom : part[c]) {
        if (!x[atom].is_finite()) continue;
        if (lo > hi) {
          lo = hi = x[atom].raw();
        } else {
          lo = std::min(lo, x[atom].raw());
          hi = std::max(hi, x[atom].raw());
        }
      }
      if (lo > hi) { lo = -1.0; hi = 1.0; }
      out[c] = u.invert(mean.cell_value(t, static_cast<int>(c)), lo - 1.0, hi + 1.0);
    }
    return RandomVariable::from_cells(x.space(), t, out);
  }

  std::string describe() const override { return "ce(" + u.name + ")"; }
};

struct NegAvarImpl final : Assessor::Impl {
  double alpha;

  explicit NegAvarImpl(double a) : alpha(a) {
    if (!(a > 0.0) || a > 1.0) throw SchemaError("neg_avar needs alpha in (0, 1]");
    kind_ = AssessorKind::neg_avar;
    flags_ = {.cash_additive = true, .bi_lipschitz = false, .satisfies_enough1 = true};
  }

  RandomVariable eval(int t, const RandomVariable& x) const override {
    const auto& space = *x.space();
    const auto& part = space.partition_at(t);
    std::vector<ExtReal> out(part.size());
    std::vector<std::pair<ExtReal, double>> vals;  // (value, conditional prob)
    for (size_t c = 0; c < part.size(); ++c) {
      double pc = space.cell_prob(t, static_cast<int>(c));
      vals.clear();
      for (int atom : part[c]) vals.emplace_back(x[atom], space.atom_prob(atom) / pc);
      std::stable_sort(vals.begin(), vals.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      // average of the lowest alpha mass, fractional last atom
      ExtReal acc(0.0);
      double mass = 0.0;
      for (const auto& [v, q] : vals) {
        double take = std::min(q, alpha - mass);
        if (take <= 0.0) break;
        acc = acc + ExtReal(take) * v;  // 0 * (+-inf) = 0 keeps untouched tails out
        mass += take;
        if (mass >= alpha - 1e-15) break;
      }
      out[c] = acc.div_by(alpha);
    }
    return RandomVariable::from_cells(x.space(), t, out);
  }

  std::string describe() const override { return "neg_avar(" + std::to_string(alpha) + ")"; }
};

struct RiskSeekingImpl final : Assessor::Impl {
  Assessor inner;

  explicit RiskSeekingImpl(Assessor b) : inner(std::move(b)) {
    kind_ = AssessorKind::risk_seeking;
    handles_extended_ = inner.handles_extended();
    // losses are clipped away, so cash additivity is lost; the enough1
    // condition survives for risk measure negatives
    flags_ = {.cash_additive = false,
              .bi_lipschitz = inner.flags().bi_lipschitz,
              .satisfies_enough1 = inner.flags().cash_additive};
  }

  RandomVariable eval(int t, const RandomVariable& x) const override {
    return inner.evaluate(t, x.positive_part());
  }

  std::string describe() const override { return "risk_seeking(" + inner.describe() + ")"; }
};

struct HatImpl final : Assessor::Impl {
  Assessor inner;

  explicit HatImpl(Assessor b) : inner(std::move(b)) {
    kind_ = AssessorKind::hat;
    flags_ = inner.flags();
  }

  RandomVariable eval(int t, const RandomVariable& x) const override {
    if (inner.handles_extended()) return inner.evaluate(t, x);
    return hat_eval(inner, t, x).value;
  }

  std::string describe() const override { return "hat(" + inner.describe() + ")"; }
};

struct CustomImpl final : Assessor::Impl {
  std::string name;
  Assessor::EvalFn fn;

  CustomImpl(std::string n, Assessor::EvalFn f, AssessorFlags fl, bool ext)
      : name(std::move(n)), fn(std::move(f)) {
    kind_ = AssessorKind::custom;
    flags_ = fl;
    handles_extended_ = ext;
  }

  RandomVariable eval(int t, const RandomVariable& x) const override { return fn(t, x); }
  std::string describe() const override { return name; }
};

}  // namespace

Assessor Assessor::entropic(double gamma) {
  return Assessor(std::make_shared<EntropicImpl>(gamma));
}
Assessor Assessor::certainty_equiv(UtilitySpec u) {
  return Assessor(std::make_shared<CertaintyEquivImpl>(std::move(u)));
}
Assessor Assessor::neg_avar(double alpha) {
  return Assessor(std::make_shared<NegAvarImpl>(alpha));
}
Assessor Assessor::risk_seeking(Assessor base) {
  return Assessor(std::make_shared<RiskSeekingImpl>(std::move(base)));
}
Assessor Assessor::hat(Assessor base) {
  return Assessor(std::make_shared<HatImpl>(std::move(base)));
}
Assessor Assessor::custom(std::string name, EvalFn fn, AssessorFlags flags, bool handles_extended) {
  return Assessor(std::make_shared<CustomImpl>(std::move(name), std::move(fn), flags, handles_extended));
}

RandomVariable Assessor::evaluate(int t, const RandomVariable& x) const {
  return impl_->eval(t, x);
}
AssessorKind Assessor::kind() const { return impl_->kind_; }
const AssessorFlags& Assessor::flags() const { return impl_->flags_; }
std::string Assessor::describe() const { return impl_->describe(); }
bool Assessor::handles_extended() const { return impl_->handles_extended_; }

double Assessor::gamma() const {
  if (impl_->kind_ != AssessorKind::entropic) throw Error("gamma() on non-entropic assessor");
  return static_cast<const EntropicImpl&>(*impl_).gamma;
}

const Assessor& Assessor::base() const {
  if (impl_->kind_ == AssessorKind::risk_seeking)
    return static_cast<const RiskSeekingImpl&>(*impl_).inner;
  if (impl_->kind_ == AssessorKind::hat) return static_cast<const HatImpl&>(*impl_).inner;
  throw Error("assessor has no base");
}

// ---------------------------------------------------------------------------
// hat-extension by truncation
// ---------------------------------------------------------------------------

HatResult hat_eval(const Assessor& base, int t, const RandomVariable& x, int n_max_pow,
                   double tol) {
  const auto& space = *x.space();
  int ncell = space.cell_count(t);

  std::vector<ExtReal> prev(ncell), last(ncell), tail_inf(ncell);
  std::vector<bool> converged(ncell, false);
  for (int k = 0; k <= n_max_pow; ++k) {
    double n = std::ldexp(1.0, k);
    RandomVariable fk = base.evaluate(t, x.max_with(ExtReal(-n)));
    for (int c = 0; c < ncell; ++c) {
      prev[c] = last[c];
      last[c] = fk.cell_value(t, c);
      if (k >= n_max_pow / 2)
        tail_inf[c] = (k == n_max_pow / 2) ? last[c] : ext_min(tail_inf[c], last[c]);
    }
    if (k == 0) continue;
  }
  std::vector<ExtReal> out(ncell);
  for (int c = 0; c < ncell; ++c) {
    converged[c] = (prev[c] == last[c]) || ext_abs_gap(prev[c], last[c]) <= tol;
    out[c] = converged[c] ? last[c] : tail_inf[c];
  }

  if (base.handles_extended()) {
    RandomVariable direct = base.evaluate(t, x);
    for (int c = 0; c < ncell; ++c) {
      ExtReal d = direct.cell_value(t, c);
      if (converged[c]) {
        if (ext_abs_gap(d, out[c]) > tol)
          throw Error("hat truncation disagrees with direct evaluation of " + base.describe());
      } else if (!d.is_neg_inf()) {
        throw Error("hat truncation diverges but direct value of " + base.describe() +
                    " is not -inf");
      }
      out[c] = d;
      converged[c] = true;
    }
    return {direct, std::move(converged)};
  }
  return {RandomVariable::from_cells(x.space(), t, out), std::move(converged)};
}

}  // namespace growthlab
