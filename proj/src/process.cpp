#include "growthlab/process.hpp"

#include <cmath>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

SpacePtr trivial_space() {
  static SpacePtr sp = FilteredSpace::build({{"w0", 1.0}}, {{{"w0"}}});
  return sp;
}

void check_step(const std::vector<StepPoint>& step) {
  if (step.empty()) throw BadDistribution("empty step distribution");
  double total = 0.0;
  for (const auto& s : step) {
    if (!(s.p > 0.0) || !std::isfinite(s.p) || !std::isfinite(s.x))
      throw BadDistribution("step distribution needs finite outcomes and positive weights");
    total += s.p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadDistribution("step probabilities sum to " + std::to_string(total));
}

}  // namespace

AdaptedProcess AdaptedProcess::explicit_values(SpacePtr space, std::vector<RandomVariable> values,
                                               TailRule tail) {
  if (values.empty()) throw SchemaError("explicit process needs at least V_0");
  AdaptedProcess p;
  p.kind_ = Kind::explicit_values;
  p.space_ = std::move(space);
  p.values_ = std::move(values);
  p.tail_ = tail;
  p.what_ = "explicit";
  return p;
}

AdaptedProcess AdaptedProcess::generator(SpacePtr space, std::function<RandomVariable(int)> fn,
                                         std::string what) {
  AdaptedProcess p;
  p.kind_ = Kind::generator;
  p.space_ = std::move(space);
  p.fn_ = std::move(fn);
  p.what_ = std::move(what);
  return p;
}

AdaptedProcess AdaptedProcess::iid_product(double v0, std::vector<StepPoint> step) {
  check_step(step);
  if (!(v0 > 0.0) || !std::isfinite(v0))
    throw BadDistribution("iid product needs a positive finite initial value");
  AdaptedProcess p;
  p.kind_ = Kind::iid_product;
  p.space_ = trivial_space();
  p.v0_ = v0;
  p.step_ = std::move(step);
  p.what_ = "iid";
  return p;
}

RandomVariable AdaptedProcess::at(int t) const {
  if (t < 0) throw SchemaError("negative time index");
  RandomVariable v = [&] {
    switch (kind_) {
      case Kind::explicit_values: {
        int idx = t < explicit_count() ? t : explicit_count() - 1;  // hold tail
        return values_[idx];
      }
      case Kind::generator:
        return fn_(t);
      default:
        throw UnsupportedProcess("iid product processes are consumed via their step distribution");
    }
  }();
  if (!is_measurable(v, t))
    throw NotMeasurable(what_ + " process not measurable at t=" + std::to_string(t));
  return v;
}

// ---------------------------------------------------------------------------
// ValueProcess
// ---------------------------------------------------------------------------

struct ValueProcess::Impl {
  SpacePtr space;
  bool v_tilde = false;
  bool iid = false;
  double v0 = 1.0;
  std::vector<StepPoint> step;
  std::vector<ExtReal> tau;  // absorption time per atom
  std::string what;

  virtual ~Impl() = default;
  virtual RandomVariable log_at_raw(int t) const = 0;
  virtual RandomVariable log_ratio_raw(int T, int t) const {
    RandomVariable lt = log_at_raw(T);
    RandomVariable ls = log_at_raw(t);
    std::vector<ExtReal> out(lt.size());
    for (int i = 0; i < lt.size(); ++i)
      out[i] = ls[i].is_neg_inf() ? ExtReal::neg_inf() : lt[i] - ls[i];
    return RandomVariable(space, std::move(out));
  }
};

namespace {

struct LogGenImpl final : ValueProcess::Impl {
  std::function<RandomVariable(int)> fn;
  RandomVariable log_at_raw(int t) const override { return fn(t); }
};

struct ScaledImpl final : ValueProcess::Impl {
  ValueProcess base;
  int from;
  RandomVariable log_m;

  ScaledImpl(ValueProcess b, int t0, RandomVariable lm)
      : base(std::move(b)), from(t0), log_m(std::move(lm)) {}

  RandomVariable log_at_raw(int t) const override {
    RandomVariable l = base.log_at(t);
    return t >= from ? l + log_m : l;
  }
  RandomVariable log_ratio_raw(int T, int t) const override {
    if (t >= from) return base.log_ratio(T, t);  // the scaler cancels exactly
    RandomVariable r = base.log_ratio(T, t);
    return T >= from ? r + log_m : r;
  }
};

std::vector<ExtReal> scan_absorption(const ValueProcess::Impl& impl, int horizon,
                                     bool* strictly_positive) {
  int n = impl.space->atom_count();
  std::vector<ExtReal> tau(n, ExtReal::pos_inf());
  *strictly_positive = true;
  for (int t = 0; t <= horizon; ++t) {
    RandomVariable l = impl.log_at_raw(t);
    for (int i = 0; i < n; ++i) {
      if (l[i].is_pos_inf()) throw SchemaError("process value must be finite");
      if (l[i].is_neg_inf()) {
        *strictly_positive = false;
        if (tau[i].is_pos_inf()) tau[i] = ExtReal(static_cast<double>(t));
      } else if (!tau[i].is_pos_inf()) {
        throw AbsorptionViolation("path revives after hitting zero at atom " +
                                  impl.space->atom(i).id + ", t=" + std::to_string(t));
      }
    }
  }
  return tau;
}

}  // namespace

ValueProcess ValueProcess::from_values(const AdaptedProcess& values, int validation_horizon) {
  if (values.kind() == AdaptedProcess::Kind::iid_product) {
    auto impl = std::make_shared<LogGenImpl>();
    impl->space = values.space();
    impl->v_tilde = true;
    impl->iid = true;
    impl->v0 = values.v0();
    impl->step = values.step();
    impl->tau.assign(1, ExtReal::pos_inf());
    impl->what = "iid";
    impl->fn = [](int) -> RandomVariable {
      throw UnsupportedProcess(
          "iid product processes are evaluated through the per-step cumulant, not per-path values");
    };
    return ValueProcess(std::move(impl));
  }

  auto impl = std::make_shared<LogGenImpl>();
  impl->space = values.space();
  impl->what = values.describe();
  impl->fn = [values](int t) {
    RandomVariable v = values.at(t);
    std::vector<ExtReal> logs(v.size());
    for (int i = 0; i < v.size(); ++i) {
      if (!v[i].is_finite()) throw SchemaError("process value must be finite");
      if (v[i].raw() < 0.0)
        throw NegativeValue("negative process value at t=" + std::to_string(t));
      logs[i] = ext_log(v[i]);
    }
    return RandomVariable(v.space(), std::move(logs));
  };

  int horizon = values.kind() == AdaptedProcess::Kind::explicit_values
                    ? values.explicit_count() - 1
                    : validation_horizon;
  bool positive = false;
  impl->tau = scan_absorption(*impl, horizon, &positive);
  impl->v_tilde = positive;
  return ValueProcess(std::move(impl));
}

ValueProcess ValueProcess::from_log_generator(SpacePtr space,
                                              std::function<RandomVariable(int)> log_fn,
                                              bool strictly_positive, std::string what) {
  auto impl = std::make_shared<LogGenImpl>();
  impl->space = std::move(space);
  impl->fn = std::move(log_fn);
  impl->what = std::move(what);
  impl->v_tilde = strictly_positive;
  if (strictly_positive) {
    impl->tau.assign(impl->space->atom_count(), ExtReal::pos_inf());
  } else {
    bool positive = false;
    impl->tau = scan_absorption(*impl, 8, &positive);
    impl->v_tilde = positive;
  }
  return ValueProcess(std::move(impl));
}

const SpacePtr& ValueProcess::space() const { return impl_->space; }
bool ValueProcess::v_tilde() const { return impl_->v_tilde; }
bool ValueProcess::is_iid() const { return impl_->iid; }
double ValueProcess::iid_v0() const { return impl_->v0; }
const std::vector<StepPoint>& ValueProcess::iid_step() const { return impl_->step; }
const std::string& ValueProcess::describe() const { return impl_->what; }
ExtReal ValueProcess::absorption_time(int atom) const { return impl_->tau[atom]; }

RandomVariable ValueProcess::log_at(int t) const {
  RandomVariable l = impl_->log_at_raw(t);
  if (!is_measurable(l, t))
    throw NotMeasurable(impl_->what + " not measurable at t=" + std::to_string(t));
  return l;
}

RandomVariable ValueProcess::at(int t) const {
  return log_at(t).map(+[](ExtReal x) { return ext_exp(x); });
}

RandomVariable ValueProcess::log_ratio(int T, int t) const {
  if (t > T) throw SchemaError("log_ratio needs t <= T");
  return impl_->log_ratio_raw(T, t);
}

ValueProcess scale_at(const ValueProcess& v, int t, const RandomVariable& m) {
  if (!is_measurable(m, t)) throw NotMeasurable("scaler not measurable at t=" + std::to_string(t));
  std::vector<ExtReal> lm(m.size());
  for (int i = 0; i < m.size(); ++i) {
    if (!m[i].is_finite() || m[i].raw() <= 0.0)
      throw NonPositiveScaler("scaler must be finite and > 0");
    lm[i] = ext_log(m[i]);
  }
  auto impl = std::make_shared<ScaledImpl>(v, t, RandomVariable(m.space(), std::move(lm)));
  impl->space = v.space();
  impl->v_tilde = v.v_tilde();
  impl->iid = false;
  impl->what = v.describe() + " scaled at t=" + std::to_string(t);
  impl->tau.resize(v.space()->atom_count());
  for (int i = 0; i < v.space()->atom_count(); ++i) impl->tau[i] = v.absorption_time(i);
  return ValueProcess(std::move(impl));
}

ValueProcess mix_processes(const ValueProcess& v, const ValueProcess& w, int t,
                           const RandomVariable& lam) {
  if (!is_measurable(lam, t)) throw NotMeasurable("mixture weight not measurable");
  for (int i = 0; i < lam.size(); ++i)
    if (!lam[i].is_finite() || lam[i].raw() < 0.0 || lam[i].raw() > 1.0)
      throw SchemaError("mixture weight must take values in [0, 1]");
  SpacePtr space = v.space();
  RandomVariable lam_copy = lam;
  auto log_fn = [v, w, t, lam_copy, space](int s) {
    RandomVariable a = v.log_at(s);
    RandomVariable b = w.log_at(s);
    std::vector<ExtReal> out(a.size());
    for (int i = 0; i < a.size(); ++i) {
      ExtReal la(0.0), lb(0.0);
      if (s >= t) {
        double l = lam_copy[i].raw();
        la = ext_log(ExtReal(l));
        lb = ext_log(ExtReal(1.0 - l));
      }
      // ln(exp(la + a) + exp(lb + b)), stable
      ExtReal za = la + a[i], zb = lb + b[i];
      if (za.is_neg_inf()) {
        out[i] = zb;
      } else if (zb.is_neg_inf()) {
        out[i] = za;
      } else {
        double hi = std::max(za.raw(), zb.raw());
        out[i] = ExtReal(hi + std::log(std::exp(za.raw() - hi) + std::exp(zb.raw() - hi)));
      }
    }
    return RandomVariable(space, std::move(out));
  };
  bool positive = v.v_tilde() || w.v_tilde();
  return ValueProcess::from_log_generator(space, log_fn, positive,
                                          "mix(" + v.describe() + "," + w.describe() + ")");
}

}  // namespace growthlab
