#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "growthlab/random_variable.hpp"

namespace growthlab {

enum class TailRule { hold };

/// One outcome of a per-step log-return distribution.
struct StepPoint {
  double x;
  double p;
};

/// Time-indexed family of measurable random variables. Three representations:
/// an explicit list with a tail rule, a generator rule mapping time to a
/// variable, or an i.i.d. product spec (which never materializes a space and
/// is consumed through its per-step distribution).
class AdaptedProcess {
 public:
  enum class Kind { explicit_values, generator, iid_product };

  static AdaptedProcess explicit_values(SpacePtr space, std::vector<RandomVariable> values,
                                        TailRule tail = TailRule::hold);
  static AdaptedProcess generator(SpacePtr space, std::function<RandomVariable(int)> fn,
                                  std::string what);
  static AdaptedProcess iid_product(double v0, std::vector<StepPoint> step);

  Kind kind() const { return kind_; }
  const SpacePtr& space() const { return space_; }

  /// Variable at time t; checked to be constant on the cells of the
  /// partition at min(t, depth). Throws UnsupportedProcess for iid specs.
  RandomVariable at(int t) const;

  int explicit_count() const { return static_cast<int>(values_.size()); }
  double v0() const { return v0_; }
  const std::vector<StepPoint>& step() const { return step_; }
  const std::string& describe() const { return what_; }

 private:
  AdaptedProcess() = default;
  Kind kind_ = Kind::explicit_values;
  SpacePtr space_;
  std::vector<RandomVariable> values_;
  TailRule tail_ = TailRule::hold;
  std::function<RandomVariable(int)> fn_;
  double v0_ = 1.0;
  std::vector<StepPoint> step_;
  std::string what_;
};

/// Nonnegative adapted process absorbed at zero (the portfolio value space).
/// Values are carried in log form so exponentially growing scenarios stay
/// exact; V_t = 0 shows up as a -inf log. v_tilde marks strict positivity.
class ValueProcess {
 public:
  /// Validates an adapted process of (linear) values: nonnegativity, finite
  /// entries, and absorption — once a path hits zero it must stay there.
  /// Generator processes are validated over [0, validation_horizon].
  static ValueProcess from_values(const AdaptedProcess& values, int validation_horizon = 8);

  /// Builds directly from a generator of log-values. strictly_positive
  /// declares membership in the integrable-growth subspace.
  static ValueProcess from_log_generator(SpacePtr space, std::function<RandomVariable(int)> log_fn,
                                         bool strictly_positive, std::string what);

  const SpacePtr& space() const;
  bool v_tilde() const;
  bool is_iid() const;
  double iid_v0() const;
  const std::vector<StepPoint>& iid_step() const;
  const std::string& describe() const;

  /// ln V_t per atom (-inf where the path is absorbed). F_t-measurable.
  RandomVariable log_at(int t) const;
  /// V_t; overflows of exp saturate to +inf, so prefer log_at for analysis.
  RandomVariable at(int t) const;
  /// ln(V_T / V_t) per atom, t <= T. A scaler applied at or before t cancels
  /// here exactly, which is what makes the index scale invariant bit for bit.
  RandomVariable log_ratio(int T, int t) const;

  /// First time the path hits zero, +inf when it never does (within the
  /// validated range for generator processes).
  ExtReal absorption_time(int atom) const;

  struct Impl;
  explicit ValueProcess(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const std::shared_ptr<const Impl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// The time-t scaling (V_0, ..., V_{t-1}, mV_t, mV_{t+1}, ...) for a finite,
/// strictly positive, F_t-measurable m.
ValueProcess scale_at(const ValueProcess& v, int t, const RandomVariable& m);

/// Convex mixture taken from time t on: values lam*V + (1-lam)*W at s >= t
/// and V + W before, evaluated in log space. lam must be F_t-measurable with
/// values in [0, 1].
ValueProcess mix_processes(const ValueProcess& v, const ValueProcess& w, int t,
                           const RandomVariable& lam);

}  // namespace growthlab
