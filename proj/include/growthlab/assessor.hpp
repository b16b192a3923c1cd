#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "growthlab/random_variable.hpp"

namespace growthlab {

/// A scalar utility for certainty equivalents: strictly increasing and
/// continuous on the extended line. The inverse is closed-form when given,
/// otherwise solved numerically (bisection with geometric bracket expansion).
struct UtilitySpec {
  std::string name;
  std::function<ExtReal(ExtReal)> forward;
  std::function<ExtReal(ExtReal)> inverse;  // empty -> numeric inversion
  bool bi_lipschitz = false;
  bool cash_additive_ce = false;  // identity / exponential families only

  static UtilitySpec identity();
  static UtilitySpec exponential(double gamma);  // sign(g) * e^{g x}
  static UtilitySpec power(double p);            // sign(x) * |x|^p, p > 0
  static UtilitySpec custom(std::string name, std::function<ExtReal(ExtReal)> fwd,
                            std::function<ExtReal(ExtReal)> inv = nullptr,
                            bool bi_lipschitz = false);

  /// U^{-1}(y). Uses the closed form when present; otherwise bisects to
  /// 1e-10 in the argument, expanding the bracket geometrically from
  /// [hint_lo, hint_hi]. Throws InversionFailure when no bracket is found.
  ExtReal invert(ExtReal y, double hint_lo = -1.0, double hint_hi = 1.0) const;
};

struct AssessorFlags {
  bool cash_additive = false;
  bool bi_lipschitz = false;
  bool satisfies_enough1 = false;
};

enum class AssessorKind { entropic, certainty_equiv, neg_avar, risk_seeking, hat, custom };

/// One family {mu_t} of conditional assessment maps. Evaluation is pure; the
/// output of evaluate(t, X) is always F_t-measurable. Built-in kinds apply
/// the extended-real conventions directly, which on finite spaces coincides
/// with the truncation limit that defines the hat-extension.
class Assessor {
 public:
  static Assessor entropic(double gamma);
  static Assessor certainty_equiv(UtilitySpec u);
  static Assessor neg_avar(double alpha);
  static Assessor risk_seeking(Assessor base);
  static Assessor hat(Assessor base);

  using EvalFn = std::function<RandomVariable(int, const RandomVariable&)>;
  static Assessor custom(std::string name, EvalFn fn, AssessorFlags flags,
                         bool handles_extended = false);

  RandomVariable evaluate(int t, const RandomVariable& x) const;

  AssessorKind kind() const;
  const AssessorFlags& flags() const;
  std::string describe() const;

  /// Entropic parameter; meaningful only when kind() == entropic (a hat or
  /// risk_seeking wrapper reports its base through base()).
  double gamma() const;
  const Assessor& base() const;  // wrappers only
  bool handles_extended() const;

  struct Impl;

 private:
  explicit Assessor(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Truncation realization of the hat-extension: evaluates base at X v (-n)
/// for n doubling through 2^0..2^n_max_pow. A cell is converged when the last
/// two evaluations agree within tol; otherwise the infimum of the tail is
/// reported with the flag cleared. For assessors that handle extended inputs
/// directly the direct value is returned and the schedule is run as a
/// cross-check (converged cells must match; a divergent cell requires the
/// direct value to be -inf).
struct HatResult {
  RandomVariable value;
  std::vector<bool> converged;  // per cell of the partition at t
};
HatResult hat_eval(const Assessor& base, int t, const RandomVariable& x,
                   int n_max_pow = 60, double tol = 1e-10);

/// ln of a probability-weighted mean of exponentials, shifted by the finite
/// maximum so large arguments cannot overflow. Weights must sum to 1.
ExtReal log_mean_exp(const std::vector<double>& weights, const std::vector<ExtReal>& z);

}  // namespace growthlab
