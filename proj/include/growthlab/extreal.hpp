#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace growthlab {

/// Extended real number on [-inf, +inf] with the arithmetic conventions used
/// throughout this library: inf - inf = -inf and 0 * (+-inf) = 0. Finite
/// values are never NaN; every operation below is total.
class ExtReal {
 public:
  constexpr ExtReal() : v_(0.0) {}
  ExtReal(double v) : v_(v) { assert(!std::isnan(v)); }  // NOLINT: implicit by design

  static constexpr ExtReal pos_inf() { return ExtReal(tag{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal neg_inf() { return ExtReal(tag{}, -std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

  /// Raw double: finite value, or +-HUGE_VAL for the infinities.
  double raw() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    // inf - inf = -inf: any -inf operand wins.
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return pos_inf();
    double s = a.v_ + b.v_;
    if (std::isinf(s)) return s > 0 ? pos_inf() : neg_inf();  // double overflow
    return ExtReal(s);
  }
  friend ExtReal operator-(ExtReal a) {
    if (a.is_pos_inf()) return neg_inf();
    if (a.is_neg_inf()) return pos_inf();
    return ExtReal(-a.v_);
  }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.v_ == 0.0 || b.v_ == 0.0) return ExtReal(0.0);  // 0 * (+-inf) = 0
    if (!a.is_finite() || !b.is_finite()) {
      bool pos = (a.v_ > 0) == (b.v_ > 0);
      return pos ? pos_inf() : neg_inf();
    }
    double p = a.v_ * b.v_;
    if (std::isinf(p)) return p > 0 ? pos_inf() : neg_inf();
    return ExtReal(p);
  }

  /// Division by a positive finite scalar; infinities pass through unchanged.
  ExtReal div_by(double c) const {
    assert(c > 0 && std::isfinite(c));
    if (!is_finite()) return *this;
    return ExtReal(v_ / c);
  }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

  friend ExtReal ext_max(ExtReal a, ExtReal b) { return a.v_ >= b.v_ ? a : b; }
  friend ExtReal ext_min(ExtReal a, ExtReal b) { return a.v_ <= b.v_ ? a : b; }

  /// Positive part X v 0.
  ExtReal positive_part() const { return v_ >= 0.0 ? *this : ExtReal(0.0); }

  /// exp with exp(-inf) = 0 and exp(+inf) = +inf; finite overflow saturates.
  friend ExtReal ext_exp(ExtReal a) {
    if (a.is_neg_inf()) return ExtReal(0.0);
    if (a.is_pos_inf()) return pos_inf();
    double e = std::exp(a.v_);
    return std::isinf(e) ? pos_inf() : ExtReal(e);
  }

  /// ln on [0, +inf] with ln(0) = -inf and ln(+inf) = +inf. Negative input is
  /// a caller bug, not a convention.
  friend ExtReal ext_log(ExtReal a) {
    assert(a.v_ >= 0.0);
    if (a.v_ == 0.0) return neg_inf();
    if (a.is_pos_inf()) return pos_inf();
    return ExtReal(std::log(a.v_));
  }

 private:
  struct tag {};
  constexpr ExtReal(tag, double v) : v_(v) {}
  double v_;
};

/// |a - b| as a double; 0 when both are the same infinity, +inf when they
/// differ in kind.
inline double ext_abs_gap(ExtReal a, ExtReal b) {
  if (a == b) return 0.0;
  if (!a.is_finite() || !b.is_finite()) return std::numeric_limits<double>::infinity();
  return std::abs(a.raw() - b.raw());
}

/// a >= b - tol, reading the infinities the obvious way.
inline bool ext_ge_tol(ExtReal a, ExtReal b, double tol) {
  if (b.is_neg_inf()) return true;
  if (a.is_pos_inf()) return true;
  if (a.is_neg_inf()) return false;
  if (b.is_pos_inf()) return false;
  return a.raw() >= b.raw() - tol;
}

inline std::string ext_to_string(ExtReal a) {
  if (a.is_pos_inf()) return "inf";
  if (a.is_neg_inf()) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", a.raw());
  return buf;
}

enum class ArithOp { add, mul };

/// Dispatch form of the two conventional operations.
inline ExtReal ext_arith(ExtReal a, ExtReal b, ArithOp op) {
  return op == ArithOp::add ? a + b : a * b;
}

}  // namespace growthlab
