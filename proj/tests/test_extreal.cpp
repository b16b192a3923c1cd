#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "growthlab/extreal.hpp"

using namespace growthlab;

namespace {
const ExtReal kPos = ExtReal::pos_inf();
const ExtReal kNeg = ExtReal::neg_inf();
}  // namespace

TEST_CASE("conventional addition") {
  CHECK((kPos + kNeg) == kNeg);  // inf - inf = -inf
  CHECK((kNeg + kPos) == kNeg);
  CHECK((kPos - kPos) == kNeg);
  CHECK((kPos + kPos) == kPos);
  CHECK((kNeg + kNeg) == kNeg);
  CHECK((ExtReal(3.0) + ExtReal(4.0)) == ExtReal(7.0));
  CHECK((ExtReal(5.0) + kPos) == kPos);
  CHECK((ExtReal(5.0) + kNeg) == kNeg);
}

TEST_CASE("conventional multiplication") {
  CHECK((ExtReal(0.0) * kPos) == ExtReal(0.0));
  CHECK((ExtReal(0.0) * kNeg) == ExtReal(0.0));
  CHECK((kPos * ExtReal(0.0)) == ExtReal(0.0));
  CHECK((ExtReal(2.0) * kPos) == kPos);
  CHECK((ExtReal(-2.0) * kPos) == kNeg);
  CHECK((ExtReal(-2.0) * kNeg) == kPos);
  CHECK((kNeg * kNeg) == kPos);
  CHECK((ExtReal(3.0) * ExtReal(4.0)) == ExtReal(12.0));
}

TEST_CASE("ext_arith dispatch") {
  CHECK(ext_arith(kPos, kNeg, ArithOp::add) == kNeg);
  CHECK(ext_arith(ExtReal(0.0), kPos, ArithOp::mul) == ExtReal(0.0));
  CHECK(ext_arith(ExtReal(3.0), ExtReal(4.0), ArithOp::add) == ExtReal(7.0));
}

TEST_CASE("exp and log limits") {
  CHECK(ext_exp(kNeg) == ExtReal(0.0));
  CHECK(ext_exp(kPos) == kPos);
  CHECK(ext_exp(ExtReal(1000.0)) == kPos);  // double overflow saturates
  CHECK(ext_log(ExtReal(0.0)) == kNeg);
  CHECK(ext_log(kPos) == kPos);
  CHECK(ext_log(ExtReal(1.0)) == ExtReal(0.0));
}

TEST_CASE("ordering spans the extended line") {
  CHECK(kNeg < ExtReal(-1e308));
  CHECK(ExtReal(1e308) < kPos);
  CHECK(kNeg < kPos);
  CHECK(ext_max(kNeg, ExtReal(2.0)) == ExtReal(2.0));
  CHECK(ext_min(kPos, ExtReal(2.0)) == ExtReal(2.0));
  CHECK(ExtReal(-3.0).positive_part() == ExtReal(0.0));
  CHECK(kNeg.positive_part() == ExtReal(0.0));
  CHECK(kPos.positive_part() == kPos);
}

TEST_CASE("division by positive scalars keeps infinities") {
  CHECK(kNeg.div_by(7.0) == kNeg);
  CHECK(kPos.div_by(7.0) == kPos);
  CHECK(ExtReal(14.0).div_by(7.0) == ExtReal(2.0));
}

TEST_CASE("gap and tolerant comparison") {
  CHECK(ext_abs_gap(kNeg, kNeg) == 0.0);
  CHECK(ext_abs_gap(kNeg, ExtReal(0.0)) == std::numeric_limits<double>::infinity());
  CHECK(ext_abs_gap(ExtReal(1.0), ExtReal(1.5)) == doctest::Approx(0.5));
  CHECK(ext_ge_tol(kNeg, kNeg, 0.0));
  CHECK(ext_ge_tol(ExtReal(1.0), ExtReal(1.0 + 1e-12), 1e-10));
  CHECK_FALSE(ext_ge_tol(kNeg, ExtReal(0.0), 1.0));
  CHECK(ext_ge_tol(kPos, ExtReal(0.0), 0.0));
}

TEST_CASE("serialized form round-trips the infinities") {
  CHECK(ext_to_string(kPos) == "inf");
  CHECK(ext_to_string(kNeg) == "-inf");
  CHECK(ext_to_string(ExtReal(0.25)) == "0.25");
}
