#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Space construction
struct BadProbabilities : Error { using Error::Error; };
struct NonRefining : Error { using Error::Error; };
struct NonTrivialRoot : Error { using Error::Error; };
struct UnknownCell : Error { using Error::Error; };

// Processes
struct NegativeValue : Error { using Error::Error; };
struct AbsorptionViolation : Error { using Error::Error; };
struct NotMeasurable : Error { using Error::Error; };
struct NonPositiveScaler : Error { using Error::Error; };
struct UnsupportedProcess : Error { using Error::Error; };

// Assessors
struct InversionFailure : Error { using Error::Error; };

// Estimation
struct WindowTooLarge : Error { using Error::Error; };
struct BadDistribution : Error { using Error::Error; };

// IO / configuration
struct SchemaError : Error { using Error::Error; };

}  // namespace growthlab
