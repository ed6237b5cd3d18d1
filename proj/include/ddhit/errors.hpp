#pragma once

#include <stdexcept>
#include <string>

namespace ddhit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model validation
struct NonzeroAtOrigin : Error { using Error::Error; };
struct NegativeRate : Error { using Error::Error; };
struct NonpositiveStartDrift : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };

// fluid / rates
struct StallDetected : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct DegenerateDenominator : Error { using Error::Error; };

// simulation
struct InvalidN : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// oracle
struct SingularSystem : Error { using Error::Error; };
struct OverflowGuard : Error { using Error::Error; };

// experiment
struct AllCensored : Error { using Error::Error; };

// cli
struct ConfigParseError : Error { using Error::Error; };

}  // namespace ddhit
