#pragma once

#include <stdexcept>
#include <string>

namespace wickbridge {

// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// construction / validation
struct InvalidParameter final : Error { using Error::Error; };
struct ReciprocityViolation final : Error { using Error::Error; };
struct NotPositiveDefinite final : Error { using Error::Error; };

// intervals and grids
struct ZeroInterval final : Error { using Error::Error; };
struct NonpositiveInterval final : Error { using Error::Error; };
struct DegenerateInterval final : Error { using Error::Error; };
struct UnorderedGates final : Error { using Error::Error; };
struct GridTooNarrow final : Error { using Error::Error; };
struct GridTooCoarse final : Error { using Error::Error; };

// kernel algebra
struct Caustic final : Error { using Error::Error; };
struct DivergentComposition final : Error { using Error::Error; };
struct BranchAmbiguity final : Error { using Error::Error; };

// stochastic sampling
struct UnstableStep final : Error { using Error::Error; };

// dictionary maps and densities
struct ZeroFrequency final : Error { using Error::Error; };
struct ZeroNorm final : Error { using Error::Error; };
struct DensityFloor final : Error { using Error::Error; };
struct InsufficientTimeSamples final : Error { using Error::Error; };
struct UnnormalizedDensity final : Error { using Error::Error; };

// verification front end
struct UnknownIdentity final : Error { using Error::Error; };

}  // namespace wickbridge
