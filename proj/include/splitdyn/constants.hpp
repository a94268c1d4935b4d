#pragma once

// Budgets and tolerances used across the library. Logarithms are natural
// throughout.

#include <cstddef>
#include <cstdint>

namespace splitdyn::limits {

// exact
inline constexpr std::size_t kIterateDegreeCap = std::size_t{1} << 20;
inline constexpr int kFactorDegreeCap = 128;
inline constexpr std::uint64_t kTrialDivisionBound = 1'000'000;
inline constexpr std::uint64_t kRhoIterationCap = std::uint64_t{1} << 24;

// dynsys
inline constexpr int kClassifyMaxIterations = 12;
inline constexpr int kPreperiodicMaxSteps = 10'000;
// Numeric heights of irrational critical points must clear the escape bound
// by this margin before a Disintegrated verdict is issued.
inline constexpr double kEscapeMargin = 1e-6;

// padic
inline constexpr std::uint64_t kOrbitStepCap = std::uint64_t{1} << 22;
inline constexpr int kDefaultMMax = 6;
inline constexpr std::uint64_t kDefaultPrimeBound = 500;
inline constexpr int kOrbitAvoidanceHorizon = 200;
// Exact orbit iterates over Q stop once a coordinate exceeds this many bits.
inline constexpr std::size_t kOrbitBitBudget = std::size_t{1} << 18;

// heights
inline constexpr double kRootResidualTolerance = 1e-8;
inline constexpr int kAberthMaxIterations = 2000;
// Certified bound on the error of a Mahler measure before it is accepted.
inline constexpr long double kMahlerErrorTarget = 1e-13L;
inline constexpr std::uint64_t kAberthSeed = 0x5eed'0f'a6e27ULL;
// Above this size the exact canonical-height iterate is replaced by
// place-by-place tracking.
inline constexpr std::size_t kExactHeightBitBudget = std::size_t{1} << 20;
inline constexpr long kPadicTrackingDigits = 512;
inline constexpr long kMpfrPrecisionBits = 256;

}  // namespace splitdyn::limits
