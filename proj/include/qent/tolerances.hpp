#pragma once

#include <cstddef>

namespace qent::tol {

// Maximum entrywise asymmetry |H - H^dagger| accepted on construction,
// relative to max(1, max |H_ij|).
inline constexpr double kHermitian = 1e-12;

// Eigenvalues in [-kPsdClamp, 0) are treated as roundoff and clamped to 0;
// anything below is a genuine indefiniteness error.
inline constexpr double kPsdClamp = 1e-10;

inline constexpr double kUnitTrace = 1e-10;

// Required accuracy of an l_q / Schatten normalisation supplied by callers.
inline constexpr double kNormalised = 1e-10;

// Default pass threshold on inequality slacks.
inline constexpr double kPass = 1e-9;

// Eigenvalues below this contribute nothing to power sums.
inline constexpr double kUnderflow = 1e-300;

// Largest q for which theorem checks are considered numerically meaningful.
inline constexpr double kMaxOrder = 64.0;

inline constexpr std::size_t kMaxDimension = 4096;

}  // namespace qent::tol
