#pragma once

namespace qmcs::tolerance {

/// Structural invariants: hermiticity, trace, unit norms.
inline constexpr double kStructural = 1e-12;
/// Results of iterative procedures: eigen-solvers, Lanczos, ascent.
inline constexpr double kIterative = 1e-9;
/// Positive semidefiniteness (minimum eigenvalue floor).
inline constexpr double kPsd = 1e-10;

}  // namespace qmcs::tolerance
