#pragma once

namespace bellkit {

/// Global numerical tolerances. One record so every module agrees on what
/// "exact", "accumulated linear algebra" and "marginal check" mean.
struct Tolerances {
    double exact = 1e-12;     ///< identities that hold to rounding error
    double linalg = 1e-10;    ///< accumulated linear-algebra comparisons
    double marginal = 1e-9;   ///< no-signaling marginal checks
};

/// Mutable global tolerance record (configurable in one place).
Tolerances& tolerances();

}  // namespace bellkit
