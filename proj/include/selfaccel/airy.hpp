#pragma once

namespace selfaccel {

/// Airy function Ai(x). Power series near the origin, asymptotic expansions
/// in the tails; absolute error below 1e-10 on [-15, 8].
double airy_ai(double x);

/// Derivative Ai'(x), same evaluation strategy as airy_ai.
double airy_ai_prime(double x);

}  // namespace selfaccel
