#pragma once

namespace ehcoop {

// Modified Bessel function of the second kind, order one.
// Ascending series for x <= 2, exponentially scaled Chebyshev expansions
// beyond (SLATEC DBSK1E coefficients). Relative error <= 1e-10 over
// [1e-8, 700]; returns 0 once e^-x underflows. Throws std::domain_error
// for x <= 0 or NaN.
double bessel_k1(double x);

// 1 - x*K1(x), evaluated without cancellation. The product x*K1(x) tends
// to 1 as x -> 0+, so forming the difference naively loses all digits
// exactly where the outage formulas need it; for x <= 2 this uses the
// series of the difference itself. Defined as 0 at x = 0 (its limit).
double one_minus_x_bessel_k1(double x);

}  // namespace ehcoop
