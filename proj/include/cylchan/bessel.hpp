#pragma once

namespace cylchan {

/// Bessel function of the first kind J_n(x), n >= 0, x >= 0.
///
/// Ascending power series for small arguments, downward (Miller) recurrence
/// with sum normalization for large arguments. Both branches agree to better
/// than 1e-12 at the switchover; see the unit tests for the cross-validation
/// against an integral-representation oracle.
double bessel_j(int n, double x);

/// Derivative J_n'(x). Uses J_0' = -J_1 and J_n' = J_{n-1} - (n/x) J_n.
double bessel_j_deriv(int n, double x);

} // namespace cylchan
