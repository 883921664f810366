// Scalar root finding and damped fixed-point iteration with explicit
// tolerance and convergence reporting. Shared by every solver module.
#pragma once

#include <functional>

namespace igames {

// Interval [lo, hi] expected to contain a sign change of the target function.
struct Bracket {
  double lo = 0.0;
  double hi = 1.0;
};

struct SolveReport {
  double value = 0.0;     // located root or fixed point
  int iterations = 0;
  double residual = 0.0;  // |f(value)| for roots, |g(value) - value| for fixed points
  bool converged = false;
};

// Bisection until the bracket width is at most tol (or an exact zero is hit).
// Requires f(lo) and f(hi) to have opposite signs (zero endpoints count as
// roots); otherwise throws std::invalid_argument quoting both endpoint values.
SolveReport bisect(const std::function<double(double)>& f, Bracket bracket,
                   double tol = 1e-10);

// Damped iteration x <- (1 - damping) * x + damping * g(x), stopping when
// |g(x) - x| <= tol. Non-convergence is reported via the flag, not thrown.
SolveReport fixed_point(const std::function<double(double)>& g, double start,
                        double damping = 0.5, double tol = 1e-10,
                        int max_iter = 200);

}  // namespace igames
