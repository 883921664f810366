#include "igames/numerics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace igames {

SolveReport bisect(const std::function<double(double)>& f, Bracket bracket,
                   double tol) {
  if (!(bracket.lo < bracket.hi)) {
    throw std::invalid_argument("bisect: bracket requires lo < hi");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("bisect: tolerance must be positive");
  }
  double lo = bracket.lo, hi = bracket.hi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, 0, 0.0, true};
  if (fhi == 0.0) return {hi, 0, 0.0, true};
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg << "bisect: no sign change on bracket [" << lo << ", " << hi
        << "]: f(lo) = " << flo << ", f(hi) = " << fhi;
    throw std::invalid_argument(msg.str());
  }
  SolveReport report;
  double fmid = flo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    fmid = f(mid);
    ++report.iterations;
    if (fmid == 0.0) {
      return {mid, report.iterations, 0.0, true};
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  report.value = 0.5 * (lo + hi);
  report.residual = std::abs(f(report.value));
  report.converged = true;
  return report;
}

SolveReport fixed_point(const std::function<double(double)>& g, double start,
                        double damping, double tol, int max_iter) {
  if (!(damping > 0.0) || damping > 1.0) {
    throw std::invalid_argument("fixed_point: damping must lie in (0, 1]");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("fixed_point: tolerance must be positive");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("fixed_point: max_iter must be at least 1");
  }
  double x = start;
  SolveReport report;
  for (int i = 0; i < max_iter; ++i) {
    const double gx = g(x);
    report.iterations = i + 1;
    report.residual = std::abs(gx - x);
    if (report.residual <= tol) {
      report.value = x;
      report.converged = true;
      return report;
    }
    x = (1.0 - damping) * x + damping * gx;
  }
  report.value = x;
  report.residual = std::abs(g(x) - x);
  report.converged = report.residual <= tol;
  return report;
}

}  // namespace igames
