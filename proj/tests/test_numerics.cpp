#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "igames/numerics.hpp"

using namespace igames;

TEST_SUITE("numerics") {

TEST_CASE("bisect finds a linear root") {
  const auto r = bisect([](double x) { return x - 2.0; }, {0.0, 5.0}, 1e-10);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) <= 1e-10);
  CHECK(r.residual <= 1e-9);
}

TEST_CASE("bisect iteration count stays within the bracket-halving bound") {
  const double widths[] = {1.0, 5.0, 1e3, 0.25};
  const double tols[] = {1e-6, 1e-10, 1e-12};
  for (double w : widths) {
    for (double tol : tols) {
      const auto r =
          bisect([](double x) { return std::atan(x - 0.1); }, {-w / 2, w / 2}, tol);
      const int bound = static_cast<int>(std::ceil(std::log2(w / tol))) + 2;
      CHECK(r.iterations <= bound);
      CHECK(std::abs(r.value - 0.1) <= tol);
    }
  }
}

TEST_CASE("bisect accepts a root sitting on an endpoint") {
  const auto r = bisect([](double x) { return x; }, {0.0, 1.0}, 1e-10);
  CHECK(r.value == 0.0);
  CHECK(r.residual == 0.0);
}

TEST_CASE("bisect rejects a bracket without a sign change") {
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, {0.0, 1.0}, 1e-10),
                  std::invalid_argument);
  // The diagnostic quotes the endpoint values.
  try {
    bisect([](double x) { return x * x + 1.0; }, {0.0, 2.0}, 1e-10);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("1") != std::string::npos);
    CHECK(what.find("5") != std::string::npos);
  }
}

TEST_CASE("bisect validates the bracket ordering") {
  CHECK_THROWS_AS(bisect([](double x) { return x; }, {1.0, 0.0}, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("fixed_point solves the constant map immediately") {
  const auto r = fixed_point([](double) { return 0.5; }, 0.1, 1.0, 1e-12, 100);
  CHECK(r.converged);
  CHECK(r.value == 0.5);
}

TEST_CASE("fixed_point on the identity returns the start with zero residual") {
  const auto r = fixed_point([](double x) { return x; }, 0.3, 0.5, 1e-12, 100);
  CHECK(r.converged);
  CHECK(r.value == 0.3);
  CHECK(r.residual == 0.0);
}

TEST_CASE("fixed_point of cos lands at the classic value") {
  // Frozen by iterating x <- cos(x) 200 times from 0.5 independently.
  const double expected = 0.739085133215161;
  const auto undamped =
      fixed_point([](double x) { return std::cos(x); }, 0.5, 1.0, 1e-12, 200);
  CHECK(undamped.converged);
  CHECK(std::abs(undamped.value - expected) <= 1e-9);
  const auto damped =
      fixed_point([](double x) { return std::cos(x); }, 0.5, 0.5, 1e-12, 200);
  CHECK(damped.converged);
  CHECK(std::abs(damped.value - expected) <= 1e-9);
}

TEST_CASE("fixed_point reports non-convergence instead of throwing") {
  // x <- 1 - x oscillates with period two when undamped.
  const auto r = fixed_point([](double x) { return 1.0 - x; }, 0.2, 1.0, 1e-12, 50);
  CHECK(!r.converged);
  CHECK(r.iterations == 50);
  // Damping collapses the oscillation onto the fixed point at 1/2.
  const auto damped =
      fixed_point([](double x) { return 1.0 - x; }, 0.2, 0.5, 1e-12, 200);
  CHECK(damped.converged);
  CHECK(std::abs(damped.value - 0.5) <= 1e-10);
}

TEST_CASE("fixed_point validates damping, tolerance and iteration budget") {
  auto g = [](double x) { return x; };
  CHECK_THROWS_AS(fixed_point(g, 0.5, 0.0, 1e-10, 10), std::invalid_argument);
  CHECK_THROWS_AS(fixed_point(g, 0.5, 1.5, 1e-10, 10), std::invalid_argument);
  CHECK_THROWS_AS(fixed_point(g, 0.5, 0.5, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(fixed_point(g, 0.5, 0.5, 1e-10, 0), std::invalid_argument);
}

TEST_CASE("identical inputs produce identical reports") {
  auto f = [](double x) { return std::sin(x) - 0.4; };
  const auto a = bisect(f, {0.0, 1.5}, 1e-11);
  const auto b = bisect(f, {0.0, 1.5}, 1e-11);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.residual == b.residual);
  auto g = [](double x) { return std::cos(x); };
  const auto c = fixed_point(g, 0.5, 0.7, 1e-11, 300);
  const auto d = fixed_point(g, 0.5, 0.7, 1e-11, 300);
  CHECK(c.value == d.value);
  CHECK(c.iterations == d.iterations);
}

}  // TEST_SUITE
