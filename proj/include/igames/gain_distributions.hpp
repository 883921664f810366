// Priors over channel gains: closed-form cdfs, inverse-cdf sampling with a
// portable seeded generator, and expectations of gain functionals via tensor
// Gauss-Legendre quadrature or Monte Carlo.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace igames {

struct RngSeed {
  std::uint64_t value = 0;

  // Independent stream seed derived with the splitmix64 finalizer, so
  // sub-components can draw without sharing a sequence.
  RngSeed split(std::uint64_t stream) const;
};

// mt19937_64 is specified bit-for-bit by the C++ standard, so every trace is
// reproducible across platforms. Unit doubles take the top 53 bits of each
// output, giving uniform values in [0, 1).
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Supported prior families. Supports live in [0, inf); only the truncated
// exponential may be unbounded above.
class GainDistribution {
 public:
  enum class Kind { uniform, truncated_exponential, point_mass, discrete };

  GainDistribution() : lo_(1.0), hi_(1.0) {}  // point mass at 1

  static GainDistribution uniform(double lo, double hi);
  // Density proportional to exp(-rate * x) restricted to [lo, hi];
  // hi may be +infinity.
  static GainDistribution truncated_exponential(double rate, double lo,
                                                double hi);
  static GainDistribution point_mass(double value);
  // Atoms with weights summing to 1 (within 1e-12).
  static GainDistribution discrete(std::vector<double> values,
                                   std::vector<double> weights);

  Kind kind() const { return kind_; }
  double cdf(double x) const;  // P(g <= x)
  double quantile(double u) const;  // inverse cdf, u in [0, 1)
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }  // +inf when unbounded above
  double rate() const { return rate_; }      // 0 unless truncated exponential
  bool bounded() const;

  double sample_one(Rng& rng) const;
  std::vector<double> sample(RngSeed seed, std::size_t n) const;  // n >= 1

  // Internals used by quadrature: density for continuous kinds, atoms for
  // discrete kinds.
  double density(double x) const;
  const std::vector<double>& atom_values() const { return values_; }
  const std::vector<double>& atom_weights() const { return weights_; }

 private:
  Kind kind_ = Kind::point_mass;
  double lo_ = 0.0, hi_ = 0.0, rate_ = 0.0;
  std::vector<double> values_, weights_, cum_;
};

struct Quadrature {
  int order = 32;  // Gauss-Legendre nodes per continuous dimension
};

struct MonteCarlo {
  std::size_t n = 100000;
  RngSeed seed;
};

using ExpectationMethod = std::variant<Quadrature, MonteCarlo>;

// E[f(g_1, ..., g_m)] for independent gains g_i ~ dists[i]. Quadrature
// tensorizes Gauss-Legendre nodes over continuous dimensions and enumerates
// atoms exactly; it rejects unbounded supports (truncate first or use
// Monte Carlo).
double expectation(std::span<const GainDistribution> dists,
                   const std::function<double(std::span<const double>)>& f,
                   const ExpectationMethod& method = Quadrature{});

}  // namespace igames
