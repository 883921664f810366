#include "igames/gain_distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace igames {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

// splitmix64 finalizer; decorrelates nearby seeds and stream indices.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GlRule {
  std::vector<double> nodes, weights;
};

const GlRule& gl_rule(int order) {
  static std::mutex mu;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GlRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on the Legendre recurrence.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace

RngSeed RngSeed::split(std::uint64_t stream) const {
  return {mix64(value ^ mix64(stream))};
}

GainDistribution GainDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    fail("uniform: requires 0 <= lo < hi < inf");
  }
  GainDistribution d;
  d.kind_ = Kind::uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

GainDistribution GainDistribution::truncated_exponential(double rate, double lo,
                                                         double hi) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    fail("truncated_exponential: rate must be positive and finite");
  }
  if (!(lo >= 0.0) || !(hi > lo)) {
    fail("truncated_exponential: requires 0 <= lo < hi");
  }
  GainDistribution d;
  d.kind_ = Kind::truncated_exponential;
  d.rate_ = rate;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

GainDistribution GainDistribution::point_mass(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    fail("point_mass: value must be nonnegative and finite");
  }
  GainDistribution d;
  d.kind_ = Kind::point_mass;
  d.lo_ = value;
  d.hi_ = value;
  return d;
}

GainDistribution GainDistribution::discrete(std::vector<double> values,
                                            std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    fail("discrete: values and weights must be nonempty and equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      fail("discrete: values must be nonnegative and finite");
    }
    if (!(weights[i] >= 0.0)) {
      fail("discrete: weights must be nonnegative");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    fail("discrete: weights must sum to 1 within 1e-12");
  }
  // Sort atoms by value so the cdf is a simple prefix sum.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  GainDistribution d;
  d.kind_ = Kind::discrete;
  for (std::size_t i : order) {
    d.values_.push_back(values[i]);
    d.weights_.push_back(weights[i]);
  }
  d.cum_.resize(d.weights_.size());
  std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cum_.begin());
  d.cum_.back() = 1.0;
  d.lo_ = d.values_.front();
  d.hi_ = d.values_.back();
  return d;
}

bool GainDistribution::bounded() const { return std::isfinite(hi_); }

double GainDistribution::cdf(double x) const {
  switch (kind_) {
    case Kind::uniform:
      if (x < lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    case Kind::truncated_exponential: {
      if (x < lo_) return 0.0;
      if (x >= hi_) return 1.0;
      const double num = -std::expm1(-rate_ * (x - lo_));
      if (!bounded()) return num;
      return num / -std::expm1(-rate_ * (hi_ - lo_));
    }
    case Kind::point_mass:
      return x >= lo_ ? 1.0 : 0.0;
    case Kind::discrete: {
      double acc = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] <= x) acc = cum_[i];
      }
      return acc;
    }
  }
  return 0.0;
}

double GainDistribution::quantile(double u) const {
  if (!(u >= 0.0) || !(u < 1.0)) {
    fail("quantile: u must lie in [0, 1)");
  }
  switch (kind_) {
    case Kind::uniform:
      return lo_ + u * (hi_ - lo_);
    case Kind::truncated_exponential: {
      const double z = bounded() ? -std::expm1(-rate_ * (hi_ - lo_)) : 1.0;
      return lo_ - std::log1p(-u * z) / rate_;
    }
    case Kind::point_mass:
      return lo_;
    case Kind::discrete:
      for (std::size_t i = 0; i < cum_.size(); ++i) {
        if (u < cum_[i]) return values_[i];
      }
      return values_.back();
  }
  return lo_;
}

double GainDistribution::density(double x) const {
  switch (kind_) {
    case Kind::uniform:
      return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
    case Kind::truncated_exponential: {
      if (x < lo_ || x > hi_) return 0.0;
      const double z = bounded() ? -std::expm1(-rate_ * (hi_ - lo_)) : 1.0;
      return rate_ * std::exp(-rate_ * (x - lo_)) / z;
    }
    case Kind::point_mass:
    case Kind::discrete:
      fail("density: distribution has atoms, no density");
  }
  return 0.0;
}

double GainDistribution::sample_one(Rng& rng) const {
  return quantile(rng.unit());
}

std::vector<double> GainDistribution::sample(RngSeed seed, std::size_t n) const {
  if (n == 0) {
    fail("sample: n must be at least 1");
  }
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(rng));
  return out;
}

namespace {

// One quadrature dimension: weighted support points integrating to 1.
struct DimNodes {
  std::vector<double> points, weights;
};

DimNodes dim_nodes(const GainDistribution& d, int order) {
  DimNodes out;
  switch (d.kind()) {
    case GainDistribution::Kind::point_mass:
      out.points = {d.support_lo()};
      out.weights = {1.0};
      break;
    case GainDistribution::Kind::discrete:
      out.points = d.atom_values();
      out.weights = d.atom_weights();
      break;
    default: {
      if (!d.bounded()) {
        fail("expectation: quadrature requires bounded supports "
             "(truncate the distribution or use Monte Carlo)");
      }
      const GlRule& rule = gl_rule(order);
      const double mid = 0.5 * (d.support_lo() + d.support_hi());
      const double half = 0.5 * (d.support_hi() - d.support_lo());
      for (int i = 0; i < order; ++i) {
        const double x = mid + half * rule.nodes[i];
        out.points.push_back(x);
        out.weights.push_back(rule.weights[i] * half * d.density(x));
      }
    }
  }
  return out;
}

}  // namespace

double expectation(std::span<const GainDistribution> dists,
                   const std::function<double(std::span<const double>)>& f,
                   const ExpectationMethod& method) {
  if (dists.empty()) {
    fail("expectation: need at least one distribution");
  }
  if (const auto* quad = std::get_if<Quadrature>(&method)) {
    if (quad->order < 1) {
      fail("expectation: quadrature order must be at least 1");
    }
    std::vector<DimNodes> dims;
    dims.reserve(dists.size());
    for (const auto& d : dists) dims.push_back(dim_nodes(d, quad->order));

    std::vector<std::size_t> idx(dims.size(), 0);
    std::vector<double> point(dims.size());
    double acc = 0.0;
    for (;;) {
      double w = 1.0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        point[i] = dims[i].points[idx[i]];
        w *= dims[i].weights[idx[i]];
      }
      acc += w * f(point);
      std::size_t i = 0;
      for (; i < dims.size(); ++i) {
        if (++idx[i] < dims[i].points.size()) break;
        idx[i] = 0;
      }
      if (i == dims.size()) break;
    }
    return acc;
  }

  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.n == 0) {
    fail("expectation: Monte Carlo sample count must be at least 1");
  }
  Rng rng(mc.seed);
  std::vector<double> point(dists.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mc.n; ++i) {
    for (std::size_t j = 0; j < dists.size(); ++j) {
      point[j] = dists[j].sample_one(rng);
    }
    acc += f(point);
  }
  return acc / static_cast<double>(mc.n);
}

}  // namespace igames
