#include "igames/two_sided.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace igames {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketCap = 1e6;  // beyond this a threshold counts as +inf

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_prob(double p, const char* name) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie in [0, 1], got " << p;
    fail(msg.str());
  }
}

void check_gain(double g, const char* name) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    std::ostringstream msg;
    msg << name << " must be nonnegative and finite, got " << g;
    fail(msg.str());
  }
}

}  // namespace

PrimaryExpectedPayoffs primary_payoffs(const GameParams& params, double g21,
                                       double kappa) {
  params.validate();
  check_gain(g21, "g21");
  check_prob(kappa, "kappa");
  const double P = params.power_budget;
  const double N0 = params.noise_density;
  PrimaryExpectedPayoffs out;
  out.spread_payoff = std::log2(1.0 + (P / 2.0) / (N0 + g21 * P / 2.0));
  // A share offer is honored with probability 1 - kappa; otherwise the
  // secondary spreads into the primary's half band.
  const double honored = 0.5 * std::log2(1.0 + P / N0);
  const double violated = 0.5 * std::log2(1.0 + P / (N0 + g21 * P / 2.0));
  out.share_payoff = (1.0 - kappa) * honored + kappa * violated;
  return out;
}

double spread_share_gap(const GameParams& params, double g21, double kappa) {
  const PrimaryExpectedPayoffs p = primary_payoffs(params, g21, kappa);
  return p.spread_payoff - p.share_payoff;
}

double g21_hat(const GameParams& params, double kappa, double tol) {
  params.validate();
  check_prob(kappa, "kappa");
  if (kappa == 1.0) return kInf;  // spreading dominates at every gain
  auto gap = [&](double g) { return spread_share_gap(params, g, kappa); };
  double hi = 1.0;
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kBracketCap) return kInf;
  }
  if (gap(hi) == 0.0) return hi;
  return bisect(gap, {0.0, hi}, tol).value;
}

double entry_rate(const GameParams& params, double g12, double alpha) {
  params.validate();
  check_gain(g12, "g12");
  check_prob(alpha, "alpha");
  const double P = params.power_budget;
  const double N0 = params.noise_density;
  const double both_spread =
      std::log2(1.0 + (P / 2.0) / (N0 + g12 * P / 2.0));
  double after_share;
  if (g12 <= 0.5) {
    // The secondary spurns the share and spreads into the occupied half.
    after_share = 0.5 * std::log2(1.0 + P / (2.0 * N0)) +
                  0.5 * std::log2(1.0 + (P / 2.0) / (N0 + g12 * P));
  } else {
    after_share = 0.5 * std::log2(1.0 + P / N0);
  }
  return alpha * both_spread + (1.0 - alpha) * after_share;
}

double g12_hat(const GameParams& params, double alpha, double tol) {
  params.validate();
  check_prob(alpha, "alpha");
  if (alpha == 0.0) {
    fail("g12_hat: requires alpha > 0 (a never-spreading primary leaves the "
         "entry rate flat above 1/2)");
  }
  const double cost = params.power_cost_coeff * params.power_budget;
  auto excess = [&](double g) { return entry_rate(params, g, alpha) - cost; };
  if (excess(0.0) <= 0.0) return 0.0;  // even a clear channel cannot pay
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kBracketCap) return kInf;  // the cost is always covered
  }
  if (excess(hi) == 0.0) return hi;
  return bisect(excess, {0.0, hi}, tol).value;
}

double kappa_posterior(const GainDistribution& prior_g12, double threshold) {
  if (std::isnan(threshold)) fail("kappa_posterior: threshold is NaN");
  const double prior_below_half = prior_g12.cdf(0.5);
  if (threshold <= 0.0) return prior_below_half;  // entry never happens
  const double entering = prior_g12.cdf(threshold);
  if (entering == 0.0) return prior_below_half;  // off the equilibrium path
  return std::min(prior_below_half, entering) / entering;
}

namespace {

struct MapResult {
  double g21_cut = 0.0;
  double alpha = 0.0;
  double g12_cut = 0.0;
  double next_kappa = 0.0;
};

MapResult apply_map(const GameParams& params, const GainDistribution& prior_g12,
                    const GainDistribution& prior_g21, double kappa) {
  MapResult r;
  r.g21_cut = g21_hat(params, kappa);
  r.alpha = prior_g21.cdf(r.g21_cut);
  if (r.alpha == 0.0) {
    fail("solve_two_sided: the prior on g21 puts no mass below the primary's "
         "spread threshold; the entry threshold is not identified");
  }
  r.g12_cut = g12_hat(params, r.alpha);
  r.next_kappa = kappa_posterior(prior_g12, r.g12_cut);
  return r;
}

}  // namespace

TwoSidedEquilibrium solve_two_sided(const GameParams& params,
                                    const GainDistribution& prior_g12,
                                    const GainDistribution& prior_g21,
                                    double damping, double tol, int max_iter) {
  params.validate();
  const double kappa0 = prior_g12.cdf(0.5);
  auto step = [&](double kappa) {
    return apply_map(params, prior_g12, prior_g21, kappa).next_kappa;
  };
  TwoSidedEquilibrium eq;
  eq.report = fixed_point(step, kappa0, damping, tol, max_iter);
  eq.kappa_hat = eq.report.value;
  const MapResult at_fp = apply_map(params, prior_g12, prior_g21, eq.kappa_hat);
  eq.g21_hat = at_fp.g21_cut;
  eq.alpha = at_fp.alpha;
  eq.g12_hat = at_fp.g12_cut;
  eq.off_path_entry = prior_g12.cdf(at_fp.g12_cut) == 0.0;
  return eq;
}

std::vector<double> two_sided_candidates(const GameParams& params,
                                         const GainDistribution& prior_g12,
                                         const GainDistribution& prior_g21,
                                         int grid_points) {
  params.validate();
  if (grid_points < 2) fail("two_sided_candidates: need at least 2 grid points");
  auto residual = [&](double kappa) {
    return apply_map(params, prior_g12, prior_g21, kappa).next_kappa - kappa;
  };
  std::vector<double> candidates;
  auto push_unique = [&](double kappa) {
    for (double c : candidates) {
      if (std::abs(c - kappa) < 1e-8) return;
    }
    candidates.push_back(kappa);
  };
  double prev_kappa = 0.0;
  double prev_res = residual(prev_kappa);
  if (prev_res == 0.0) push_unique(prev_kappa);
  for (int i = 1; i <= grid_points; ++i) {
    const double kappa = static_cast<double>(i) / grid_points;
    const double res = residual(kappa);
    if (res == 0.0) {
      push_unique(kappa);
    } else if ((res > 0.0) != (prev_res > 0.0)) {
      push_unique(bisect(residual, {prev_kappa, kappa}, 1e-10).value);
    }
    prev_kappa = kappa;
    prev_res = res;
  }
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

}  // namespace igames
