#include "igames/static_games.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "igames/numerics.hpp"

namespace igames {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_two_subchannels(const GameParams& params) {
  params.validate();
  if (params.subchannels != 2) {
    fail("unobserved-gains solver supports exactly two subchannels");
  }
}

void check_ch1_power(double p, const GameParams& params, const char* name) {
  if (!(p >= 0.0) || p > params.power_budget || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << name << " = " << p << " outside [0, " << params.power_budget << "]";
    fail(msg.str());
  }
}

const PlayerPriors& priors_for(const UcgiPriors& priors, int player) {
  if (player != 1 && player != 2) fail("player index must be 1 or 2");
  return player == 1 ? priors.player1 : priors.player2;
}

// Marginal value of subchannel 1 at a fixed gain realization: positive part
// from the first subchannel, negative from the budget leaving the second.
double foc_integrand(double g_self, double g_cross, double P, double N0,
                     double p_own, double p_opp) {
  const double num = g_self * (P - 2.0 * p_own) + g_cross * (P - 2.0 * p_opp);
  const double d1 = N0 + g_self * p_own + g_cross * p_opp;
  const double d2 = N0 + g_self * (P - p_own) + g_cross * (P - p_opp);
  return 0.5 * g_self * num / (d1 * d2);
}

}  // namespace

double ucgi_foc_residual(const GameParams& params, const UcgiPriors& priors,
                         double p1_ch1, double p2_ch1, int player,
                         const ExpectationMethod& method) {
  check_two_subchannels(params);
  check_ch1_power(p1_ch1, params, "p1_ch1");
  check_ch1_power(p2_ch1, params, "p2_ch1");
  const PlayerPriors& own = priors_for(priors, player);
  const double p_own = player == 1 ? p1_ch1 : p2_ch1;
  const double p_opp = player == 1 ? p2_ch1 : p1_ch1;
  const std::array<GainDistribution, 2> dists = {own.self, own.incident};
  return expectation(
      dists,
      [&](std::span<const double> g) {
        return foc_integrand(g[0], g[1], params.power_budget,
                             params.noise_density, p_own, p_opp);
      },
      method);
}

double ucgi_best_response(const GameParams& params, const UcgiPriors& priors,
                          int player, double opponent_ch1, double tol,
                          const ExpectationMethod& method) {
  check_two_subchannels(params);
  check_ch1_power(opponent_ch1, params, "opponent_ch1");
  if (!(tol > 0.0)) fail("ucgi_best_response: tolerance must be positive");
  const double P = params.power_budget;
  auto residual = [&](double p_own) {
    const double p1 = player == 1 ? p_own : opponent_ch1;
    const double p2 = player == 1 ? opponent_ch1 : p_own;
    return ucgi_foc_residual(params, priors, p1, p2, player, method);
  };
  // The marginal value is strictly decreasing in own power, so the optimum is
  // interior exactly when the endpoint derivatives straddle zero.
  const double at_lo = residual(0.0);
  if (at_lo <= 0.0) return 0.0;
  const double at_hi = residual(P);
  if (at_hi >= 0.0) return P;
  return bisect(residual, {0.0, P}, tol).value;
}

BrTrajectory ucgi_br_dynamics(const GameParams& params, const UcgiPriors& priors,
                              double init1_ch1, double init2_ch1, int max_iter,
                              double tol, UpdateRule rule,
                              const ExpectationMethod& method) {
  check_two_subchannels(params);
  check_ch1_power(init1_ch1, params, "init1_ch1");
  check_ch1_power(init2_ch1, params, "init2_ch1");
  if (max_iter < 1) fail("ucgi_br_dynamics: max_iter must be at least 1");
  if (!(tol > 0.0)) fail("ucgi_br_dynamics: tolerance must be positive");

  const double P = params.power_budget;
  BrTrajectory traj;
  double p1 = init1_ch1, p2 = init2_ch1;
  traj.steps.push_back({0, p1, P - p1, p2, P - p2});
  for (int it = 1; it <= max_iter; ++it) {
    const double new1 = ucgi_best_response(params, priors, 1, p2, 1e-12, method);
    const double against =
        rule == UpdateRule::simultaneous ? p1 : new1;
    const double new2 =
        ucgi_best_response(params, priors, 2, against, 1e-12, method);
    const double change =
        std::max(std::abs(new1 - p1), std::abs(new2 - p2));
    p1 = new1;
    p2 = new2;
    traj.steps.push_back({it, p1, P - p1, p2, P - p2});
    if (change < tol) {
      traj.converged = true;
      break;
    }
  }
  traj.gap_to_symmetric =
      std::max(std::abs(p1 - P / 2.0), std::abs(p2 - P / 2.0));
  return traj;
}

PowerAllocation ucgi_symmetric_ne(const GameParams& params) {
  params.validate();
  return to_allocation(RestrictedAction::spread(), params);
}

void MixedRestrictedStrategy::validate() const {
  double total = spread;
  if (!(spread >= 0.0) || spread > 1.0 + 1e-12) {
    fail("mixed strategy: spread probability outside [0, 1]");
  }
  for (double a : concentrate) {
    if (!(a >= 0.0) || a > 1.0 + 1e-12) {
      fail("mixed strategy: concentrate probability outside [0, 1]");
    }
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    fail("mixed strategy: probabilities must sum to 1 within 1e-12");
  }
}

double bgi_delta(const GameParams& params, double self_gain,
                 double incident_gain) {
  params.validate();
  if (!(self_gain > 0.0) || !(incident_gain > 0.0)) {
    fail("bgi_delta: gains must be positive");
  }
  const double P = params.power_budget;
  const double N0 = params.noise_density;
  const double clear = 0.5 * std::log2(1.0 + self_gain * P / N0);
  const double hit =
      0.5 * std::log2(1.0 + self_gain * P / (N0 + incident_gain * P));
  return clear - hit;
}

std::vector<double> bgi_expected_payoffs(const GameParams& params,
                                         double self_gain, double incident_gain,
                                         const MixedRestrictedStrategy& opponent) {
  params.validate();
  if (!(self_gain > 0.0) || !(incident_gain > 0.0)) {
    fail("bgi_expected_payoffs: gains must be positive");
  }
  opponent.validate();
  const int K = params.subchannels;
  if (static_cast<int>(opponent.concentrate.size()) != K) {
    fail("bgi_expected_payoffs: mixture has wrong number of subchannels");
  }
  const double P = params.power_budget;
  const double N0 = params.noise_density;
  const double g = self_gain, h = incident_gain;
  const double gamma = opponent.spread;
  const double conc_total = 1.0 - gamma;

  // Concentrating: the opponent either lands on the same subchannel, spreads
  // a K-th of its budget there, or leaves it clear.
  const double hit = 0.5 * std::log2(1.0 + g * P / (N0 + h * P));
  const double vs_spread = 0.5 * std::log2(1.0 + g * P / (N0 + h * P / K));
  const double clear = 0.5 * std::log2(1.0 + g * P / N0);

  // Spreading: against any concentrate, exactly one subchannel is interfered;
  // against a spreader, all are equally interfered.
  const double spread_vs_conc =
      (K - 1) * 0.5 * std::log2(1.0 + (g * P / K) / N0) +
      0.5 * std::log2(1.0 + (g * P / K) / (N0 + h * P));
  const double spread_vs_spread =
      K * 0.5 * std::log2(1.0 + (g * P / K) / (N0 + h * P / K));

  std::vector<double> out(K + 1);
  for (int k = 0; k < K; ++k) {
    const double alpha_k = opponent.concentrate[k];
    out[k] = alpha_k * hit + gamma * vs_spread +
             (conc_total - alpha_k) * clear;
  }
  out[K] = conc_total * spread_vs_conc + gamma * spread_vs_spread;
  return out;
}

BgiVerification bgi_verify_symmetric_bne(const GameParams& params,
                                         const RestrictedStrategyFn& candidate,
                                         const PlayerPriors& priors,
                                         int n_check, RngSeed seed) {
  params.validate();
  if (n_check < 1) fail("bgi_verify_symmetric_bne: n_check must be at least 1");
  const int K = params.subchannels;

  auto act_of = [&](double g_self, double g_cross) {
    const RestrictedAction a = candidate(g_self, g_cross);
    if (a.index < 0 || a.index > K) {
      fail("bgi_verify_symmetric_bne: candidate returned an invalid action");
    }
    return a;
  };

  // Estimate the mixture the candidate induces over the prior.
  const std::size_t n_induce =
      std::max<std::size_t>(static_cast<std::size_t>(n_check), 10000);
  BgiVerification result;
  result.induced.concentrate.assign(K, 0.0);
  {
    Rng rng(seed.split(1));
    for (std::size_t i = 0; i < n_induce; ++i) {
      const double g_self = priors.self.sample_one(rng);
      const double g_cross = priors.incident.sample_one(rng);
      const RestrictedAction a = act_of(g_self, g_cross);
      if (a.is_spread()) {
        result.induced.spread += 1.0;
      } else {
        result.induced.concentrate[a.index - 1] += 1.0;
      }
    }
    result.induced.spread /= static_cast<double>(n_induce);
    for (double& a : result.induced.concentrate) {
      a /= static_cast<double>(n_induce);
    }
  }

  // Search sampled types for a profitable unilateral deviation.
  Rng rng(seed.split(2));
  for (int i = 0; i < n_check; ++i) {
    const double g_self = priors.self.sample_one(rng);
    const double g_cross = priors.incident.sample_one(rng);
    const RestrictedAction played = act_of(g_self, g_cross);
    const std::vector<double> values =
        bgi_expected_payoffs(params, g_self, g_cross, result.induced);
    const int played_idx = played.is_spread() ? K : played.index - 1;
    int best_idx = 0;
    for (int j = 1; j <= K; ++j) {
      if (values[j] > values[best_idx]) best_idx = j;
    }
    if (values[best_idx] - values[played_idx] > 1e-9) {
      BgiDeviation dev;
      dev.self_gain = g_self;
      dev.incident_gain = g_cross;
      dev.played = played;
      dev.better = best_idx == K ? RestrictedAction::spread()
                                 : RestrictedAction::concentrate(best_idx + 1);
      dev.improvement = values[best_idx] - values[played_idx];
      result.counterexample = dev;
      result.verified = false;
      return result;
    }
  }
  result.verified = true;
  return result;
}

}  // namespace igames
