#include "igames/repeated_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "igames/numerics.hpp"

namespace igames {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_gain(double g, const char* name) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << g;
    fail(msg.str());
  }
}

void check_cutoff_base(double d) {
  if (!(d > 0.0) || !(d < 1.0)) {
    std::ostringstream msg;
    msg << "entry cutoff base must lie in (0, 1), got " << d;
    fail(msg.str());
  }
}

void check_belief(double mu) {
  if (!(mu >= 0.0) || !(mu <= 1.0)) {
    std::ostringstream msg;
    msg << "belief must lie in [0, 1], got " << mu;
    fail(msg.str());
  }
}

double cutoff(double d, int t) { return std::pow(d, t); }

void check_entry_premise(const GameParams& params) {
  const double share = joint_rates(params, 0.0).share_rate;
  const double cost = params.power_cost_coeff * params.power_budget;
  if (!(share > cost)) {
    std::ostringstream msg;
    msg << "power cost " << cost << " is not below the half-band rate "
        << share << "; entry can never pay";
    fail(msg.str());
  }
}

bool reputation_active(const GameParams& params, double g12) {
  return g12 > 0.5 && g12 > g12_tilde(params);
}

}  // namespace

void RepeatedConfig::validate() const {
  params.validate();
  if (horizon < 1) fail("horizon must be at least 1");
  check_gain(g12, "g12");
  check_gain(g21, "g21");
  check_entry_premise(params);
  if (reputation_active(params, g12)) {
    if (!(g21 < 1.0)) {
      fail("realized g21 must be below 1 in the reputation regime");
    }
    if (prior_g21.cdf(1.0) < 1.0 - 1e-12) {
      fail("prior on g21 must put all its mass below 1 in the reputation "
           "regime");
    }
  }
}

double pi_zero(const GameParams& params) {
  params.validate();
  return std::log2(1.0 + params.power_budget / (2.0 * params.noise_density));
}

double lambda_mix(const GameParams& params, double g21) {
  params.validate();
  check_gain(g21, "g21");
  if (!(g21 < 1.0)) {
    fail("lambda_mix: requires g21 < 1 (solo rate no longer beats "
         "spread-then-exclusivity)");
  }
  const double p0 = pi_zero(params);
  const JointRates r = joint_rates(params, g21);
  return 2.0 - (p0 - r.spread_rate) / (p0 - r.share_rate);
}

double gamma_mix(double mu, double d, int t) {
  check_belief(mu);
  check_cutoff_base(d);
  if (t < 2) {
    fail("gamma_mix: defined for t > 1 (the last period has no reputation "
         "left to defend)");
  }
  const double next = cutoff(d, t - 1);
  if (mu >= next) return 1.0;
  if (mu == 0.0) return 0.0;
  return (mu / (1.0 - mu)) * ((1.0 - next) / next);
}

double belief_update(double mu_prev, EntryAction entry,
                     std::optional<SeqAction> primary_action, double d, int t) {
  check_belief(mu_prev);
  check_cutoff_base(d);
  if (t < 0) fail("belief_update: target period must be nonnegative");
  if (entry == EntryAction::stay_out) {
    if (primary_action.has_value()) {
      fail("belief_update: no primary action is observed when the secondary "
           "stays out");
    }
    return mu_prev;
  }
  if (!primary_action.has_value()) {
    fail("belief_update: entry requires an observed primary action");
  }
  if (*primary_action == SeqAction::share || mu_prev == 0.0) return 0.0;
  return std::max(cutoff(d, t), mu_prev);
}

EntryAction secondary_entry(double mu, double d, int t, double lambda,
                            double draw) {
  check_belief(mu);
  check_cutoff_base(d);
  if (t < 1) fail("secondary_entry: period index must be at least 1");
  if (!(draw >= 0.0) || !(draw < 1.0)) {
    fail("secondary_entry: draw must lie in [0, 1)");
  }
  const double c = cutoff(d, t);
  if (mu < c) return EntryAction::enter;
  if (mu > c) return EntryAction::stay_out;
  return draw < lambda ? EntryAction::enter : EntryAction::stay_out;
}

SeqAction primary_response(double g21, double g_star_value, double mu, double d,
                           int t, double draw) {
  check_gain(g21, "g21");
  check_belief(mu);
  check_cutoff_base(d);
  if (t < 1) fail("primary_response: period index must be at least 1");
  if (!(draw >= 0.0) || !(draw < 1.0)) {
    fail("primary_response: draw must lie in [0, 1)");
  }
  if (g21 <= g_star_value) return SeqAction::spread;  // low type never shares
  if (t == 1) return SeqAction::share;  // no future left to deter
  const double gamma = gamma_mix(mu, d, t);
  return draw < gamma ? SeqAction::spread : SeqAction::share;
}

SimulationTrace simulate(const RepeatedConfig& config) {
  config.validate();
  const GameParams& params = config.params;
  const double cost = params.power_cost_coeff * params.power_budget;
  const double gs = g_star(params);
  const JointRates r1 = joint_rates(params, config.g21);
  const JointRates r2 = joint_rates(params, config.g12);
  const double p0 = pi_zero(params);

  SimulationTrace trace;
  trace.rho = config.prior_g21.cdf(gs);
  trace.reputation_regime = reputation_active(params, config.g12);
  trace.d = config.g12 > 0.5 ? entry_cutoff_d(params, config.g12) : kNan;
  trace.t_star = kNan;
  if (trace.reputation_regime && trace.rho > 0.0 && trace.rho < 1.0 &&
      trace.d > 0.0 && trace.d < 1.0) {
    trace.t_star = deterrence_horizon(trace.rho, trace.d);
  }

  const int T = config.horizon;
  trace.periods.reserve(T);

  if (trace.reputation_regime) {
    const double lambda = lambda_mix(params, config.g21);
    Rng rng(config.seed);
    double mu = trace.rho;
    for (int t = T; t >= 1; --t) {
      PeriodOutcome out;
      out.t_reverse = t;
      out.t_forward = T - t + 1;
      out.mu_before = mu;
      out.entry_draw = rng.unit();
      out.action_draw = kNan;
      out.entry = secondary_entry(mu, trace.d, t, lambda, out.entry_draw);
      if (out.entry == EntryAction::enter) {
        out.action_draw = rng.unit();
        out.primary_action = primary_response(config.g21, gs, mu, trace.d, t,
                                              out.action_draw);
        if (*out.primary_action == SeqAction::share) {
          out.primary_payoff = r1.share_rate;
          out.secondary_payoff = r2.share_rate - cost;
        } else {
          out.primary_payoff = r1.spread_rate;
          out.secondary_payoff = r2.spread_rate - cost;
        }
      } else {
        out.primary_payoff = p0;
        out.secondary_payoff = 0.0;
      }
      out.mu_after = t == 1 ? mu
                            : belief_update(mu, out.entry, out.primary_action,
                                            trace.d, t - 1);
      mu = out.mu_after;
      trace.periods.push_back(out);
    }
  } else {
    // Deterrence cannot work here: play the static entry equilibrium in
    // every period. Beliefs have no bearing on the play and stay at the prior.
    const SbgiEEquilibrium eq =
        sbgie_equilibrium(params, config.g12, config.g21, config.prior_g21);
    for (int t = T; t >= 1; --t) {
      PeriodOutcome out;
      out.t_reverse = t;
      out.t_forward = T - t + 1;
      out.mu_before = trace.rho;
      out.mu_after = trace.rho;
      out.entry_draw = kNan;
      out.action_draw = kNan;
      out.entry = eq.entry;
      if (eq.entry == EntryAction::enter) {
        out.primary_action = eq.post_entry->primary_action;
        out.primary_payoff = eq.post_entry->primary_payoff;
        out.secondary_payoff = eq.secondary_payoff;
      } else {
        out.primary_payoff = p0;
        out.secondary_payoff = 0.0;
      }
      trace.periods.push_back(out);
    }
  }

  for (const PeriodOutcome& out : trace.periods) {
    trace.primary_total += out.primary_payoff;
    trace.secondary_total += out.secondary_payoff;
  }
  trace.equilibrium_welfare = trace.primary_total + trace.secondary_total;

  trace.first_entry_t = 0;
  trace.deterrence_count = 0;
  for (const PeriodOutcome& out : trace.periods) {
    if (out.entry == EntryAction::enter) {
      trace.first_entry_t = out.t_reverse;
      break;
    }
    ++trace.deterrence_count;
  }

  // Benchmark: both users transmit in every period and play the one-shot
  // post-entry equilibrium; the secondary still pays its power cost.
  const SbgiEquilibrium both = sbgi_equilibrium(params, config.g12, config.g21);
  trace.benchmark_welfare =
      T * (both.primary_payoff + both.secondary_payoff - cost);
  trace.efficiency_ratio = trace.benchmark_welfare != 0.0
                               ? trace.equilibrium_welfare /
                                     trace.benchmark_welfare
                               : kNan;
  return trace;
}

double deterrence_horizon(double rho, double d) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    fail("deterrence_horizon: rho must lie strictly inside (0, 1)");
  }
  check_cutoff_base(d);
  return std::log(rho) / std::log(d);
}

namespace {

// Shared state for continuation-value recursions over (period, belief) nodes.
struct ReputationTree {
  GameParams params;
  double g12 = 0.0, g21 = 0.0;
  double gs = 0.0, d = 0.0, lambda = 0.0, p0 = 0.0;
  JointRates r1;
  std::map<std::pair<int, double>, double> memo;

  ReputationTree(const GameParams& p, double g12_, double g21_)
      : params(p), g12(g12_), g21(g21_) {
    params.validate();
    check_gain(g12, "g12");
    check_gain(g21, "g21");
    check_entry_premise(params);
    if (!reputation_active(params, g12)) {
      fail("equilibrium continuation values require the reputation regime "
           "(g12 above both 1/2 and the free-entry threshold)");
    }
    if (!(g21 < 1.0)) fail("realized g21 must be below 1");
    gs = g_star(params);
    d = entry_cutoff_d(params, g12);
    lambda = lambda_mix(params, g21);
    p0 = pi_zero(params);
    r1 = joint_rates(params, g21);
  }

  double entry_prob(double mu, int t) const {
    const double c = cutoff(d, t);
    if (mu < c) return 1.0;
    if (mu > c) return 0.0;
    return std::clamp(lambda, 0.0, 1.0);
  }

  // Primary's expected payoff from period t onward at belief mu, under the
  // equilibrium profile for the realized type.
  double value(int t, double mu) {
    if (t == 0) return 0.0;
    const auto key = std::make_pair(t, mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const double p_enter = entry_prob(mu, t);
    const double v_exit = p0 + value(t - 1, mu);
    double v_enter;
    if (g21 <= gs) {
      v_enter = r1.spread_rate +
                value(t - 1, after_spread(mu, t));
    } else if (t == 1) {
      v_enter = r1.share_rate;
    } else {
      const double gamma = gamma_mix(mu, d, t);
      const double v_sp =
          r1.spread_rate + value(t - 1, after_spread(mu, t));
      const double v_sh = r1.share_rate + value(t - 1, 0.0);
      v_enter = gamma * v_sp + (1.0 - gamma) * v_sh;
    }
    const double v = p_enter * v_enter + (1.0 - p_enter) * v_exit;
    memo.emplace(key, v);
    return v;
  }

  double after_spread(double mu, int t) const {
    return belief_update(mu, EntryAction::enter, SeqAction::spread, d, t - 1);
  }
};

}  // namespace

double primary_continuation_value(const GameParams& params, double g12,
                                  double g21, int t, double mu) {
  if (t < 0) fail("primary_continuation_value: period must be nonnegative");
  check_belief(mu);
  ReputationTree tree(params, g12, g21);
  return tree.value(t, mu);
}

DeviationSearch one_shot_deviation_search(const GameParams& params, double g12,
                                          double g21, double rho, int horizon) {
  if (horizon < 1) fail("one_shot_deviation_search: horizon must be >= 1");
  check_belief(rho);
  ReputationTree tree(params, g12, g21);

  // Reachable (period, belief) nodes under arbitrary play: exits keep the
  // belief, spreads lift it to the cutoff, shares zero it.
  std::set<std::pair<int, double>> nodes;
  std::vector<std::pair<int, double>> frontier = {{horizon, rho}};
  while (!frontier.empty()) {
    const auto [t, mu] = frontier.back();
    frontier.pop_back();
    if (!nodes.emplace(t, mu).second || t == 1) continue;
    frontier.push_back({t - 1, mu});
    frontier.push_back({t - 1, tree.after_spread(mu, t)});
    frontier.push_back({t - 1, 0.0});
  }

  DeviationSearch best;
  for (const auto& [t, mu] : nodes) {
    // Equilibrium value of the entry subgame at this node.
    double v_eq;
    const double v_sp = tree.r1.spread_rate + tree.value(t - 1, tree.after_spread(mu, t));
    const double v_sh = tree.r1.share_rate + tree.value(t - 1, 0.0);
    if (g21 <= tree.gs) {
      v_eq = v_sp;
    } else if (t == 1) {
      v_eq = v_sh;
    } else {
      const double gamma = gamma_mix(mu, tree.d, t);
      v_eq = gamma * v_sp + (1.0 - gamma) * v_sh;
    }
    const double improvement = std::max(v_sp, v_sh) - v_eq;
    if (improvement > best.max_improvement) {
      best.max_improvement = improvement;
      best.at_period = t;
      best.at_mu = mu;
    }
  }
  return best;
}

TwoPeriodSolution two_period_oracle(const GameParams& params, double g12,
                                    double g21,
                                    const GainDistribution& prior_g21) {
  params.validate();
  check_gain(g12, "g12");
  check_gain(g21, "g21");
  check_entry_premise(params);
  const double cost = params.power_cost_coeff * params.power_budget;
  const JointRates r1 = joint_rates(params, g21);
  const JointRates r2 = joint_rates(params, g12);
  const double p0 = pi_zero(params);
  const double gs = g_star(params);
  if (!(g12 > 0.5)) {
    fail("two_period_oracle: requires g12 > 1/2 (a share must be worth "
         "honoring)");
  }
  if (!(r2.spread_rate < cost)) {
    fail("two_period_oracle: requires entry against a spreader to lose money "
         "(otherwise nothing deters entry)");
  }
  if (!(g21 > gs) || !(g21 < 1.0)) {
    fail("two_period_oracle: requires a high-gain primary, g_star < g21 < 1");
  }
  const double rho = prior_g21.cdf(gs);
  if (!(rho > 0.0) || !(rho < 1.0)) {
    fail("two_period_oracle: prior must leave both primary types possible");
  }

  constexpr double kTol = 1e-13;
  constexpr double kTieTol = 1e-9;
  TwoPeriodSolution sol;

  // Final period: the secondary enters while the expected rate against the
  // belief-weighted reply covers the cost. Root located by bisection.
  auto last_period_value = [&](double mu) {
    return mu * (r2.spread_rate - cost) + (1.0 - mu) * (r2.share_rate - cost);
  };
  sol.entry_cutoff_last = bisect(last_period_value, {0.0, 1.0}, kTol).value;
  const double d_hat = sol.entry_cutoff_last;

  // Tie-entry probability from the high-gain primary's indifference between
  // spreading (reputation kept, entry probabilistic) and sharing (type
  // revealed, entry certain, share honored).
  auto entry_prob_last = [&](double mu, double lambda) {
    if (mu < d_hat - kTieTol) return 1.0;
    if (mu > d_hat + kTieTol) return 0.0;
    return std::clamp(lambda, 0.0, 1.0);
  };
  auto high_continuation = [&](double mu, double lambda) {
    const double p = entry_prob_last(mu, lambda);
    return p * r1.share_rate + (1.0 - p) * p0;
  };
  auto indifference = [&](double lambda) {
    const double after_spread = r1.spread_rate + high_continuation(d_hat, lambda);
    const double after_share = r1.share_rate + high_continuation(0.0, lambda);
    return after_spread - after_share;
  };
  sol.lambda = bisect(indifference, {0.0, 1.0}, kTol).value;

  // First-period mixing: the spread probability that lifts the posterior
  // exactly to the final-period cutoff.
  auto posterior_after_spread = [&](double initial, double gamma) {
    return initial / (initial + (1.0 - initial) * gamma);
  };
  auto gamma_for = [&](double initial) {
    auto eqn = [&](double gamma) {
      return posterior_after_spread(initial, gamma) - d_hat;
    };
    return bisect(eqn, {0.0, 1.0}, kTol).value;
  };

  if (rho >= d_hat) {
    // Reputation already sufficient: spreading keeps the secondary out and no
    // mixing is needed.
    sol.high_gain_spreads_first = true;
    sol.gamma = 1.0;
  } else {
    sol.gamma = gamma_for(rho);
  }

  // First-period entry: expected current rate under the equilibrium mixing at
  // a hypothetical initial belief. The cutoff is its sign change.
  auto first_period_value = [&](double initial) {
    const double gamma =
        initial >= d_hat ? 1.0 : gamma_for(initial);
    const double q = initial + (1.0 - initial) * gamma;
    return q * (r2.spread_rate - cost) + (1.0 - q) * (r2.share_rate - cost);
  };
  sol.entry_cutoff_first =
      bisect(first_period_value, {1e-12, d_hat * (1.0 - 1e-12)}, kTol).value;
  sol.secondary_enters_first = first_period_value(rho) > 0.0;

  // --- One-shot deviation audit over the whole two-period tree. ---
  double worst_primary = 0.0;
  {
    // High-gain primary, first period.
    const double gamma_play = rho >= d_hat ? 1.0 : sol.gamma;
    const double mu_after_spread = posterior_after_spread(rho, gamma_play);
    const double v_sp =
        r1.spread_rate + high_continuation(mu_after_spread, sol.lambda);
    const double v_sh = r1.share_rate + high_continuation(0.0, sol.lambda);
    const double v_eq = rho >= d_hat
                            ? v_sp
                            : gamma_play * v_sp + (1.0 - gamma_play) * v_sh;
    worst_primary = std::max(worst_primary, std::max(v_sp, v_sh) - v_eq);
    // High-gain primary, final period: sharing must dominate at every
    // reachable belief (payoffs are belief-free there).
    worst_primary =
        std::max(worst_primary, r1.spread_rate - r1.share_rate);
  }
  {
    // Low-gain primary at a representative low gain: always spreads.
    const JointRates rl = joint_rates(params, gs / 2.0);
    auto low_continuation = [&](double mu) {
      const double p = entry_prob_last(mu, sol.lambda);
      return p * rl.spread_rate + (1.0 - p) * p0;
    };
    const double gamma_play = rho >= d_hat ? 1.0 : sol.gamma;
    const double mu_after_spread = posterior_after_spread(rho, gamma_play);
    const double v_sp = rl.spread_rate + low_continuation(mu_after_spread);
    const double v_sh = rl.share_rate + low_continuation(0.0);
    worst_primary = std::max(worst_primary, v_sh - v_sp);
    worst_primary = std::max(worst_primary, rl.share_rate - rl.spread_rate);
  }
  sol.max_primary_deviation = worst_primary;

  double worst_secondary = 0.0;
  {
    // First period at the actual prior.
    const double value_first = first_period_value(rho);
    worst_secondary = sol.secondary_enters_first
                          ? std::max(worst_secondary, -value_first)
                          : std::max(worst_secondary, value_first);
    // Final period at every reachable belief: after an exit (prior kept),
    // after a spread (cutoff or pooled prior), after a share (zero).
    const double gamma_play = rho >= d_hat ? 1.0 : sol.gamma;
    for (double mu : {rho, posterior_after_spread(rho, gamma_play), 0.0}) {
      const double value_last = last_period_value(mu);
      if (mu < d_hat - kTieTol) {
        worst_secondary = std::max(worst_secondary, -value_last);
      } else if (mu > d_hat + kTieTol) {
        worst_secondary = std::max(worst_secondary, value_last);
      } else {
        worst_secondary = std::max(worst_secondary, std::abs(value_last));
      }
    }
  }
  sol.max_secondary_deviation = worst_secondary;
  return sol;
}

}  // namespace igames
