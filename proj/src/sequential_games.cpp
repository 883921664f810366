#include "igames/sequential_games.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace igames {

namespace {

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

// Half-band rate net of power cost must be positive for entry to ever pay.
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

}  // namespace

double g_star(const GameParams& params) {
  params.validate();
  const double snr = params.power_budget / params.noise_density;
  // 1/(sqrt(1+snr)-1) - 2/snr, rationalized to avoid cancellation at small snr.
  return (std::sqrt(1.0 + snr) - 1.0) / snr;
}

SeqAction secondary_best_response(SeqAction primary_action, double g12) {
  check_gain(g12, "g12");
  if (primary_action == SeqAction::spread) return SeqAction::spread;
  // Honoring a share pays only when the secondary's own interference gain is
  // high enough; at the tie it spreads.
  return g12 > 0.5 ? SeqAction::share : SeqAction::spread;
}

SbgiEquilibrium sbgi_equilibrium(const GameParams& params, double g12,
                                 double g21) {
  params.validate();
  check_gain(g12, "g12");
  check_gain(g21, "g21");
  SbgiEquilibrium eq;
  const JointRates primary = joint_rates(params, g21);
  const JointRates secondary = joint_rates(params, g12);
  if (g12 > 0.5 && g21 > g_star(params)) {
    eq.primary_action = SeqAction::share;
    eq.secondary_action = SeqAction::share;
    eq.primary_payoff = primary.share_rate;
    eq.secondary_payoff = secondary.share_rate;
  } else {
    eq.primary_action = SeqAction::spread;
    eq.secondary_action = SeqAction::spread;
    eq.primary_payoff = primary.spread_rate;
    eq.secondary_payoff = secondary.spread_rate;
  }
  return eq;
}

double g12_tilde(const GameParams& params) {
  params.validate();
  const double cost = params.power_cost_coeff * params.power_budget;
  if (cost == 0.0) return std::numeric_limits<double>::infinity();
  const double denom = std::exp2(cost) - 1.0;
  return 1.0 / denom - 2.0 * params.noise_density / params.power_budget;
}

double entry_cutoff_d(const GameParams& params, double g12) {
  params.validate();
  check_gain(g12, "g12");
  check_entry_premise(params);
  const JointRates r = joint_rates(params, g12);
  const double cost = params.power_cost_coeff * params.power_budget;
  const double denom = r.share_rate - r.spread_rate;
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "entry cutoff undefined: spreading out-earns sharing at g12 = "
        << g12;
    fail(msg.str());
  }
  return (r.share_rate - cost) / denom;
}

SbgiEEquilibrium sbgie_equilibrium(const GameParams& params, double g12,
                                   double g21,
                                   const GainDistribution& prior_g21) {
  params.validate();
  check_gain(g12, "g12");
  check_gain(g21, "g21");
  check_entry_premise(params);

  const JointRates r2 = joint_rates(params, g12);
  const double cost = params.power_cost_coeff * params.power_budget;
  SbgiEEquilibrium eq;
  if (g12 > 0.5) {
    // Post-entry play depends on the primary's unobserved gain: it spreads
    // with the prior probability of falling at or below the threshold.
    const double rho = prior_g21.cdf(g_star(params));
    eq.entry_value = rho * r2.spread_rate + (1.0 - rho) * r2.share_rate - cost;
  } else {
    // The secondary would spread after entry no matter what, so the primary
    // spreads too and the entry value carries no uncertainty.
    eq.entry_value = r2.spread_rate - cost;
  }
  if (eq.entry_value > 0.0) {
    eq.entry = EntryAction::enter;
    eq.post_entry = sbgi_equilibrium(params, g12, g21);
    eq.secondary_payoff = eq.post_entry->secondary_payoff - cost;
  } else {
    eq.entry = EntryAction::stay_out;
    eq.secondary_payoff = 0.0;
  }
  return eq;
}

}  // namespace igames
