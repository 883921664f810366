// One-shot sequential play between an incumbent primary and an entrant
// secondary: closed-form gain thresholds, the entry cutoff on the primary's
// spreading probability, and the resulting equilibrium actions and payoffs.
// Self gains are fixed at 1 throughout this module; only the two cross gains
// enter the rates.
#pragma once

#include <optional>

#include "igames/core_model.hpp"
#include "igames/gain_distributions.hpp"

namespace igames {

// Cross-gain threshold below which the primary prefers mutual spreading over
// mutual sharing. Always below 1/2 and strictly decreasing in P/N0.
double g_star(const GameParams& params);

// Secondary's rate-maximizing reply to the primary's committed action.
// Against a share, ties at g12 = 1/2 resolve toward spreading.
SeqAction secondary_best_response(SeqAction primary_action, double g12);

struct SbgiEquilibrium {
  SeqAction primary_action = SeqAction::spread;
  SeqAction secondary_action = SeqAction::spread;
  double primary_payoff = 0.0;    // rates only; no power cost in this game
  double secondary_payoff = 0.0;
};

// Subgame-perfect outcome when both users transmit: sharing emerges exactly
// when the secondary would honor it (g12 > 1/2) and the primary prefers it
// (g21 > g_star); ties resolve toward spreading.
SbgiEquilibrium sbgi_equilibrium(const GameParams& params, double g12,
                                 double g21);

// Secondary gain threshold below which spreading against a spreading primary
// still clears the power cost; +inf when the cost is zero.
double g12_tilde(const GameParams& params);

// Entry cutoff d: with entry cost, the secondary enters iff its belief that
// the primary spreads stays below d. Requires the half-band rate to exceed
// the power cost (the entry premise); equals 1 when the full-interference
// rate exactly meets the cost, and exceeds 1 below that.
double entry_cutoff_d(const GameParams& params, double g12);

struct SbgiEEquilibrium {
  EntryAction entry = EntryAction::stay_out;
  std::optional<SbgiEquilibrium> post_entry;  // present iff entry
  double entry_value = 0.0;      // expected payoff of entering, net of cost
  double secondary_payoff = 0.0; // realized payoff (0 when staying out)
};

// Entry stage against an unobserved primary gain drawn from prior_g21,
// followed by the post-entry sequential game at the realized gains. Ties at
// the entry threshold resolve toward staying out.
SbgiEEquilibrium sbgie_equilibrium(const GameParams& params, double g12,
                                   double g21,
                                   const GainDistribution& prior_g21);

}  // namespace igames
