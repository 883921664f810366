// Entry game where each user knows only the cross gain into its own receiver:
// the primary's spread/share threshold given its belief about the secondary's
// reply, the secondary's entry threshold given its belief that the primary
// spreads, the Bayes posterior those thresholds induce, and the joint fixed
// point tying them together.
#pragma once

#include <vector>

#include "igames/core_model.hpp"
#include "igames/gain_distributions.hpp"
#include "igames/numerics.hpp"

namespace igames {

struct PrimaryExpectedPayoffs {
  double spread_payoff = 0.0;  // both users spread
  double share_payoff = 0.0;   // share offered, reply uncertain
};

// kappa = primary's belief that the secondary's gain is below 1/2, i.e. that
// a share offer would be answered by spreading.
PrimaryExpectedPayoffs primary_payoffs(const GameParams& params, double g21,
                                       double kappa);

// Spread minus expected share payoff for the primary; strictly decreasing in
// g21 and increasing in kappa.
double spread_share_gap(const GameParams& params, double g21, double kappa);

// Gain below which the primary spreads: the unique zero of the gap, found by
// doubling bracket expansion from [0, 1]. +inf when spreading dominates at
// every gain (kappa = 1).
double g21_hat(const GameParams& params, double kappa, double tol = 1e-12);

// Secondary's expected rate upon entry given probability alpha that the
// primary spreads. Piecewise across g12 = 1/2 (where a failed share bid stops
// hurting the secondary) but continuous there, and strictly decreasing for
// alpha > 0.
double entry_rate(const GameParams& params, double g12, double alpha);

// Gain below which entering covers the power cost: root of
// entry_rate = k * P. Sentinels: 0 when no gain covers the cost, +inf when
// every gain does. Requires alpha > 0.
double g12_hat(const GameParams& params, double alpha, double tol = 1e-12);

// P(g12 < 1/2 | entry), i.e. prior mass below min(1/2, threshold) renormalized
// to the entering set. When entry has prior probability zero the posterior is
// off the equilibrium path and keeps the prior P(g12 < 1/2).
double kappa_posterior(const GainDistribution& prior_g12, double threshold);

struct TwoSidedEquilibrium {
  double kappa_hat = 0.0;  // primary's post-entry belief that g12 < 1/2
  double g21_hat = 0.0;    // primary spreads below this gain (may be +inf)
  double alpha = 0.0;      // induced probability that the primary spreads
  double g12_hat = 0.0;    // secondary enters below this gain (0 or +inf possible)
  bool off_path_entry = false;  // entry never occurs; kappa_hat kept at prior
  SolveReport report;
};

// Damped fixed-point iteration on kappa, started from the prior P(g12 < 1/2).
// The map need not be a contraction; the report says which fixed point was
// reached, and two_sided_candidates lists the alternatives.
TwoSidedEquilibrium solve_two_sided(const GameParams& params,
                                    const GainDistribution& prior_g12,
                                    const GainDistribution& prior_g21,
                                    double damping = 0.5, double tol = 1e-10,
                                    int max_iter = 200);

// Scans kappa over a uniform grid, brackets sign changes of
// posterior(kappa) - kappa, and refines each by bisection. Fixed points at
// which the map jumps (no sign change) are caught by the endpoints check.
std::vector<double> two_sided_candidates(const GameParams& params,
                                         const GainDistribution& prior_g12,
                                         const GainDistribution& prior_g21,
                                         int grid_points = 200);

}  // namespace igames
