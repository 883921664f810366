// Simultaneous-move solvers: expected-payoff first-order conditions and best
// responses when neither user observes any gain, best-response dynamics, and
// verification of symmetric equilibria of the restricted-action game where
// each user knows only its own channel pair.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "igames/core_model.hpp"
#include "igames/gain_distributions.hpp"

namespace igames {

// Independent priors on one player's own gain and on the cross gain incident
// on its receiver.
struct PlayerPriors {
  GainDistribution self;
  GainDistribution incident;
};

struct UcgiPriors {
  PlayerPriors player1;
  PlayerPriors player2;
};

// Expected marginal value (up to a positive constant) of shifting power into
// subchannel 1 for `player`, at first-subchannel powers (p1_ch1, p2_ch1).
// Zero at the optimum; strictly decreasing in the player's own power.
// Two subchannels only.
double ucgi_foc_residual(const GameParams& params, const UcgiPriors& priors,
                         double p1_ch1, double p2_ch1, int player = 1,
                         const ExpectationMethod& method = Quadrature{});

// Maximizer of the expected rate over own subchannel-1 power in [0, P] with
// the opponent's split held fixed. Two subchannels only.
double ucgi_best_response(const GameParams& params, const UcgiPriors& priors,
                          int player, double opponent_ch1, double tol = 1e-12,
                          const ExpectationMethod& method = Quadrature{});

enum class UpdateRule { simultaneous, alternating };

struct BrStep {
  int iteration = 0;  // 0 is the initial point
  double p1_ch1 = 0.0, p1_ch2 = 0.0, p2_ch1 = 0.0, p2_ch2 = 0.0;
};

struct BrTrajectory {
  std::vector<BrStep> steps;
  bool converged = false;
  double gap_to_symmetric = 0.0;  // max |p - P/2| at the final step
};

// Iterated best responses from initial subchannel-1 powers (init1, init2).
// Simultaneous updates by default; `alternating` recomputes player 2 against
// player 1's fresh reply within the same iteration.
BrTrajectory ucgi_br_dynamics(const GameParams& params, const UcgiPriors& priors,
                              double init1_ch1, double init2_ch1,
                              int max_iter = 100, double tol = 1e-8,
                              UpdateRule rule = UpdateRule::simultaneous,
                              const ExpectationMethod& method = Quadrature{});

// The unique symmetric equilibrium when no gains are observed: spread the
// budget evenly over all subchannels.
PowerAllocation ucgi_symmetric_ne(const GameParams& params);

// Opponent mixture over restricted actions.
struct MixedRestrictedStrategy {
  std::vector<double> concentrate;  // probability of concentrating in k+1
  double spread = 0.0;

  void validate() const;  // entries in [0,1], total 1 within 1e-12
};

// Rate advantage of a clear subchannel over one hit by the opponent's full
// power; scales the payoff gap between concentrate actions.
double bgi_delta(const GameParams& params, double self_gain,
                 double incident_gain);

// Expected rate of each restricted action against an opponent mixture;
// result[k] = concentrate in subchannel k+1 (k < K), result[K] = spread.
std::vector<double> bgi_expected_payoffs(const GameParams& params,
                                         double self_gain, double incident_gain,
                                         const MixedRestrictedStrategy& opponent);

using RestrictedStrategyFn =
    std::function<RestrictedAction(double self_gain, double incident_gain)>;

struct BgiDeviation {
  double self_gain = 0.0, incident_gain = 0.0;
  RestrictedAction played, better;
  double improvement = 0.0;
};

struct BgiVerification {
  bool verified = false;
  MixedRestrictedStrategy induced;  // empirical mixture the candidate induces
  std::optional<BgiDeviation> counterexample;
};

// Samples types from the priors, estimates the action mixture the candidate
// strategy induces, and searches sampled types for a restricted action that
// beats the candidate's choice by more than 1e-9.
BgiVerification bgi_verify_symmetric_bne(const GameParams& params,
                                         const RestrictedStrategyFn& candidate,
                                         const PlayerPriors& priors,
                                         int n_check = 1000, RngSeed seed = {});

}  // namespace igames
