// Finitely repeated entry game with an unobserved primary gain: entry cutoffs
// d^t on the secondary's belief, the closed-form belief update, the mixing
// probabilities sustaining the reputation equilibrium, trace simulation,
// expected continuation values with a one-shot deviation search, and an
// independent two-period backward-induction solver for cross-validation.
//
// Periods are indexed in reverse: play starts at t = T and ends at t = 1, so
// cutoffs d^t depend only on the number of periods left.
#pragma once

#include <optional>
#include <vector>

#include "igames/core_model.hpp"
#include "igames/gain_distributions.hpp"
#include "igames/sequential_games.hpp"

namespace igames {

struct RepeatedConfig {
  int horizon = 1;  // T
  GameParams params;
  double g12 = 0.0;  // secondary's realized cross gain, fixed across periods
  double g21 = 0.0;  // primary's realized cross gain
  GainDistribution prior_g21;  // secondary's prior over the primary's gain
  RngSeed seed;

  void validate() const;
};

// Primary's rate with the whole band to itself (secondary stayed out).
double pi_zero(const GameParams& params);

// Tie-entry probability keeping a high-gain primary indifferent between
// spreading and sharing one period earlier. Defined for g21 < 1 (beyond that
// solo rate no longer beats spread-then-exclusivity); lands in (0, 1) when
// additionally g21 > g_star.
double lambda_mix(const GameParams& params, double g21);

// Probability that a high-gain primary spreads in period t > 1 at belief mu:
// 1 once mu reaches the next cutoff d^(t-1), 0 at mu = 0, and in between the
// value that lifts the posterior after a spread exactly to d^(t-1).
double gamma_mix(double mu, double d, int t);

// Belief (probability of a low, spread-committed gain) entering period t,
// given the previous period's outcome. Staying out reveals nothing, a spread
// lifts the posterior to the cutoff d^t (never lowers it), a share reveals a
// high gain for good.
double belief_update(double mu_prev, EntryAction entry,
                     std::optional<SeqAction> primary_action, double d, int t);

// Secondary enters iff mu < d^t; at the exact tie it enters with probability
// lambda, resolved by the supplied uniform draw.
EntryAction secondary_entry(double mu, double d, int t, double lambda,
                            double draw);

// Primary's reply upon entry in period t: low gains always spread; high gains
// share in the last period and otherwise spread with gamma_mix probability,
// resolved by the supplied uniform draw.
SeqAction primary_response(double g21, double g_star_value, double mu, double d,
                           int t, double draw);

struct PeriodOutcome {
  int t_reverse = 0;  // T down to 1
  int t_forward = 0;  // 1 up to T
  EntryAction entry = EntryAction::stay_out;
  std::optional<SeqAction> primary_action;  // absent when staying out
  double mu_before = 0.0;
  double mu_after = 0.0;
  double primary_payoff = 0.0;
  double secondary_payoff = 0.0;
  // Uniform draws consumed this period, recorded for replay; the action draw
  // is NaN when no entry happened.
  double entry_draw = 0.0;
  double action_draw = 0.0;
};

struct SimulationTrace {
  std::vector<PeriodOutcome> periods;  // ordered by t_reverse descending
  bool reputation_regime = false;  // entry deterrence active (else static play)
  double rho = 0.0;                // initial belief, prior mass at or below g_star
  double d = 0.0;                  // entry cutoff base (NaN when undefined)
  double t_star = 0.0;             // deterrence horizon (NaN when degenerate)
  int deterrence_count = 0;        // leading stay-out periods before first entry
  int first_entry_t = 0;           // reverse index of the first entry, 0 if none
  double primary_total = 0.0;
  double secondary_total = 0.0;
  double equilibrium_welfare = 0.0;  // primary_total + secondary_total
  double benchmark_welfare = 0.0;    // both transmit every period, one-shot play
  double efficiency_ratio = 0.0;     // equilibrium / benchmark
};

// Plays the horizon-T game under the reputation equilibrium when the cost and
// g12 make deterrence possible (g12 above both 1/2 and the entry-for-free
// threshold); otherwise repeats the static entry equilibrium every period.
SimulationTrace simulate(const RepeatedConfig& config);

// Number of periods entry stays deterred when the belief starts at rho:
// log(rho) / log(d). Requires rho and d strictly inside (0, 1).
double deterrence_horizon(double rho, double d);

// Expected total payoff of the primary from period t to the end at belief mu,
// under the equilibrium profile, for the realized g21 (either type).
double primary_continuation_value(const GameParams& params, double g12,
                                  double g21, int t, double mu);

struct DeviationSearch {
  double max_improvement = 0.0;
  int at_period = 0;
  double at_mu = 0.0;
};

// Evaluates every reachable decision node of the horizon-T game and compares
// the primary's equilibrium continuation value against both one-shot
// deviations (play the other action once, then revert). Exhaustive for small
// horizons; the node set grows with T^2.
DeviationSearch one_shot_deviation_search(const GameParams& params, double g12,
                                          double g21, double rho, int horizon);

struct TwoPeriodSolution {
  double entry_cutoff_last = 0.0;   // belief cutoff in the final period
  double entry_cutoff_first = 0.0;  // initial-belief cutoff for first-period entry
  double lambda = 0.0;  // tie-entry probability from the indifference condition
  double gamma = 0.0;   // high-gain spread probability in the first period
  bool high_gain_spreads_first = false;  // certainty case (initial belief at/above cutoff)
  bool secondary_enters_first = false;
  double max_primary_deviation = 0.0;
  double max_secondary_deviation = 0.0;
};

// Solves the T = 2 game by backward induction without using the closed forms
// above: cutoffs and mixing probabilities are recovered by bisection on the
// payoff indifference and Bayes-consistency conditions, then every one-shot
// deviation of either player is checked by direct comparison.
TwoPeriodSolution two_period_oracle(const GameParams& params, double g12,
                                    double g21,
                                    const GainDistribution& prior_g21);

}  // namespace igames
