// Core interference-channel model shared by every solver: game parameters,
// realized channel gains, per-subchannel power allocations, Shannon-rate
// payoffs, and the restricted concentrate/spread action vocabulary.
#pragma once

#include <optional>
#include <vector>

namespace igames {

// Exogenous scalars of the two-user game. Rates are in bits (base-2 logs)
// per channel use throughout the library.
struct GameParams {
  double power_budget = 1.0;      // P: total transmit power per user
  double noise_density = 0.01;    // N0: noise power in each subchannel
  int subchannels = 2;            // K: number of flat subchannels
  double power_cost_coeff = 0.0;  // k: secondary's cost per unit of power spent

  void validate() const;  // throws std::invalid_argument with the failing field
};

// Power gains g_ij from transmitter i to receiver j.
struct ChannelGains {
  double g11 = 1.0;
  double g12 = 1.0;
  double g21 = 1.0;
  double g22 = 1.0;

  void validate() const;
  double self(int player) const;      // g_ii
  double incident(int player) const;  // cross gain into this player's receiver
};

// Per-subchannel transmit powers for one user.
struct PowerAllocation {
  std::vector<double> per_subchannel;

  double total() const;
};

// Feasibility: K entries, all nonnegative, total within a small relative
// slack of the power budget or below it. Throws std::invalid_argument.
void validate_allocation(const PowerAllocation& alloc, const GameParams& params);

// Restricted action: put everything into one subchannel, or spread evenly.
struct RestrictedAction {
  int index = 0;  // 1..K = concentrate in that subchannel, 0 = spread

  static RestrictedAction spread() { return {0}; }
  static RestrictedAction concentrate(int k) { return {k}; }
  bool is_spread() const { return index == 0; }
  bool operator==(const RestrictedAction&) const = default;
};

PowerAllocation to_allocation(RestrictedAction action, const GameParams& params);

// Move vocabulary for the primary/secondary sequential games.
enum class SeqAction { share, spread };
enum class EntryAction { enter, stay_out };

const char* to_label(SeqAction a);    // "SH" / "SP"
const char* to_label(EntryAction a);  // "N" / "X"

// Achievable sum rate for `player` (1 or 2): each subchannel contributes
// (1/2) log2(1 + g_ii p_k / (N0 + g_ji q_k)) where q is the *opponent's*
// allocation; interference at a receiver comes from the other transmitter.
double payoff(const GameParams& params, const ChannelGains& gains,
              const PowerAllocation& own, const PowerAllocation& other,
              int player);

// Rates under the two symmetric profiles of the sequential games, with self
// gains normalized to 1: share = half the band exclusively, spread = full
// band at half power against an interfering spreader with gain `incident`.
struct JointRates {
  double share_rate = 0.0;
  double spread_rate = 0.0;
};

JointRates joint_rates(const GameParams& params, double incident_gain);
JointRates joint_rates(const GameParams& params, const ChannelGains& gains,
                       int player);

}  // namespace igames
