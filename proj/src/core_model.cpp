#include "igames/core_model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace igames {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_player(int player) {
  if (player != 1 && player != 2) {
    fail("player index must be 1 or 2");
  }
}

}  // namespace

void GameParams::validate() const {
  if (!(power_budget > 0.0) || !std::isfinite(power_budget)) {
    fail("power_budget must be positive and finite");
  }
  if (!(noise_density > 0.0) || !std::isfinite(noise_density)) {
    fail("noise_density must be positive and finite");
  }
  if (subchannels < 1) {
    fail("subchannels must be at least 1");
  }
  if (power_cost_coeff < 0.0 || !std::isfinite(power_cost_coeff)) {
    fail("power_cost_coeff must be nonnegative and finite");
  }
}

void ChannelGains::validate() const {
  for (double g : {g11, g12, g21, g22}) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      fail("channel gains must be nonnegative and finite");
    }
  }
}

double ChannelGains::self(int player) const {
  check_player(player);
  return player == 1 ? g11 : g22;
}

double ChannelGains::incident(int player) const {
  check_player(player);
  return player == 1 ? g21 : g12;
}

double PowerAllocation::total() const {
  return std::accumulate(per_subchannel.begin(), per_subchannel.end(), 0.0);
}

void validate_allocation(const PowerAllocation& alloc, const GameParams& params) {
  params.validate();
  if (static_cast<int>(alloc.per_subchannel.size()) != params.subchannels) {
    std::ostringstream msg;
    msg << "allocation has " << alloc.per_subchannel.size()
        << " subchannels, expected " << params.subchannels;
    fail(msg.str());
  }
  for (double p : alloc.per_subchannel) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      fail("allocation entries must be nonnegative and finite");
    }
  }
  const double slack = 1e-9 * params.power_budget;
  if (alloc.total() > params.power_budget + slack) {
    std::ostringstream msg;
    msg << "allocation total " << alloc.total() << " exceeds power budget "
        << params.power_budget;
    fail(msg.str());
  }
}

PowerAllocation to_allocation(RestrictedAction action, const GameParams& params) {
  params.validate();
  const int K = params.subchannels;
  if (action.index < 0 || action.index > K) {
    fail("restricted action index out of range");
  }
  PowerAllocation alloc;
  if (action.is_spread()) {
    alloc.per_subchannel.assign(K, params.power_budget / K);
  } else {
    alloc.per_subchannel.assign(K, 0.0);
    alloc.per_subchannel[action.index - 1] = params.power_budget;
  }
  return alloc;
}

const char* to_label(SeqAction a) {
  return a == SeqAction::share ? "SH" : "SP";
}

const char* to_label(EntryAction a) {
  return a == EntryAction::enter ? "N" : "X";
}

double payoff(const GameParams& params, const ChannelGains& gains,
              const PowerAllocation& own, const PowerAllocation& other,
              int player) {
  check_player(player);
  gains.validate();
  validate_allocation(own, params);
  validate_allocation(other, params);
  const double g_self = gains.self(player);
  const double g_cross = gains.incident(player);
  double rate = 0.0;
  for (int k = 0; k < params.subchannels; ++k) {
    const double interference = g_cross * other.per_subchannel[k];
    const double snr =
        g_self * own.per_subchannel[k] / (params.noise_density + interference);
    rate += 0.5 * std::log2(1.0 + snr);
  }
  return rate;
}

JointRates joint_rates(const GameParams& params, double incident_gain) {
  params.validate();
  if (!(incident_gain >= 0.0) || !std::isfinite(incident_gain)) {
    fail("incident gain must be nonnegative and finite");
  }
  const double P = params.power_budget;
  const double N0 = params.noise_density;
  JointRates r;
  r.share_rate = 0.5 * std::log2(1.0 + P / N0);
  r.spread_rate =
      std::log2(1.0 + (P / 2.0) / (N0 + incident_gain * P / 2.0));
  return r;
}

JointRates joint_rates(const GameParams& params, const ChannelGains& gains,
                       int player) {
  return joint_rates(params, gains.incident(player));
}

}  // namespace igames
