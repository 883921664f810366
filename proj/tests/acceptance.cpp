// End-to-end acceptance checks: one pass/fail line per criterion, nonzero
// exit when any fails. Tolerances are pinned here on purpose.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "igames/io.hpp"
#include "igames/numerics.hpp"
#include "igames/repeated_game.hpp"
#include "igames/scenario.hpp"
#include "igames/sequential_games.hpp"
#include "igames/static_games.hpp"
#include "igames/two_sided.hpp"

using namespace igames;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string num(double x) { return format_double(x); }

const GameParams kBase{1.0, 0.01, 2, 0.0};
const GameParams kCost2{1.0, 0.01, 2, 2.0};

RepeatedConfig reputation_config(int horizon, std::uint64_t seed,
                                 const GainDistribution& prior) {
  RepeatedConfig c;
  c.horizon = horizon;
  c.params = kCost2;
  c.g12 = 0.6;
  c.g21 = 0.5;
  c.prior_g21 = prior;
  c.seed = {seed};
  return c;
}

// ---------------------------------------------------------------- criterion 1
void best_response_convergence(Criterion& c) {
  const UcgiPriors priors{
      {GainDistribution::point_mass(1.0), GainDistribution::uniform(0.0, 1.0)},
      {GainDistribution::point_mass(1.0), GainDistribution::uniform(0.0, 1.0)}};
  const auto start = std::chrono::steady_clock::now();
  const auto traj = ucgi_br_dynamics(kBase, priors, 1.0, 0.0, 100, 1e-8);
  const auto mirror = ucgi_br_dynamics(kBase, priors, 0.0, 1.0, 100, 1e-8);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  c.expect(traj.converged, "dynamics did not converge");
  c.expect(static_cast<int>(traj.steps.size()) <= 101,
           "took more than 100 iterations");
  if (!traj.steps.empty()) {
    const BrStep& last = traj.steps.back();
    for (double p : {last.p1_ch1, last.p1_ch2, last.p2_ch1, last.p2_ch2}) {
      c.expect(std::abs(p - 0.5) <= 1e-6,
               "final power " + num(p) + " is not the even split");
    }
  }
  c.expect(traj.steps.size() == mirror.steps.size(),
           "mirrored run has a different length");
  for (std::size_t i = 0;
       i < traj.steps.size() && i < mirror.steps.size(); ++i) {
    if (traj.steps[i].p1_ch1 != mirror.steps[i].p2_ch1 ||
        traj.steps[i].p2_ch1 != mirror.steps[i].p1_ch1) {
      c.expect(false, "trajectories are not mirror images at step " +
                          std::to_string(i));
      break;
    }
  }
  c.expect(seconds < 10.0,
           "dynamics took " + num(seconds) + " s (budget 10 s)");
}

// ---------------------------------------------------------------- criterion 2
void first_order_conditions(Criterion& c) {
  const std::vector<PlayerPriors> families = {
      {GainDistribution::point_mass(1.0), GainDistribution::uniform(0.0, 1.0)},
      {GainDistribution::uniform(0.5, 1.5), GainDistribution::uniform(0.0, 1.0)},
      {GainDistribution::truncated_exponential(2.0, 0.0, 2.0),
       GainDistribution::uniform(0.0, 0.7)},
      {GainDistribution::discrete({0.8, 1.2}, {0.5, 0.5}),
       GainDistribution::point_mass(0.5)},
      {GainDistribution::uniform(0.8, 1.2),
       GainDistribution::truncated_exponential(1.0, 0.0, 1.5)}};
  for (std::size_t i = 0; i < families.size(); ++i) {
    const UcgiPriors priors{families[i], families[i]};
    const double r = ucgi_foc_residual(kBase, priors, 0.5, 0.5);
    c.expect(std::abs(r) < 1e-8, "family " + std::to_string(i) +
                                     ": residual at the even split is " +
                                     num(r));
  }
  // Forced-sign points: both users on the same side of the even split.
  const UcgiPriors priors{families[0], families[0]};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const bool high = i % 2 == 0;
    const double lo = high ? 0.55 : 0.05;
    const double p1 = lo + 0.4 * unit(rng);
    const double p2 = lo + 0.4 * unit(rng);
    const double r = ucgi_foc_residual(kBase, priors, p1, p2);
    c.expect(high ? r < 0.0 : r > 0.0,
             "residual sign not forced at (" + num(p1) + ", " + num(p2) + ")");
  }
}

// ---------------------------------------------------------------- criterion 3
void restricted_game_identity(Criterion& c) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    GameParams params = kBase;
    params.subchannels = 2 + static_cast<int>(unit(rng) * 3.0);
    const int K = params.subchannels;
    MixedRestrictedStrategy opp;
    opp.concentrate.resize(K);
    double total = 0.0;
    for (double& a : opp.concentrate) total += (a = unit(rng));
    const double spread_w = unit(rng);
    total += spread_w;
    for (double& a : opp.concentrate) a /= total;
    opp.spread = spread_w / total;
    const double self = 0.2 + unit(rng);
    const double inc = 0.1 + unit(rng);
    const auto pay = bgi_expected_payoffs(params, self, inc, opp);
    const double delta = bgi_delta(params, self, inc);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        const double gap = std::abs(
            (pay[k] - pay[j]) - delta * (opp.concentrate[j] - opp.concentrate[k]));
        worst = std::max(worst, gap);
      }
    }
  }
  c.expect(worst <= 1e-12,
           "payoff-difference identity off by " + num(worst));

  const PlayerPriors priors{GainDistribution::uniform(0.5, 1.5),
                            GainDistribution::uniform(0.0, 1.0)};
  const auto ok = bgi_verify_symmetric_bne(
      kBase, [](double, double) { return RestrictedAction::spread(); }, priors,
      1000, {4});
  c.expect(ok.verified, "all-spread rule was rejected");
  const auto bad = bgi_verify_symmetric_bne(
      kBase, [](double, double) { return RestrictedAction::concentrate(1); },
      priors, 1000, {4});
  c.expect(!bad.verified, "all-concentrate rule was accepted");
  c.expect(bad.counterexample.has_value() &&
               bad.counterexample->improvement > 0.0,
           "rejection carries no witness");
}

// ---------------------------------------------------------------- criterion 4
void threshold_suite(Criterion& c) {
  double prev = 1.0;
  for (double snr = 1e-6; snr <= 1e6 * 1.0001; snr *= 10.0) {
    const double g = g_star({snr, 1.0, 2, 0.0});
    c.expect(g < prev, "threshold not decreasing at snr " + num(snr));
    c.expect(g < 0.5, "threshold reached one half at snr " + num(snr));
    prev = g;
  }
  c.expect(g_star({1e6, 1.0, 2, 0.0}) < 1e-3, "high-snr limit missed");
  c.expect(std::abs(g_star({1e-6, 1.0, 2, 0.0}) - 0.5) < 1e-3,
           "low-snr limit missed");

  const double n0 = 0.01;
  const double critical = 1.0 / (2.0 * n0 * std::numbers::ln2);
  const double low = g12_tilde({1e-6, n0, 2, 10.0});
  const double high = g12_tilde({1e-6, n0, 2, 150.0});
  const double knife = g12_tilde({1e-6, n0, 2, critical});
  c.expect(low > 10.0, "small-cost regime not strongly positive: " + num(low));
  c.expect(high < -10.0,
           "large-cost regime not strongly negative: " + num(high));
  c.expect(std::abs(knife + 0.5) <= 1e-3,
           "knife-edge regime is " + num(knife) + ", expected about -0.5");
}

// ---------------------------------------------------------------- criterion 5
void sequential_outcomes(Criterion& c) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double gs = g_star(kBase);
  bool actions_match = true;
  bool rule_match = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const double g12 = unit(rng), g21 = unit(rng);
    const auto eq = sbgi_equilibrium(kBase, g12, g21);
    actions_match =
        actions_match && eq.primary_action == eq.secondary_action;
    const bool share = g12 > 0.5 && g21 > gs;
    rule_match = rule_match &&
                 eq.primary_action ==
                     (share ? SeqAction::share : SeqAction::spread);
  }
  c.expect(actions_match, "players disagreed in some outcome");
  c.expect(rule_match, "threshold rule violated in some outcome");

  // Entry flips exactly where the prior mass below g_star crosses the cutoff.
  const double d = entry_cutoff_d(kCost2, 0.6);
  auto enters = [&](double b) {
    return sbgie_equilibrium(kCost2, 0.6, 0.5,
                             GainDistribution::uniform(0.0, b))
               .entry == EntryAction::enter;
  };
  double lo = gs * 1.0000001, hi = gs * 10.0;
  c.expect(!enters(lo) && enters(hi), "entry bracket endpoints are wrong");
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (enters(mid) ? hi : lo) = mid;
  }
  const double rho_at_flip = gs / (0.5 * (lo + hi));
  c.expect(std::abs(rho_at_flip - d) < 1e-6,
           "entry flips at belief " + num(rho_at_flip) +
               " instead of the cutoff " + num(d));
}

// ---------------------------------------------------------------- criterion 6
void two_period_cross_validation(Criterion& c) {
  const GainDistribution prior = GainDistribution::uniform(0.0, 1.0);
  const double d = entry_cutoff_d(kCost2, 0.6);
  const double rho = prior.cdf(g_star(kCost2));
  const auto sol = two_period_oracle(kCost2, 0.6, 0.5, prior);
  c.expect(std::abs(sol.entry_cutoff_last - d) <= 1e-9,
           "last-period cutoff " + num(sol.entry_cutoff_last) +
               " vs closed form " + num(d));
  c.expect(std::abs(sol.entry_cutoff_first - d * d) <= 1e-9,
           "first-period cutoff " + num(sol.entry_cutoff_first) +
               " vs closed form " + num(d * d));
  c.expect(std::abs(sol.lambda - lambda_mix(kCost2, 0.5)) <= 1e-9,
           "tie-entry probability mismatch");
  c.expect(std::abs(sol.gamma - gamma_mix(rho, d, 2)) <= 1e-9,
           "mixing probability mismatch");
  c.expect(sol.max_primary_deviation <= 1e-9 &&
               sol.max_secondary_deviation <= 1e-9,
           "two-period deviations exceed tolerance");
  for (int horizon : {2, 3}) {
    for (double g21 : {0.5, 0.05}) {
      const auto dev =
          one_shot_deviation_search(kCost2, 0.6, g21, 0.2, horizon);
      c.expect(dev.max_improvement <= 1e-9,
               "profitable deviation " + num(dev.max_improvement) +
                   " at horizon " + std::to_string(horizon) + ", g21 " +
                   num(g21));
    }
  }
}

// ---------------------------------------------------------------- criterion 7
void deterrence_window(Criterion& c) {
  const double gs = g_star(kCost2);
  const GainDistribution prior = GainDistribution::uniform(0.0, 5.0 * gs);
  const double d = entry_cutoff_d(kCost2, 0.6);
  const double rho = prior.cdf(gs);
  const double t_star = deterrence_horizon(rho, d);
  const int lo = static_cast<int>(std::floor(t_star));
  const int hi = static_cast<int>(std::ceil(t_star));
  for (int horizon : {5, 10, 20}) {
    for (std::uint64_t seed : {3ULL, 7ULL, 11ULL}) {
      const auto trace = simulate(reputation_config(horizon, seed, prior));
      const bool in_window =
          trace.first_entry_t == lo || trace.first_entry_t == hi;
      c.expect(in_window, "entry began at reverse period " +
                              std::to_string(trace.first_entry_t) +
                              " (window " + std::to_string(lo) + ".." +
                              std::to_string(hi) + ") at horizon " +
                              std::to_string(horizon));
    }
  }
  // Known prior mass: every period is entered and shared.
  for (double g21 : {0.2, 0.5, 0.9}) {
    RepeatedConfig cfg =
        reputation_config(8, 17, GainDistribution::uniform(0.15, 0.95));
    cfg.g21 = g21;
    const auto trace = simulate(cfg);
    c.expect(trace.rho == 0.0, "prior mass below g_star is not zero");
    for (const PeriodOutcome& out : trace.periods) {
      const bool entered_share =
          out.entry == EntryAction::enter && out.primary_action &&
          *out.primary_action == SeqAction::share;
      if (!entered_share) {
        c.expect(false, "known-type play broke at reverse period " +
                            std::to_string(out.t_reverse) + ", g21 " +
                            num(g21));
        break;
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 8
void belief_consistency(Criterion& c) {
  const GainDistribution prior = GainDistribution::uniform(0.0, 1.0);
  int spread_updates = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto trace = simulate(reputation_config(12, seed, prior));
    for (const PeriodOutcome& out : trace.periods) {
      if (out.entry != EntryAction::enter || !out.primary_action ||
          *out.primary_action != SeqAction::spread || out.t_reverse <= 1) {
        continue;
      }
      const double mu = out.mu_before;
      if (!(mu > 0.0) || !(mu < 1.0)) continue;
      ++spread_updates;
      const double gamma = gamma_mix(mu, trace.d, out.t_reverse);
      const double bayes = mu / (mu + (1.0 - mu) * gamma);
      c.expect(std::abs(out.mu_after - bayes) <= 1e-12,
               "posterior " + num(out.mu_after) + " vs Bayes " + num(bayes) +
                   " at reverse period " + std::to_string(out.t_reverse));
      c.expect(out.mu_after >= mu - 1e-15,
               "belief fell after a spread at reverse period " +
                   std::to_string(out.t_reverse));
    }
  }
  c.expect(spread_updates > 0, "no spread updates were exercised");
}

// ---------------------------------------------------------------- criterion 9
void two_sided_consistency(Criterion& c) {
  double prev = spread_share_gap(kBase, 1e-3, 0.4);
  for (double g21 : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const double gap = spread_share_gap(kBase, g21, 0.4);
    c.expect(gap < prev, "gap not decreasing at g21 " + num(g21));
    prev = gap;
  }
  c.expect(std::isinf(g21_hat(kBase, 1.0)), "kappa = 1 sentinel missing");
  for (double alpha : {0.1, 0.4, 0.7, 1.0}) {
    const double jump = std::abs(entry_rate(kBase, 0.5 - 1e-12, alpha) -
                                 entry_rate(kBase, 0.5 + 1e-12, alpha));
    c.expect(jump < 1e-9, "entry rate jumps by " + num(jump) +
                              " at the switch for alpha " + num(alpha));
  }

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 10; ++trial) {
    GameParams params{0.5 + 1.5 * unit(rng), 0.005 + 0.045 * unit(rng), 2,
                      0.3 + 2.0 * unit(rng)};
    const GainDistribution prior12 =
        GainDistribution::uniform(0.0, 0.6 + 0.8 * unit(rng));
    const GainDistribution prior21 =
        GainDistribution::uniform(0.0, 0.6 + 0.8 * unit(rng));
    const auto eq = solve_two_sided(params, prior12, prior21);
    if (!eq.report.converged) {
      c.expect(false, "randomized scenario " + std::to_string(trial) +
                          " did not converge");
      continue;
    }
    ++solved;
    const double gh21 = g21_hat(params, eq.kappa_hat);
    const bool g21_ok = std::isinf(gh21) ? std::isinf(eq.g21_hat)
                                         : std::abs(gh21 - eq.g21_hat) <= 1e-8;
    const double alpha =
        std::isinf(eq.g21_hat) ? 1.0 : prior21.cdf(eq.g21_hat);
    const double gh12 = g12_hat(params, alpha);
    const bool g12_ok = std::isinf(gh12) ? std::isinf(eq.g12_hat)
                                         : std::abs(gh12 - eq.g12_hat) <= 1e-8;
    const double kappa = kappa_posterior(prior12, eq.g12_hat);
    c.expect(g21_ok, "scenario " + std::to_string(trial) +
                         ": spread threshold residual");
    c.expect(std::abs(alpha - eq.alpha) <= 1e-8,
             "scenario " + std::to_string(trial) +
                 ": spread probability residual");
    c.expect(g12_ok, "scenario " + std::to_string(trial) +
                         ": entry threshold residual");
    c.expect(std::abs(kappa - eq.kappa_hat) <= 1e-8,
             "scenario " + std::to_string(trial) + ": posterior residual");
  }
  c.expect(solved == 10, "only " + std::to_string(solved) +
                             " of 10 randomized scenarios converged");

  const auto weak = solve_two_sided(kCost2, GainDistribution::uniform(0.4, 0.45),
                                    GainDistribution::uniform(0.0, 1.0));
  c.expect(std::abs(weak.kappa_hat - 1.0) <= 1e-9 && std::isinf(weak.g21_hat) &&
               weak.alpha == 1.0 &&
               std::abs(weak.g12_hat - g12_tilde(kCost2)) <= 1e-9,
           "degenerate prior did not recover the one-sided entry threshold");
}

// --------------------------------------------------------------- criterion 10
void artifact_determinism(Criterion& c) {
  std::vector<Scenario> scenarios;

  Scenario s;
  s.mode = Mode::static_br;
  s.game = kBase;
  s.prior_g11 = GainDistribution::point_mass(1.0);
  s.prior_g22 = GainDistribution::point_mass(1.0);
  s.prior_g12 = GainDistribution::uniform(0.0, 1.0);
  s.prior_g21 = GainDistribution::uniform(0.0, 1.0);
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::bgi_verify;
  s.game = kBase;
  s.seed = {8};
  s.prior_g11 = GainDistribution::uniform(0.5, 1.5);
  s.prior_g21 = GainDistribution::uniform(0.0, 1.0);
  s.n_check = 400;
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::sbgi;
  s.game = kBase;
  s.g12 = 0.7;
  s.g21 = 0.5;
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::sbgie;
  s.game = kCost2;
  s.g12 = 0.6;
  s.g21 = 0.5;
  s.prior_g21 = GainDistribution::uniform(0.0, 1.0);
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::two_sided;
  s.game = kCost2;
  s.prior_g12 = GainDistribution::uniform(0.0, 1.0);
  s.prior_g21 = GainDistribution::uniform(0.0, 1.0);
  s.grid_scan = true;
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::repeated;
  s.game = kCost2;
  s.seed = {42};
  s.g12 = 0.6;
  s.g21 = 0.5;
  s.prior_g21 = GainDistribution::uniform(0.0, 1.0);
  s.horizon = 10;
  scenarios.push_back(s);

  s = Scenario{};
  s.mode = Mode::sweep;
  s.game = kBase;
  s.g12 = 0.7;
  s.g21 = 0.5;
  s.sweep = SweepSpec{Mode::sbgi, "P", 0.1, 10.0, 5, true};
  scenarios.push_back(s);

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const fs::path a =
        fs::temp_directory_path() / ("igames_acc_a" + std::to_string(i));
    const fs::path b =
        fs::temp_directory_path() / ("igames_acc_b" + std::to_string(i));
    fs::remove_all(a);
    fs::remove_all(b);
    const auto ra = run_scenario(scenarios[i], a);
    const auto rb = run_scenario(scenarios[i], b);
    const std::string label = to_label(scenarios[i].mode);
    if (ra.status != RunStatus::ok || rb.status != RunStatus::ok) {
      c.expect(false, label + ": run failed");
      continue;
    }
    if (ra.outputs.size() != rb.outputs.size() || ra.outputs.empty()) {
      c.expect(false, label + ": artifact lists differ");
      continue;
    }
    for (const std::string& path : ra.outputs) {
      const fs::path name = fs::path(path).filename();
      std::ifstream fa(a / name, std::ios::binary);
      std::ifstream fb(b / name, std::ios::binary);
      std::ostringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      c.expect(fa.good() && fb.good() && sa.str() == sb.str() &&
                   !sa.str().empty(),
               label + ": " + name.string() + " differs between runs");
    }
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "best-response dynamics reproduce the even-split equilibrium", {}},
      {2, "expected-rate first-order conditions vanish and keep their sign", {}},
      {3, "restricted-game payoff identity and equilibrium verification", {}},
      {4, "gain thresholds: monotonicity, limits, and cost regimes", {}},
      {5, "sequential outcomes agree and entry flips at the belief cutoff", {}},
      {6, "two-period backward induction and deviation search agree", {}},
      {7, "entry starts within one period of the deterrence horizon", {}},
      {8, "simulated belief updates match the Bayes posterior", {}},
      {9, "two-sided thresholds are self-consistent at the fixed point", {}},
      {10, "artifacts are byte-identical across reruns", {}},
  };
  const std::vector<std::function<void(Criterion&)>> checks = {
      best_response_convergence, first_order_conditions,
      restricted_game_identity, threshold_suite,
      sequential_outcomes,      two_period_cross_validation,
      deterrence_window,        belief_consistency,
      two_sided_consistency,    artifact_determinism,
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      checks[i](criteria[i]);
    } catch (const std::exception& e) {
      criteria[i].failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = criteria[i].failures.empty();
    all_ok = all_ok && ok;
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL",
                criteria[i].id, criteria[i].title.c_str());
    for (const std::string& f : criteria[i].failures) {
      std::printf("       %s\n", f.c_str());
    }
  }
  return all_ok ? 0 : 1;
}
