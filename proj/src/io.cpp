#include "igames/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace igames {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string br_trajectory_csv(const BrTrajectory& traj) {
  std::ostringstream out;
  out << "iteration,p1_ch1,p1_ch2,p2_ch1,p2_ch2\n";
  for (const BrStep& s : traj.steps) {
    out << s.iteration << ',' << format_double(s.p1_ch1) << ','
        << format_double(s.p1_ch2) << ',' << format_double(s.p2_ch1) << ','
        << format_double(s.p2_ch2) << '\n';
  }
  return out.str();
}

std::string simulation_trace_csv(const SimulationTrace& trace) {
  std::ostringstream out;
  out << "t_reverse,t_forward,entry,primary_action,mu_before,mu_after,"
         "primary_payoff,secondary_payoff,entry_draw,action_draw\n";
  for (const PeriodOutcome& p : trace.periods) {
    out << p.t_reverse << ',' << p.t_forward << ',' << to_label(p.entry) << ','
        << (p.primary_action ? to_label(*p.primary_action) : "") << ','
        << format_double(p.mu_before) << ',' << format_double(p.mu_after)
        << ',' << format_double(p.primary_payoff) << ','
        << format_double(p.secondary_payoff) << ','
        << format_double(p.entry_draw) << ',' << format_double(p.action_draw)
        << '\n';
  }
  return out.str();
}

namespace {

// Non-finite doubles have no JSON number representation; keep them readable.
nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

nlohmann::json to_json(const SbgiEquilibrium& eq) {
  return {
      {"primary_action", to_label(eq.primary_action)},
      {"secondary_action", to_label(eq.secondary_action)},
      {"primary_payoff", json_number(eq.primary_payoff)},
      {"secondary_payoff", json_number(eq.secondary_payoff)},
  };
}

nlohmann::json to_json(const SbgiEEquilibrium& eq) {
  nlohmann::json j = {
      {"entry", to_label(eq.entry)},
      {"entry_value", json_number(eq.entry_value)},
      {"secondary_payoff", json_number(eq.secondary_payoff)},
  };
  if (eq.post_entry) j["post_entry"] = to_json(*eq.post_entry);
  return j;
}

nlohmann::json to_json(const TwoSidedEquilibrium& eq) {
  return {
      {"kappa_hat", json_number(eq.kappa_hat)},
      {"g21_hat", json_number(eq.g21_hat)},
      {"alpha", json_number(eq.alpha)},
      {"g12_hat", json_number(eq.g12_hat)},
      {"off_path_entry", eq.off_path_entry},
      {"converged", eq.report.converged},
      {"iterations", eq.report.iterations},
      {"residual", json_number(eq.report.residual)},
  };
}

nlohmann::json to_json(const BgiVerification& v, const GameParams& params) {
  nlohmann::json induced = {
      {"spread", json_number(v.induced.spread)},
  };
  nlohmann::json conc = nlohmann::json::array();
  for (double a : v.induced.concentrate) conc.push_back(json_number(a));
  induced["concentrate"] = conc;
  nlohmann::json j = {
      {"verified", v.verified},
      {"induced", induced},
      {"subchannels", params.subchannels},
  };
  if (v.counterexample) {
    const BgiDeviation& d = *v.counterexample;
    j["counterexample"] = {
        {"self_gain", json_number(d.self_gain)},
        {"incident_gain", json_number(d.incident_gain)},
        {"played", d.played.is_spread() ? 0 : d.played.index},
        {"better", d.better.is_spread() ? 0 : d.better.index},
        {"improvement", json_number(d.improvement)},
    };
  }
  return j;
}

nlohmann::json trace_summary_json(const SimulationTrace& trace) {
  return {
      {"horizon", static_cast<int>(trace.periods.size())},
      {"reputation_regime", trace.reputation_regime},
      {"rho", json_number(trace.rho)},
      {"d", json_number(trace.d)},
      {"t_star", json_number(trace.t_star)},
      {"deterrence_count", trace.deterrence_count},
      {"first_entry_t", trace.first_entry_t},
      {"primary_total", json_number(trace.primary_total)},
      {"secondary_total", json_number(trace.secondary_total)},
      {"equilibrium_welfare", json_number(trace.equilibrium_welfare)},
      {"benchmark_welfare", json_number(trace.benchmark_welfare)},
      {"efficiency_ratio", json_number(trace.efficiency_ratio)},
  };
}

}  // namespace igames
