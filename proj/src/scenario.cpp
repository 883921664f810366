#include "igames/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "igames/io.hpp"
#include "igames/repeated_game.hpp"
#include "igames/sequential_games.hpp"
#include "igames/two_sided.hpp"

namespace igames {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double* out) {
  s = trim(s);
  if (s == "inf") {
    *out = std::numeric_limits<double>::infinity();
    return true;
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int* out) {
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_u64(std::string_view s, std::uint64_t* out) {
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_bool(std::string_view s, bool* out) {
  s = trim(s);
  if (s == "true" || s == "1") {
    *out = true;
    return true;
  }
  if (s == "false" || s == "0") {
    *out = false;
    return true;
  }
  return false;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(s.substr(start)));
      break;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return parts;
}

}  // namespace

const char* to_label(Mode m) {
  switch (m) {
    case Mode::static_br: return "static-br";
    case Mode::bgi_verify: return "bgi-verify";
    case Mode::sbgi: return "sbgi";
    case Mode::sbgie: return "sbgie";
    case Mode::two_sided: return "two-sided";
    case Mode::repeated: return "repeated";
    case Mode::sweep: return "sweep";
  }
  return "?";
}

std::optional<Mode> mode_from_label(std::string_view s) {
  for (Mode m : {Mode::static_br, Mode::bgi_verify, Mode::sbgi, Mode::sbgie,
                 Mode::two_sided, Mode::repeated, Mode::sweep}) {
    if (s == to_label(m)) return m;
  }
  return std::nullopt;
}

std::optional<GainDistribution> parse_distribution(std::string_view text,
                                                   std::string* error) {
  auto bad = [&](const std::string& why) -> std::optional<GainDistribution> {
    if (error) *error = why;
    return std::nullopt;
  };
  text = trim(text);
  const std::size_t open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    return bad("expected name(args), e.g. uniform(0,1)");
  }
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view args_text =
      text.substr(open + 1, text.size() - open - 2);
  const std::vector<std::string_view> args = split(args_text, ',');
  try {
    if (name == "uniform") {
      double lo, hi;
      if (args.size() != 2 || !parse_double(args[0], &lo) ||
          !parse_double(args[1], &hi)) {
        return bad("uniform takes (lo, hi)");
      }
      return GainDistribution::uniform(lo, hi);
    }
    if (name == "truncexp") {
      double rate, lo, hi;
      if (args.size() != 3 || !parse_double(args[0], &rate) ||
          !parse_double(args[1], &lo) || !parse_double(args[2], &hi)) {
        return bad("truncexp takes (rate, lo, hi); hi may be inf");
      }
      return GainDistribution::truncated_exponential(rate, lo, hi);
    }
    if (name == "point") {
      double v;
      if (args.size() != 1 || !parse_double(args[0], &v)) {
        return bad("point takes (value)");
      }
      return GainDistribution::point_mass(v);
    }
    if (name == "discrete") {
      std::vector<double> values, weights;
      for (std::string_view part : args) {
        const std::size_t colon = part.find(':');
        double v, w;
        if (colon == std::string_view::npos ||
            !parse_double(part.substr(0, colon), &v) ||
            !parse_double(part.substr(colon + 1), &w)) {
          return bad("discrete takes (v1:w1, v2:w2, ...)");
        }
        values.push_back(v);
        weights.push_back(w);
      }
      if (values.empty()) return bad("discrete needs at least one atom");
      return GainDistribution::discrete(std::move(values), std::move(weights));
    }
  } catch (const std::invalid_argument& e) {
    return bad(e.what());
  }
  return bad("unknown distribution '" + std::string(name) +
             "' (uniform, truncexp, point, discrete)");
}

std::string distribution_to_text(const GainDistribution& d) {
  std::ostringstream out;
  switch (d.kind()) {
    case GainDistribution::Kind::uniform:
      out << "uniform(" << format_double(d.support_lo()) << ','
          << format_double(d.support_hi()) << ')';
      break;
    case GainDistribution::Kind::truncated_exponential:
      out << "truncexp(" << format_double(d.rate()) << ','
          << format_double(d.support_lo()) << ','
          << format_double(d.support_hi()) << ')';
      break;
    case GainDistribution::Kind::point_mass:
      out << "point(" << format_double(d.support_lo()) << ')';
      break;
    case GainDistribution::Kind::discrete: {
      out << "discrete(";
      const auto& v = d.atom_values();
      const auto& w = d.atom_weights();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << format_double(v[i]) << ':' << format_double(w[i]);
      }
      out << ')';
      break;
    }
  }
  return out.str();
}

namespace {

struct Parser {
  Scenario s;
  std::vector<std::string> errors;
  bool mode_set = false;

  void error(const std::string& where, const std::string& what) {
    errors.push_back(where + ": " + what);
  }

  void set_double(const std::string& where, std::string_view value,
                  double* out) {
    if (!parse_double(value, out)) error(where, "expected a number");
  }

  void set_opt_double(const std::string& where, std::string_view value,
                      std::optional<double>* out) {
    double v;
    if (parse_double(value, &v)) {
      *out = v;
    } else {
      error(where, "expected a number");
    }
  }

  void set_int(const std::string& where, std::string_view value, int* out) {
    if (!parse_int(value, out)) error(where, "expected an integer");
  }

  void set_dist(const std::string& where, std::string_view value,
                std::optional<GainDistribution>* out) {
    std::string why;
    auto d = parse_distribution(value, &why);
    if (d) {
      *out = std::move(*d);
    } else {
      error(where, why);
    }
  }

  void apply(const std::string& section, const std::string& key,
             std::string_view value) {
    const std::string where = section + "." + key;
    if (section == "run") {
      if (key == "mode") {
        const auto m = mode_from_label(trim(value));
        if (m) {
          s.mode = *m;
          mode_set = true;
        } else {
          error(where,
                "unknown mode (static-br, bgi-verify, sbgi, sbgie, two-sided, "
                "repeated, sweep)");
        }
      } else if (key == "seed") {
        if (!parse_u64(value, &s.seed.value)) {
          error(where, "expected an unsigned integer");
        }
      } else {
        error(where, "unknown key");
      }
    } else if (section == "game") {
      if (key == "P") set_double(where, value, &s.game.power_budget);
      else if (key == "N0") set_double(where, value, &s.game.noise_density);
      else if (key == "K") set_int(where, value, &s.game.subchannels);
      else if (key == "k") set_double(where, value, &s.game.power_cost_coeff);
      else error(where, "unknown key");
    } else if (section == "gains") {
      if (key == "g12") set_opt_double(where, value, &s.g12);
      else if (key == "g21") set_opt_double(where, value, &s.g21);
      else error(where, "unknown key");
    } else if (section == "priors") {
      if (key == "g11") set_dist(where, value, &s.prior_g11);
      else if (key == "g12") set_dist(where, value, &s.prior_g12);
      else if (key == "g21") set_dist(where, value, &s.prior_g21);
      else if (key == "g22") set_dist(where, value, &s.prior_g22);
      else error(where, "unknown key");
    } else if (section == "repeated") {
      if (key == "T") set_int(where, value, &s.horizon);
      else error(where, "unknown key");
    } else if (section == "static_br") {
      if (key == "init1") set_opt_double(where, value, &s.init1);
      else if (key == "init2") set_opt_double(where, value, &s.init2);
      else if (key == "max_iter") set_int(where, value, &s.max_iter);
      else if (key == "tol") set_double(where, value, &s.br_tol);
      else if (key == "update") {
        const std::string_view v = trim(value);
        if (v == "simultaneous") s.update = UpdateRule::simultaneous;
        else if (v == "alternating") s.update = UpdateRule::alternating;
        else error(where, "expected simultaneous or alternating");
      } else error(where, "unknown key");
    } else if (section == "bgi") {
      if (key == "candidate") s.candidate = std::string(trim(value));
      else if (key == "n_check") set_int(where, value, &s.n_check);
      else error(where, "unknown key");
    } else if (section == "two_sided") {
      if (key == "damping") set_double(where, value, &s.damping);
      else if (key == "tol") set_double(where, value, &s.ts_tol);
      else if (key == "max_iter") set_int(where, value, &s.ts_max_iter);
      else if (key == "grid_scan") {
        if (!parse_bool(value, &s.grid_scan)) {
          error(where, "expected true or false");
        }
      } else error(where, "unknown key");
    } else if (section == "numerics") {
      if (key == "quad_order") set_int(where, value, &s.quad_order);
      else if (key == "mc_n") {
        std::uint64_t n;
        if (parse_u64(value, &n)) s.mc_n = n;
        else error(where, "expected an unsigned integer");
      } else error(where, "unknown key");
    } else if (section == "sweep") {
      if (!s.sweep) s.sweep.emplace();
      if (key == "mode") {
        const auto m = mode_from_label(trim(value));
        if (m && (*m == Mode::sbgi || *m == Mode::sbgie || *m == Mode::repeated)) {
          s.sweep->inner = *m;
        } else {
          error(where, "sweep supports inner modes sbgi, sbgie, repeated");
        }
      } else if (key == "variable") {
        s.sweep->variable = std::string(trim(value));
      } else if (key == "from") set_double(where, value, &s.sweep->from);
      else if (key == "to") set_double(where, value, &s.sweep->to);
      else if (key == "points") set_int(where, value, &s.sweep->points);
      else if (key == "scale") {
        const std::string_view v = trim(value);
        if (v == "linear") s.sweep->log_scale = false;
        else if (v == "log") s.sweep->log_scale = true;
        else error(where, "expected linear or log");
      } else error(where, "unknown key");
    } else {
      error(section.empty() ? key : section, "unknown section");
    }
  }

  void require(bool present, const std::string& where) {
    if (!present) error(where, "required for this mode");
  }

  void validate() {
    if (!mode_set) {
      error("run.mode", "required");
      return;
    }
    // Game parameter ranges.
    if (!(s.game.power_budget > 0.0) || !std::isfinite(s.game.power_budget)) {
      error("game.P", "must be positive and finite");
    }
    if (!(s.game.noise_density > 0.0) || !std::isfinite(s.game.noise_density)) {
      error("game.N0", "must be positive and finite");
    }
    if (s.game.subchannels < 1) error("game.K", "must be at least 1");
    if (s.game.power_cost_coeff < 0.0 ||
        !std::isfinite(s.game.power_cost_coeff)) {
      error("game.k", "must be nonnegative and finite");
    }
    auto check_gain = [&](const std::optional<double>& g, const char* where) {
      if (g && (!(*g > 0.0) || !std::isfinite(*g))) {
        error(where, "must be positive and finite");
      }
    };
    check_gain(s.g12, "gains.g12");
    check_gain(s.g21, "gains.g21");

    const Mode inner = s.mode == Mode::sweep && s.sweep ? s.sweep->inner : s.mode;
    switch (s.mode) {
      case Mode::static_br:
        if (s.game.subchannels != 2) {
          error("game.K", "static-br supports exactly 2 subchannels");
        }
        require(s.prior_g11.has_value(), "priors.g11");
        require(s.prior_g21.has_value(), "priors.g21");
        require(s.prior_g22.has_value(), "priors.g22");
        require(s.prior_g12.has_value(), "priors.g12");
        if (s.max_iter < 1) error("static_br.max_iter", "must be at least 1");
        if (!(s.br_tol > 0.0)) error("static_br.tol", "must be positive");
        for (const auto* init : {&s.init1, &s.init2}) {
          if (*init && (!(**init >= 0.0) || **init > s.game.power_budget)) {
            error(init == &s.init1 ? "static_br.init1" : "static_br.init2",
                  "must lie in [0, P]");
          }
        }
        break;
      case Mode::bgi_verify: {
        require(s.prior_g11.has_value(), "priors.g11");
        require(s.prior_g21.has_value(), "priors.g21");
        if (s.n_check < 1) error("bgi.n_check", "must be at least 1");
        if (s.candidate != "spread") {
          const std::string prefix = "concentrate:";
          int k = 0;
          if (s.candidate.rfind(prefix, 0) != 0 ||
              !parse_int(std::string_view(s.candidate).substr(prefix.size()),
                         &k) ||
              k < 1 || k > s.game.subchannels) {
            error("bgi.candidate",
                  "expected spread or concentrate:<subchannel>");
          }
        }
        break;
      }
      case Mode::two_sided:
        require(s.prior_g12.has_value(), "priors.g12");
        require(s.prior_g21.has_value(), "priors.g21");
        if (!(s.damping > 0.0) || s.damping > 1.0) {
          error("two_sided.damping", "must lie in (0, 1]");
        }
        if (!(s.ts_tol > 0.0)) error("two_sided.tol", "must be positive");
        if (s.ts_max_iter < 1) error("two_sided.max_iter", "must be at least 1");
        break;
      case Mode::sweep: {
        if (!s.sweep) {
          error("sweep", "section required for sweep mode");
          break;
        }
        static const char* const vars[] = {"P", "N0", "k", "g12", "g21", "T"};
        if (std::find(std::begin(vars), std::end(vars), s.sweep->variable) ==
            std::end(vars)) {
          error("sweep.variable", "expected one of P, N0, k, g12, g21, T");
        }
        if (s.sweep->variable == "T" && s.sweep->inner != Mode::repeated) {
          error("sweep.variable", "T can only be swept in repeated mode");
        }
        if (s.sweep->points < 2) error("sweep.points", "must be at least 2");
        if (!std::isfinite(s.sweep->from) || !std::isfinite(s.sweep->to)) {
          error("sweep.from", "from/to must be finite");
        }
        if (s.sweep->log_scale &&
            (!(s.sweep->from > 0.0) || !(s.sweep->to > 0.0))) {
          error("sweep.scale", "log scale requires positive from/to");
        }
        break;
      }
      default:
        break;
    }
    // Inner-mode requirements shared by direct runs and sweeps.
    if (inner == Mode::sbgi || inner == Mode::sbgie || inner == Mode::repeated) {
      require(s.g12.has_value(), "gains.g12");
      require(s.g21.has_value(), "gains.g21");
    }
    if (inner == Mode::sbgie || inner == Mode::repeated) {
      require(s.prior_g21.has_value(), "priors.g21");
    }
    if (inner == Mode::repeated && s.horizon < 1) {
      error("repeated.T", "must be at least 1");
    }
    if (s.quad_order < 1) error("numerics.quad_order", "must be at least 1");
    if (s.mc_n < 1) error("numerics.mc_n", "must be at least 1");
  }
};

}  // namespace

ParseResult parse_scenario(std::string_view text) {
  Parser parser;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = end == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        parser.error("line " + std::to_string(line_no), "malformed section");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* const known[] = {
          "run",   "game",      "gains", "priors",    "repeated",
          "static_br", "bgi", "two_sided", "numerics", "sweep"};
      if (std::find(std::begin(known), std::end(known), section) ==
          std::end(known)) {
        parser.error(section, "unknown section");
        section.clear();
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      parser.error("line " + std::to_string(line_no), "expected key = value");
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) {
      parser.error(key, "key outside any section");
      continue;
    }
    parser.apply(section, key, value);
  }
  parser.validate();
  ParseResult result;
  result.errors = std::move(parser.errors);
  if (result.errors.empty()) result.scenario = std::move(parser.s);
  return result;
}

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream out;
  out << "[run]\n"
      << "mode = " << to_label(s.mode) << "\n"
      << "seed = " << s.seed.value << "\n\n";
  out << "[game]\n"
      << "P = " << format_double(s.game.power_budget) << "\n"
      << "N0 = " << format_double(s.game.noise_density) << "\n"
      << "K = " << s.game.subchannels << "\n"
      << "k = " << format_double(s.game.power_cost_coeff) << "\n";
  if (s.g12 || s.g21) {
    out << "\n[gains]\n";
    if (s.g12) out << "g12 = " << format_double(*s.g12) << "\n";
    if (s.g21) out << "g21 = " << format_double(*s.g21) << "\n";
  }
  if (s.prior_g11 || s.prior_g12 || s.prior_g21 || s.prior_g22) {
    out << "\n[priors]\n";
    if (s.prior_g11) out << "g11 = " << distribution_to_text(*s.prior_g11) << "\n";
    if (s.prior_g12) out << "g12 = " << distribution_to_text(*s.prior_g12) << "\n";
    if (s.prior_g21) out << "g21 = " << distribution_to_text(*s.prior_g21) << "\n";
    if (s.prior_g22) out << "g22 = " << distribution_to_text(*s.prior_g22) << "\n";
  }
  out << "\n[repeated]\nT = " << s.horizon << "\n";
  out << "\n[static_br]\n";
  if (s.init1) out << "init1 = " << format_double(*s.init1) << "\n";
  if (s.init2) out << "init2 = " << format_double(*s.init2) << "\n";
  out << "max_iter = " << s.max_iter << "\n"
      << "tol = " << format_double(s.br_tol) << "\n"
      << "update = "
      << (s.update == UpdateRule::simultaneous ? "simultaneous" : "alternating")
      << "\n";
  out << "\n[bgi]\ncandidate = " << s.candidate << "\nn_check = " << s.n_check
      << "\n";
  out << "\n[two_sided]\ndamping = " << format_double(s.damping)
      << "\ntol = " << format_double(s.ts_tol)
      << "\nmax_iter = " << s.ts_max_iter
      << "\ngrid_scan = " << (s.grid_scan ? "true" : "false") << "\n";
  out << "\n[numerics]\nquad_order = " << s.quad_order
      << "\nmc_n = " << s.mc_n << "\n";
  if (s.sweep) {
    out << "\n[sweep]\nmode = " << to_label(s.sweep->inner)
        << "\nvariable = " << s.sweep->variable
        << "\nfrom = " << format_double(s.sweep->from)
        << "\nto = " << format_double(s.sweep->to)
        << "\npoints = " << s.sweep->points
        << "\nscale = " << (s.sweep->log_scale ? "log" : "linear") << "\n";
  }
  return out.str();
}

namespace {

nlohmann::json params_json(const GameParams& p) {
  return {
      {"P", p.power_budget},
      {"N0", p.noise_density},
      {"K", p.subchannels},
      {"k", p.power_cost_coeff},
  };
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

struct Runner {
  const Scenario& s;
  const std::filesystem::path& out_dir;
  RunResult& result;
  std::vector<std::string> lines;

  void note(const std::string& line) { lines.push_back(line); }

  void emit(const std::string& name, const std::string& content) {
    const std::filesystem::path path = out_dir / name;
    write_text_file(path, content);
    result.outputs.push_back(path.string());
  }

  void emit_json(const std::string& name, const nlohmann::json& j) {
    emit(name, j.dump(2) + "\n");
  }

  // Threshold quantities derivable from the scenario, reported with their
  // inputs for every run.
  void note_thresholds() {
    const GameParams& g = s.game;
    note("g_star = " + format_double(g_star(g)) + "  (P = " +
         format_double(g.power_budget) + ", N0 = " +
         format_double(g.noise_density) + ")");
    if (g.power_cost_coeff > 0.0) {
      note("g12_tilde = " + format_double(g12_tilde(g)) + "  (k = " +
           format_double(g.power_cost_coeff) + ")");
    }
    if (s.g12 && *s.g12 > 0.5) {
      try {
        const double d = entry_cutoff_d(g, *s.g12);
        note("d = " + format_double(d) + "  (g12 = " + format_double(*s.g12) +
             ")");
        if (s.prior_g21) {
          const double rho = s.prior_g21->cdf(g_star(g));
          note("rho = " + format_double(rho));
          if (rho > 0.0 && rho < 1.0 && d > 0.0 && d < 1.0) {
            note("t_star = " + format_double(deterrence_horizon(rho, d)));
          }
        }
      } catch (const std::invalid_argument&) {
        // Cutoff undefined at these parameters; nothing to report.
      }
    }
  }

  void run_static_br() {
    const UcgiPriors priors{{*s.prior_g11, *s.prior_g21},
                            {*s.prior_g22, *s.prior_g12}};
    const double init1 = s.init1.value_or(s.game.power_budget);
    const double init2 = s.init2.value_or(0.0);
    const BrTrajectory traj =
        ucgi_br_dynamics(s.game, priors, init1, init2, s.max_iter, s.br_tol,
                         s.update, Quadrature{s.quad_order});
    emit("trajectory.csv", br_trajectory_csv(traj));
    const BrStep& last = traj.steps.back();
    note("iterations = " + std::to_string(last.iteration));
    note("final = (" + format_double(last.p1_ch1) + ", " +
         format_double(last.p2_ch1) + ")");
    note("gap_to_symmetric = " + format_double(traj.gap_to_symmetric));
    if (!traj.converged) {
      result.status = RunStatus::not_converged;
      result.errors.push_back(
          "best-response dynamics did not converge within " +
          std::to_string(s.max_iter) + " iterations");
    }
  }

  void run_bgi_verify() {
    RestrictedStrategyFn fn;
    if (s.candidate == "spread") {
      fn = [](double, double) { return RestrictedAction::spread(); };
    } else {
      const int k = std::stoi(s.candidate.substr(std::string("concentrate:").size()));
      fn = [k](double, double) { return RestrictedAction::concentrate(k); };
    }
    const BgiVerification v = bgi_verify_symmetric_bne(
        s.game, fn, {*s.prior_g11, *s.prior_g21}, s.n_check, s.seed);
    nlohmann::json j = to_json(v, s.game);
    j["params"] = params_json(s.game);
    j["candidate"] = s.candidate;
    emit_json("bgi_verify.json", j);
    note(std::string("verified = ") + (v.verified ? "true" : "false"));
  }

  void run_sbgi() {
    const SbgiEquilibrium eq = sbgi_equilibrium(s.game, *s.g12, *s.g21);
    nlohmann::json j = to_json(eq);
    j["params"] = params_json(s.game);
    j["g12"] = *s.g12;
    j["g21"] = *s.g21;
    emit_json("sbgi.json", j);
    note(std::string("actions = (") + to_label(eq.primary_action) + ", " +
         to_label(eq.secondary_action) + ")");
  }

  void run_sbgie() {
    const SbgiEEquilibrium eq =
        sbgie_equilibrium(s.game, *s.g12, *s.g21, *s.prior_g21);
    nlohmann::json j = to_json(eq);
    j["params"] = params_json(s.game);
    j["g12"] = *s.g12;
    j["g21"] = *s.g21;
    j["prior_g21"] = distribution_to_text(*s.prior_g21);
    emit_json("sbgie.json", j);
    note(std::string("entry = ") + to_label(eq.entry));
  }

  void run_two_sided() {
    const TwoSidedEquilibrium eq =
        solve_two_sided(s.game, *s.prior_g12, *s.prior_g21, s.damping,
                        s.ts_tol, s.ts_max_iter);
    nlohmann::json j = to_json(eq);
    j["params"] = params_json(s.game);
    j["prior_g12"] = distribution_to_text(*s.prior_g12);
    j["prior_g21"] = distribution_to_text(*s.prior_g21);
    emit_json("two_sided.json", j);
    if (s.grid_scan) {
      const std::vector<double> cands =
          two_sided_candidates(s.game, *s.prior_g12, *s.prior_g21);
      std::ostringstream csv;
      csv << "kappa\n";
      for (double c : cands) csv << format_double(c) << '\n';
      emit("two_sided_candidates.csv", csv.str());
      note("fixed-point candidates = " + std::to_string(cands.size()));
    }
    note("kappa_hat = " + format_double(eq.kappa_hat));
    if (!eq.report.converged) {
      result.status = RunStatus::not_converged;
      result.errors.push_back(
          "two-sided fixed point did not converge (residual " +
          format_double(eq.report.residual) + " after " +
          std::to_string(eq.report.iterations) + " iterations)");
    }
  }

  void run_repeated() {
    RepeatedConfig cfg;
    cfg.horizon = s.horizon;
    cfg.params = s.game;
    cfg.g12 = *s.g12;
    cfg.g21 = *s.g21;
    cfg.prior_g21 = *s.prior_g21;
    cfg.seed = s.seed;
    const SimulationTrace trace = simulate(cfg);
    emit("trace.csv", simulation_trace_csv(trace));
    nlohmann::json j = trace_summary_json(trace);
    j["params"] = params_json(s.game);
    j["g12"] = *s.g12;
    j["g21"] = *s.g21;
    j["prior_g21"] = distribution_to_text(*s.prior_g21);
    j["seed"] = s.seed.value;
    emit_json("summary.json", j);
    note("deterrence_count = " + std::to_string(trace.deterrence_count));
    note("first_entry_t = " + std::to_string(trace.first_entry_t));
  }

  void run_sweep() {
    const SweepSpec& sw = *s.sweep;
    std::vector<double> grid(sw.points);
    for (int i = 0; i < sw.points; ++i) {
      const double f = static_cast<double>(i) / (sw.points - 1);
      grid[i] = sw.log_scale
                    ? std::exp(std::log(sw.from) +
                               f * (std::log(sw.to) - std::log(sw.from)))
                    : sw.from + f * (sw.to - sw.from);
    }
    std::ostringstream csv;
    csv << "variable,value,g_star,g12_tilde,d,rho";
    if (sw.inner == Mode::sbgi) {
      csv << ",primary_action,secondary_action,primary_payoff,"
             "secondary_payoff";
    } else if (sw.inner == Mode::sbgie) {
      csv << ",entry,entry_value,primary_action,secondary_action";
    } else {
      csv << ",first_entry_t,deterrence_count,primary_total,secondary_total,"
             "efficiency_ratio";
    }
    csv << '\n';

    std::vector<double> gstar_col, d_col;
    for (double v : grid) {
      Scenario row = s;
      if (sw.variable == "P") row.game.power_budget = v;
      else if (sw.variable == "N0") row.game.noise_density = v;
      else if (sw.variable == "k") row.game.power_cost_coeff = v;
      else if (sw.variable == "g12") row.g12 = v;
      else if (sw.variable == "g21") row.g21 = v;
      else if (sw.variable == "T") {
        row.horizon = std::max(1, static_cast<int>(std::lround(v)));
      }
      const double gs = g_star(row.game);
      const double gt = g12_tilde(row.game);
      double d = kNan;
      if (row.g12 && *row.g12 > 0.5) {
        try {
          d = entry_cutoff_d(row.game, *row.g12);
        } catch (const std::invalid_argument&) {
        }
      }
      const double rho = row.prior_g21 ? row.prior_g21->cdf(gs) : kNan;
      gstar_col.push_back(gs);
      d_col.push_back(d);
      csv << sw.variable << ',' << format_double(v) << ','
          << format_double(gs) << ',' << format_double(gt) << ','
          << format_double(d) << ',' << format_double(rho);
      if (sw.inner == Mode::sbgi) {
        const SbgiEquilibrium eq =
            sbgi_equilibrium(row.game, *row.g12, *row.g21);
        csv << ',' << to_label(eq.primary_action) << ','
            << to_label(eq.secondary_action) << ','
            << format_double(eq.primary_payoff) << ','
            << format_double(eq.secondary_payoff);
      } else if (sw.inner == Mode::sbgie) {
        const SbgiEEquilibrium eq =
            sbgie_equilibrium(row.game, *row.g12, *row.g21, *row.prior_g21);
        csv << ',' << to_label(eq.entry) << ','
            << format_double(eq.entry_value) << ','
            << (eq.post_entry ? to_label(eq.post_entry->primary_action) : "")
            << ','
            << (eq.post_entry ? to_label(eq.post_entry->secondary_action)
                              : "");
      } else {
        RepeatedConfig cfg;
        cfg.horizon = row.horizon;
        cfg.params = row.game;
        cfg.g12 = *row.g12;
        cfg.g21 = *row.g21;
        cfg.prior_g21 = *row.prior_g21;
        cfg.seed = s.seed;
        const SimulationTrace trace = simulate(cfg);
        csv << ',' << trace.first_entry_t << ',' << trace.deterrence_count
            << ',' << format_double(trace.primary_total) << ','
            << format_double(trace.secondary_total) << ','
            << format_double(trace.efficiency_ratio);
      }
      csv << '\n';
    }
    emit("sweep.csv", csv.str());

    // Threshold columns with a known monotone dependence on the swept
    // variable must come out monotone; anything else is an internal error.
    auto monotone = [](const std::vector<double>& col) {
      bool up = true, down = true;
      for (std::size_t i = 1; i < col.size(); ++i) {
        if (std::isnan(col[i - 1]) || std::isnan(col[i])) continue;
        if (col[i] > col[i - 1] + 1e-12) down = false;
        if (col[i] < col[i - 1] - 1e-12) up = false;
      }
      return up || down;
    };
    if ((sw.variable == "P" || sw.variable == "N0") && !monotone(gstar_col)) {
      throw std::runtime_error("sweep: g_star failed its monotonicity check");
    }
    if ((sw.variable == "k" || sw.variable == "g12") && !monotone(d_col)) {
      throw std::runtime_error(
          "sweep: entry cutoff failed its monotonicity check");
    }
    note("rows = " + std::to_string(sw.points));
  }
};

}  // namespace

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  Runner runner{s, out_dir, result, {}};
  runner.note(std::string("mode = ") + to_label(s.mode));
  runner.note("P = " + format_double(s.game.power_budget) +
              "  N0 = " + format_double(s.game.noise_density) +
              "  K = " + std::to_string(s.game.subchannels) +
              "  k = " + format_double(s.game.power_cost_coeff));
  try {
    std::filesystem::create_directories(out_dir);
    runner.note_thresholds();
    switch (s.mode) {
      case Mode::static_br: runner.run_static_br(); break;
      case Mode::bgi_verify: runner.run_bgi_verify(); break;
      case Mode::sbgi: runner.run_sbgi(); break;
      case Mode::sbgie: runner.run_sbgie(); break;
      case Mode::two_sided: runner.run_two_sided(); break;
      case Mode::repeated: runner.run_repeated(); break;
      case Mode::sweep: runner.run_sweep(); break;
    }
  } catch (const std::invalid_argument& e) {
    result.status = RunStatus::invalid;
    result.errors.push_back(e.what());
  } catch (const std::exception& e) {
    result.status = RunStatus::invalid;
    result.errors.push_back(e.what());
  }
  const auto stop = std::chrono::steady_clock::now();
  result.wall_seconds =
      std::chrono::duration<double>(stop - start).count();

  std::ostringstream report;
  for (const std::string& line : runner.lines) report << line << '\n';
  for (const std::string& path : result.outputs) {
    report << "wrote " << path << '\n';
  }
  report << "wall_seconds = " << result.wall_seconds << '\n';
  result.report_text = report.str();
  return result;
}

}  // namespace igames
