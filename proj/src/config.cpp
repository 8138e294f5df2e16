#include "dnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dnls/errors.hpp"
#include "dnls/table.hpp"

namespace dnls {

namespace {

const std::vector<std::string> kKnownTables{"trajectory", "observers", "fields",   "mprofile",
                                            "classification", "sweep", "orderfit", "scenario"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_number(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(line, "malformed number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw ConfigError(line, "non-finite number '" + std::string(token) + "'");
  return value;
}

void require(bool ok, int line, const std::string& what) {
  if (!ok) throw ConfigError(line, what);
}

using Setter = std::function<void(RunConfig&, std::string_view, int)>;

void add_profile_keys(std::map<std::string, Setter>& keys, const std::string& prefix,
                      ProfileSpec RunConfig::*member) {
  keys[prefix + ".profile"] = [member](RunConfig& c, std::string_view v, int line) {
    if (v == "gaussian") {
      (c.*member).kind = ProfileSpec::Kind::gaussian;
    } else if (v == "zero") {
      (c.*member).kind = ProfileSpec::Kind::zero;
    } else {
      throw ConfigError(line, "profile must be 'gaussian' or 'zero', got '" + std::string(v) + "'");
    }
  };
  keys[prefix + ".amplitude"] = [member](RunConfig& c, std::string_view v, int line) {
    (c.*member).amplitude_re = parse_number(v, line);
  };
  keys[prefix + ".amplitude_im"] = [member](RunConfig& c, std::string_view v, int line) {
    (c.*member).amplitude_im = parse_number(v, line);
  };
  keys[prefix + ".width"] = [member](RunConfig& c, std::string_view v, int line) {
    const double w = parse_number(v, line);
    require(w > 0.0, line, "width must be positive");
    (c.*member).width = w;
  };
  keys[prefix + ".center"] = [member](RunConfig& c, std::string_view v, int line) {
    (c.*member).center = parse_number(v, line);
  };
  keys[prefix + ".wavenumber"] = [member](RunConfig& c, std::string_view v, int line) {
    (c.*member).wavenumber = parse_number(v, line);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> keys = [] {
    std::map<std::string, Setter> k;
    k["grid.n"] = [](RunConfig& c, std::string_view v, int line) {
      const double n = parse_number(v, line);
      require(n == std::floor(n) && n >= 16 && n <= 1 << 26, line, "grid.n must be an integer in [16, 2^26]");
      const auto count = static_cast<std::size_t>(n);
      require((count & (count - 1)) == 0, line, "grid.n = " + std::string(trim(v)) + " is not a power of two");
      c.n = count;
    };
    k["grid.length"] = [](RunConfig& c, std::string_view v, int line) {
      c.length = parse_number(v, line);
      require(c.length > 0.0, line, "grid.length must be positive");
    };
    k["time.dt"] = [](RunConfig& c, std::string_view v, int line) {
      c.dt = parse_number(v, line);
      require(c.dt > 0.0, line, "time.dt must be positive");
    };
    k["time.t_final"] = [](RunConfig& c, std::string_view v, int line) {
      c.t_final = parse_number(v, line);
      require(c.t_final >= 0.0, line, "time.t_final must be >= 0");
    };
    k["time.snapshot_ratio"] = [](RunConfig& c, std::string_view v, int line) {
      c.snapshot_ratio = parse_number(v, line);
      require(c.snapshot_ratio > 1.0, line, "time.snapshot_ratio must be > 1");
    };
    k["time.dt_growth_start"] = [](RunConfig& c, std::string_view v, int line) {
      c.dt_growth_start = parse_number(v, line);
      require(c.dt_growth_start >= 0.0, line, "time.dt_growth_start must be >= 0");
    };
    k["time.extra_snapshots"] = [](RunConfig& c, std::string_view v, int line) {
      c.extra_snapshots.clear();
      if (trim(v).empty()) return;
      for (auto item : split_list(v)) {
        const double t = parse_number(item, line);
        require(t >= 0.0, line, "snapshot times must be >= 0");
        c.extra_snapshots.push_back(t);
      }
    };
    k["time.observer_stride"] = [](RunConfig& c, std::string_view v, int line) {
      const double s = parse_number(v, line);
      require(s == std::floor(s) && s >= 0 && s <= 1e9, line, "time.observer_stride must be a non-negative integer");
      c.observer_stride = static_cast<int>(s);
    };
    add_profile_keys(k, "data.u1", &RunConfig::u1);
    add_profile_keys(k, "data.u2", &RunConfig::u2);
    k["epsilon"] = [](RunConfig& c, std::string_view v, int line) {
      c.epsilons.clear();
      for (auto item : split_list(v)) {
        const double e = parse_number(item, line);
        require(e >= 0.0, line, "epsilon must be >= 0");
        c.epsilons.push_back(e);
      }
    };
    k["analysis.threshold"] = [](RunConfig& c, std::string_view v, int line) {
      c.threshold = parse_number(v, line);
      require(c.threshold >= 0.0, line, "analysis.threshold must be >= 0 (0 = automatic)");
    };
    k["analysis.band_cut"] = [](RunConfig& c, std::string_view v, int line) {
      c.band_cut = parse_number(v, line);
      require(c.band_cut > 0.0, line, "analysis.band_cut must be positive");
    };
    k["outputs.directory"] = [](RunConfig& c, std::string_view v, int line) {
      require(!trim(v).empty(), line, "outputs.directory must not be empty");
      c.output_dir = std::string(trim(v));
    };
    k["outputs.tables"] = [](RunConfig& c, std::string_view v, int line) {
      c.tables.clear();
      if (trim(v).empty()) return;
      for (auto item : split_list(v)) {
        require(std::find(kKnownTables.begin(), kKnownTables.end(), item) != kKnownTables.end(), line,
                "unknown table '" + std::string(item) + "'");
        c.tables.emplace_back(item);
      }
    };
    return k;
  }();
  return keys;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

void write_profile(std::ostringstream& os, const std::string& prefix, const ProfileSpec& p) {
  os << prefix << ".profile = " << (p.kind == ProfileSpec::Kind::gaussian ? "gaussian" : "zero") << '\n'
     << prefix << ".amplitude = " << format_double(p.amplitude_re) << '\n'
     << prefix << ".amplitude_im = " << format_double(p.amplitude_im) << '\n'
     << prefix << ".width = " << format_double(p.width) << '\n'
     << prefix << ".center = " << format_double(p.center) << '\n'
     << prefix << ".wavenumber = " << format_double(p.wavenumber) << '\n';
}

}  // namespace

ScheduleSpec RunConfig::schedule_spec() const {
  return ScheduleSpec{dt, t_final, snapshot_ratio, dt_growth_start, extra_snapshots};
}

bool RunConfig::wants(std::string_view table) const {
  return std::find(tables.begin(), tables.end(), table) != tables.end();
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (seen.count(key) != 0) {
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                     std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    it->second(config, value, line_no);
  }

  // Cross-field checks are reported at the last line that touched the time section.
  int time_line = 0;
  for (const auto& [key, line] : seen) {
    if (key.rfind("time.", 0) == 0) time_line = std::max(time_line, line);
  }
  try {
    Schedule check(config.schedule_spec());
  } catch (const InvalidArgument& e) {
    throw ConfigError(time_line, e.what());
  }
  if (config.epsilons.empty()) throw ConfigError(seen.count("epsilon") ? seen["epsilon"] : 0, "no epsilon given");
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.detail(), path);
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid.n = " << c.n << '\n'
     << "grid.length = " << format_double(c.length) << '\n'
     << "time.dt = " << format_double(c.dt) << '\n'
     << "time.t_final = " << format_double(c.t_final) << '\n'
     << "time.snapshot_ratio = " << format_double(c.snapshot_ratio) << '\n'
     << "time.dt_growth_start = " << format_double(c.dt_growth_start) << '\n'
     << "time.extra_snapshots = " << join(c.extra_snapshots) << '\n'
     << "time.observer_stride = " << c.observer_stride << '\n';
  write_profile(os, "data.u1", c.u1);
  write_profile(os, "data.u2", c.u2);
  os << "epsilon = " << join(c.epsilons) << '\n'
     << "analysis.threshold = " << format_double(c.threshold) << '\n'
     << "analysis.band_cut = " << format_double(c.band_cut) << '\n'
     << "outputs.directory = " << c.output_dir << '\n'
     << "outputs.tables = ";
  for (std::size_t i = 0; i < c.tables.size(); ++i) os << (i > 0 ? ", " : "") << c.tables[i];
  os << '\n';
  return os.str();
}

ComplexField make_profile(const Grid& grid, const ProfileSpec& spec) {
  if (spec.kind == ProfileSpec::Kind::zero) return ComplexField(grid, Side::space);
  return gaussian_profile(grid, Complex{spec.amplitude_re, spec.amplitude_im}, spec.width, spec.center,
                          spec.wavenumber);
}

RunConfig scenario_config(Scenario scenario) {
  RunConfig c;
  c.n = 8192;
  c.length = 2048.0;
  const ProfileSpec unit{ProfileSpec::Kind::gaussian, 1.0, 0.0, 1.0, 0.0, 0.0};
  switch (scenario) {
    case Scenario::decoupled:
      c.t_final = 100.0;
      c.u1 = unit;
      c.u2.kind = ProfileSpec::Kind::zero;
      c.epsilons = {0.1};
      break;
    case Scenario::symmetric:
      c.u1 = unit;
      c.u2 = unit;
      c.epsilons = {0.2};
      break;
    case Scenario::generic:
      c.epsilons = {0.05, 0.0707, 0.1, 0.1414, 0.2};
      c.extra_snapshots = {50.0, 100.0, 200.0};
      break;
    case Scenario::A:
      // Frequency-separated packets centred at xi = +2 and xi = -2.
      c.u1 = ProfileSpec{ProfileSpec::Kind::gaussian, 1.0, 0.0, 1.5, 0.0, 2.0};
      c.u2 = ProfileSpec{ProfileSpec::Kind::gaussian, 1.0, 0.0, 1.5, 0.0, -2.0};
      c.epsilons = {0.2};
      break;
    case Scenario::B:
      c.u1 = unit;
      c.u2 = ProfileSpec{ProfileSpec::Kind::gaussian, 0.5, 0.0, 1.0, 0.0, 0.0};
      c.epsilons = {0.2};
      break;
  }
  return c;
}

Scenario parse_scenario(std::string_view name) {
  if (name == "A" || name == "a") return Scenario::A;
  if (name == "B" || name == "b") return Scenario::B;
  if (name == "symmetric") return Scenario::symmetric;
  if (name == "decoupled") return Scenario::decoupled;
  if (name == "generic") return Scenario::generic;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "' (expected A, B, symmetric, decoupled, generic)");
}

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::decoupled: return "decoupled";
    case Scenario::symmetric: return "symmetric";
    case Scenario::generic: return "generic";
    case Scenario::A: return "A";
    case Scenario::B: return "B";
  }
  return "?";
}

}  // namespace dnls
