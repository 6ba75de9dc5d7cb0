#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "chainecho/errors.hpp"
#include "chainecho/experiment.hpp"
#include "chainecho/oracle.hpp"

namespace chainecho {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::EchoSeries: return "echo_series";
  case ExperimentKind::SaturationScan: return "saturation_scan";
  case ExperimentKind::RevivalScan: return "revival_scan";
  case ExperimentKind::OracleValidation: return "oracle_validation";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto k : {ExperimentKind::EchoSeries, ExperimentKind::SaturationScan,
                 ExperimentKind::RevivalScan, ExperimentKind::OracleValidation})
    if (text == to_string(k))
      return k;
  throw InvalidArgument("unknown experiment kind '" + std::string(text) + "'");
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string cache_key(const ChainSpec &spec) {
  std::string key = "N" + std::to_string(spec.n_sites);
  key += "_gamma" + format_double(spec.gamma);
  key += "_lambda" + format_double(spec.lambda);
  key += "_g" + format_double(spec.coupling);
  key += "_a" + std::to_string(ChainSpec::site_a);
  key += "_b" + std::to_string(spec.site_b);
  key += "_label" + std::string(to_string(spec.label));
  return key;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

struct Entry {
  std::vector<std::string> items;
  bool is_list = false;
  int line = 0;
};

class Reader {
public:
  Reader(std::string key, const Entry &e) : key_(std::move(key)), e_(e) {}

  [[noreturn]] void fail(const std::string &what) const { throw ConfigError(what, e_.line, key_); }

  const std::string &scalar() const {
    if (e_.is_list || e_.items.size() != 1)
      fail("'" + key_ + "' takes a single value");
    return e_.items.front();
  }

  double to_double(const std::string &s) const {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail("'" + s + "' is not a number");
    return v;
  }

  long long to_int(const std::string &s) const {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail("'" + s + "' is not an integer");
    return v;
  }

  double real() const { return to_double(scalar()); }
  int integer() const { return static_cast<int>(to_int(scalar())); }

  bool boolean() const {
    const std::string &s = scalar();
    if (s == "true" || s == "1" || s == "yes")
      return true;
    if (s == "false" || s == "0" || s == "no")
      return false;
    fail("'" + s + "' is not a boolean");
  }

  std::vector<double> reals() const {
    std::vector<double> out;
    for (const auto &s : e_.items)
      out.push_back(to_double(s));
    return out;
  }

  /// Integers; an item `a..b` expands to a, a+1, ..., b.
  std::vector<int> integers() const {
    std::vector<int> out;
    for (const auto &s : e_.items) {
      const auto dots = s.find("..");
      if (dots == std::string::npos) {
        out.push_back(static_cast<int>(to_int(s)));
        continue;
      }
      const auto lo = to_int(s.substr(0, dots));
      const auto hi = to_int(s.substr(dots + 2));
      if (hi < lo)
        fail("empty range '" + s + "'");
      for (auto v = lo; v <= hi; ++v)
        out.push_back(static_cast<int>(v));
    }
    return out;
  }

  const std::vector<std::string> &strings() const { return e_.items; }
  int line() const { return e_.line; }

private:
  std::string key_;
  const Entry &e_;
};

Entry parse_value(const std::string &raw, int line, const std::string &key) {
  Entry e;
  e.line = line;
  if (raw.empty())
    throw ConfigError("missing value for '" + key + "'", line, key);
  if (raw.front() == '[') {
    if (raw.back() != ']')
      throw ConfigError("unterminated list for '" + key + "'", line, key);
    e.is_list = true;
    const std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = unquote(trim(item));
      if (item.empty())
        throw ConfigError("empty item in list '" + key + "'", line, key);
      e.items.push_back(item);
    }
    if (e.items.empty())
      throw ConfigError("list '" + key + "' is empty", line, key);
    return e;
  }
  e.items.push_back(unquote(raw));
  return e;
}

void check_config(const ExperimentConfig &c, const std::map<std::string, int> &lines) {
  auto line_of = [&](const std::string &key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  auto require = [&](bool ok, const std::string &key, const std::string &what) {
    if (!ok)
      throw ConfigError(what, line_of(key), key);
  };
  require(!c.n_sites.empty() && !c.gamma.empty() && !c.lambda.empty() && !c.coupling.empty() &&
              !c.distance.empty() && !c.echo.empty(),
          "", "sweep lists must not be empty");
  require(c.t_max > 0.0, "t_max", "t_max must be positive");
  require(c.dt > 0.0 && c.dt <= c.t_max, "dt", "dt must be positive and at most t_max");
  require(c.workers >= 1, "workers", "workers must be at least 1");
  for (int n : c.n_sites) {
    require(n >= 2, "n_sites", "n_sites must be at least 2");
    for (int d : c.distance)
      require(d >= 0 && d < n, "distance", "distance must lie in [0, n_sites)");
  }
  for (double g : c.coupling)
    require(g >= 0.0, "coupling", "coupling must be non-negative");
  for (double l : c.lambda)
    require(std::isfinite(l), "lambda", "lambda must be finite");
  for (double g : c.gamma)
    require(std::isfinite(g), "gamma", "gamma must be finite");
  require(c.smoothing_window >= c.dt, "smoothing_window", "smoothing_window must be at least dt");
  require(c.prominence >= 0.0, "prominence", "prominence must be non-negative");
  require(c.oracle_cells >= 1, "oracle_cells", "oracle_cells must be at least 1");
  if (c.kind == ExperimentKind::OracleValidation)
    for (int n : c.n_sites)
      require(n <= kOracleMaxSites, "n_sites", "oracle validation supports at most 12 sites");
  if (c.state) {
    try {
      validate(*c.state);
    } catch (const InvalidArgument &e) {
      throw ConfigError(e.what(), line_of("state.p"), "state");
    }
  }
}

} // namespace

ExperimentConfig parse_config(std::istream &in) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  std::optional<BellFamilyState> state;
  std::string raw_line;
  int line_no = 0;

  while (std::getline(in, raw_line)) {
    ++line_no;
    const auto hash = raw_line.find('#');
    const std::string line = trim(std::string_view(raw_line).substr(0, hash));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty())
      throw ConfigError("missing key before '='", line_no);
    const Entry entry = parse_value(trim(std::string_view(line).substr(eq + 1)), line_no, key);
    const Reader r(key, entry);

    if (key != "note") {
      if (seen.count(key))
        throw ConfigError("duplicate key '" + key + "'", line_no, key);
      seen[key] = line_no;
    }

    try {
      if (key == "kind")
        c.kind = parse_experiment_kind(r.scalar());
      else if (key == "name")
        c.name = r.scalar();
      else if (key == "n_sites")
        c.n_sites = r.integers();
      else if (key == "gamma")
        c.gamma = r.reals();
      else if (key == "lambda")
        c.lambda = r.reals();
      else if (key == "coupling")
        c.coupling = r.reals();
      else if (key == "distance")
        c.distance = r.integers();
      else if (key == "echo") {
        c.echo.clear();
        for (const auto &s : r.strings())
          c.echo.push_back(parse_echo_kind(s));
      } else if (key == "t_max")
        c.t_max = r.real();
      else if (key == "dt")
        c.dt = r.real();
      else if (key.rfind("state.", 0) == 0) {
        if (!state)
          state = BellFamilyState{};
        if (key == "state.family") {
          const std::string &f = r.scalar();
          if (f == "phi")
            state->family = BellFamily::Phi;
          else if (f == "psi")
            state->family = BellFamily::Psi;
          else
            r.fail("state.family is 'phi' or 'psi'");
        } else if (key == "state.alpha")
          state->alpha = r.real();
        else if (key == "state.beta")
          state->beta = r.real();
        else if (key == "state.p")
          state->p = r.real();
        else
          r.fail("unknown key '" + key + "'");
      } else if (key == "smoothing_window")
        c.smoothing_window = r.real();
      else if (key == "prominence")
        c.prominence = r.real();
      else if (key == "fast_freq_hint")
        c.fast_freq_hint = r.real();
      else if (key == "saturation_tolerance")
        c.saturation_tolerance = r.real();
      else if (key == "free_shift")
        c.free_shift = r.boolean();
      else if (key == "oracle_cells")
        c.oracle_cells = r.integer();
      else if (key == "seed")
        c.seed = static_cast<std::uint64_t>(r.to_int(r.scalar()));
      else if (key == "oracle_tolerance")
        c.oracle_tolerance = r.real();
      else if (key == "output_dir")
        c.output_dir = r.scalar();
      else if (key == "cache_dir")
        c.cache_dir = std::filesystem::path(r.scalar());
      else if (key == "workers")
        c.workers = r.integer();
      else if (key == "plot")
        c.plot = r.boolean();
      else if (key == "note")
        c.assumptions.push_back(r.scalar());
      else
        r.fail("unknown key '" + key + "'");
    } catch (const InvalidArgument &e) {
      throw ConfigError(e.what(), line_no, key);
    }
  }
  c.state = state;
  check_config(c, seen);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

namespace {

template <typename T, typename F> std::string list(const std::vector<T> &v, F &&fmt) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

} // namespace

std::string to_text(const ExperimentConfig &c) {
  std::ostringstream out;
  const auto d = [](double v) { return format_double(v); };
  const auto i = [](int v) { return std::to_string(v); };
  out << "kind = " << to_string(c.kind) << '\n';
  out << "name = \"" << c.name << "\"\n";
  out << "n_sites = " << list(c.n_sites, i) << '\n';
  out << "gamma = " << list(c.gamma, d) << '\n';
  out << "lambda = " << list(c.lambda, d) << '\n';
  out << "coupling = " << list(c.coupling, d) << '\n';
  out << "distance = " << list(c.distance, i) << '\n';
  out << "echo = " << list(c.echo, [](EchoKind k) { return std::string(to_string(k)); }) << '\n';
  out << "t_max = " << d(c.t_max) << '\n';
  out << "dt = " << d(c.dt) << '\n';
  if (c.state) {
    out << "state.family = " << (c.state->family == BellFamily::Phi ? "phi" : "psi") << '\n';
    out << "state.alpha = " << d(c.state->alpha.real()) << '\n';
    out << "state.beta = " << d(c.state->beta.real()) << '\n';
    out << "state.p = " << d(c.state->p) << '\n';
  }
  out << "smoothing_window = " << d(c.smoothing_window) << '\n';
  out << "prominence = " << d(c.prominence) << '\n';
  out << "fast_freq_hint = " << d(c.fast_freq_hint) << '\n';
  out << "saturation_tolerance = " << d(c.saturation_tolerance) << '\n';
  out << "free_shift = " << (c.free_shift ? "true" : "false") << '\n';
  out << "oracle_cells = " << c.oracle_cells << '\n';
  out << "seed = " << c.seed << '\n';
  out << "oracle_tolerance = " << d(c.oracle_tolerance) << '\n';
  out << "output_dir = \"" << c.output_dir.string() << "\"\n";
  if (c.cache_dir)
    out << "cache_dir = \"" << c.cache_dir->string() << "\"\n";
  out << "workers = " << c.workers << '\n';
  out << "plot = " << (c.plot ? "true" : "false") << '\n';
  for (const auto &note : c.assumptions)
    out << "note = \"" << note << "\"\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig &config) {
  // Output location, cache and worker count do not change results.
  ExperimentConfig c = config;
  c.output_dir = "";
  c.cache_dir.reset();
  c.workers = 1;
  c.plot = false;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_text(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

} // namespace chainecho
