#include "zmhd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "zmhd/norms.hpp"
#include "zmhd/presets.hpp"
#include "zmhd/snapshot.hpp"

namespace zmhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

template <class T>
T parse_number(const std::string& word) {
  T value{};
  const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || end != word.data() + word.size()) throw ConfigError("not a number: '" + word + "'");
  return value;
}

bool parse_bool(const std::string& word) {
  if (word == "true" || word == "1") return true;
  if (word == "false" || word == "0") return false;
  throw ConfigError("not a boolean: '" + word + "'");
}

std::string single(const std::vector<std::string>& w) {
  if (w.size() != 1) throw ConfigError("expected one value");
  return w.front();
}

template <class T>
std::array<T, 3> triple(const std::vector<std::string>& w) {
  if (w.size() == 1) {
    const T v = parse_number<T>(w[0]);
    return {v, v, v};
  }
  if (w.size() == 3) return {parse_number<T>(w[0]), parse_number<T>(w[1]), parse_number<T>(w[2])};
  throw ConfigError("expected one or three values");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

template <class T>
std::string fmt_triple(const std::array<T, 3>& a) {
  if (a[0] == a[1] && a[1] == a[2]) return fmt(a[0]);
  return fmt(a[0]) + " " + fmt(a[1]) + " " + fmt(a[2]);
}

struct Key {
  std::function<void(RunConfig&, const std::vector<std::string>&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Key number(T RunConfig::*group, double T::*field) {
  return {[=](RunConfig& c, const auto& w) { (c.*group).*field = parse_number<double>(single(w)); },
          [=](const RunConfig& c) { return fmt((c.*group).*field); }};
}

Key integer(int PicardConfig::*field) {
  return {[=](RunConfig& c, const auto& w) { c.picard.*field = parse_number<int>(single(w)); },
          [=](const RunConfig& c) { return std::to_string(c.picard.*field); }};
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    k["A"] = number(&RunConfig::physics, &PhysicsConfig::A);
    k["gamma"] = number(&RunConfig::physics, &PhysicsConfig::gamma);
    k["mu"] = number(&RunConfig::physics, &PhysicsConfig::mu);
    k["lambda"] = number(&RunConfig::physics, &PhysicsConfig::lambda);
    k["T"] = number(&RunConfig::picard, &PicardConfig::T);
    k["dt"] = number(&RunConfig::picard, &PicardConfig::dt);
    k["tol"] = number(&RunConfig::picard, &PicardConfig::tol);
    k["damping"] = number(&RunConfig::picard, &PicardConfig::damping);
    k["sigma"] = number(&RunConfig::picard, &PicardConfig::sigma);
    k["q"] = number(&RunConfig::picard, &PicardConfig::q);
    k["cg_tol"] = number(&RunConfig::picard, &PicardConfig::cg_tol);
    k["max_sweeps"] = integer(&PicardConfig::max_sweeps);
    k["substeps"] = integer(&PicardConfig::substeps);
    k["cg_max_iters"] = integer(&PicardConfig::cg_max_iters);
    k["auto_damping"] = {[](RunConfig& c, const auto& w) { c.picard.auto_damping = parse_bool(single(w)); },
                         [](const RunConfig& c) { return std::string(c.picard.auto_damping ? "true" : "false"); }};
    k["mode"] = {[](RunConfig& c, const auto& w) {
                   const std::string m = single(w);
                   if (m == "global") {
                     c.picard.mode = PicardMode::Global;
                   } else if (m == "per-step") {
                     c.picard.mode = PicardMode::PerStep;
                   } else {
                     throw ConfigError("mode must be 'global' or 'per-step'");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.picard.mode == PicardMode::Global ? "global" : "per-step");
                 }};
    k["resolution"] = {[](RunConfig& c, const auto& w) { c.resolution = triple<int>(w); },
                       [](const RunConfig& c) { return fmt_triple(c.resolution); }};
    k["box_length"] = {[](RunConfig& c, const auto& w) { c.box_length = triple<double>(w); },
                       [](const RunConfig& c) { return fmt_triple(c.box_length); }};
    k["preset"] = {[](RunConfig& c, const auto& w) { c.preset = single(w); },
                   [](const RunConfig& c) { return c.preset; }};
    k["initial"] = {[](RunConfig& c, const auto& w) { c.initial = single(w); },
                    [](const RunConfig& c) { return c.initial.string(); }};
    k["output_dir"] = {[](RunConfig& c, const auto& w) { c.output_dir = single(w); },
                       [](const RunConfig& c) { return c.output_dir.string(); }};
    k["diagnostics_every"] = {[](RunConfig& c, const auto& w) { c.diagnostics_every = parse_number<int>(single(w)); },
                              [](const RunConfig& c) { return std::to_string(c.diagnostics_every); }};
    k["audit_tol"] = {[](RunConfig& c, const auto& w) { c.audit_tol = parse_number<double>(single(w)); },
                      [](const RunConfig& c) { return fmt(c.audit_tol); }};
    return k;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  try {
    physics.validate();
    picard.validate();
    require_q(picard.q);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (int a = 0; a < 3; ++a) {
    if (resolution[a] < Grid::kMinPointsPerAxis) {
      throw ConfigError("resolution must be at least " + std::to_string(Grid::kMinPointsPerAxis) + " per axis");
    }
    if (!(box_length[a] > 0.0)) throw ConfigError("box_length must be positive");
  }
  if (diagnostics_every < 1) throw ConfigError("diagnostics_every must be at least 1");
  if (!(audit_tol >= 0.0)) throw ConfigError("audit_tol must be non-negative");
  if (initial.empty()) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), preset) == names.end()) {
      throw ConfigError("unknown preset '" + preset + "'");
    }
    const double L = 2 * std::numbers::pi;
    if (box_length != std::array<double, 3>{L, L, L}) {
      throw ConfigError("presets are defined on the (2 pi)^3 box; set box_length to 6.283185307179586");
    }
  }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream is(text);
  std::set<std::string> seen;
  int line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    const std::vector<std::string> value = words(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path.string());
}

std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& [name, key] : keys()) {
    if (name == "initial" && cfg.initial.empty()) continue;
    os << name << " = " << key.get(cfg) << '\n';
  }
  return os.str();
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  out << format_config(cfg);
}

State initial_state(const RunConfig& cfg) {
  if (cfg.initial.empty()) return make_preset(cfg.preset, cfg.grid());
  State s(cfg.grid());
  try {
    s = load_snapshot(cfg.initial);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (s.grid().dims() != cfg.resolution || s.grid().lengths() != cfg.box_length) {
    throw ConfigError("snapshot " + cfg.initial.string() + " does not match the configured grid");
  }
  return s;
}

}  // namespace zmhd
