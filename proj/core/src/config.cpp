#include "sphereflow/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "sphereflow/errors.hpp"

namespace sphereflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

using KeyMap = std::map<std::string, std::string>;

KeyMap tokenize(const std::string& text) {
  KeyMap kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("config: duplicate key '" + key + "'");
  }
  return kv;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("config: key '" + key + "' has non-numeric value '" +
                      v + "'");
  return x;
}

long parse_int(const std::string& key, const std::string& v) {
  long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("config: key '" + key + "' has non-integer value '" +
                      v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config: key '" + key + "' must be true or false");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  KeyMap kv = tokenize(text);
  RunConfig cfg;

  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string{};
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("sim.L"); !v.empty()) cfg.L = int(parse_int("sim.L", v));
  if (auto v = take("sim.a"); !v.empty()) cfg.params.a = parse_double("sim.a", v);
  if (auto v = take("sim.omega"); !v.empty())
    cfg.params.omega = parse_double("sim.omega", v);
  if (auto v = take("sim.mu_s"); !v.empty())
    cfg.params.mu_s = parse_double("sim.mu_s", v);
  if (auto v = take("sim.dt"); !v.empty())
    cfg.params.dt = parse_double("sim.dt", v);
  if (auto v = take("sim.t_end"); !v.empty())
    cfg.params.t_end = parse_double("sim.t_end", v);
  if (auto v = take("sim.dealias"); !v.empty())
    cfg.params.dealias = parse_bool("sim.dealias", v);
  if (auto v = take("output.dir"); !v.empty()) cfg.output_dir = v;
  if (auto v = take("output.cadence"); !v.empty())
    cfg.cadence = int(parse_int("output.cadence", v));

  const std::string type = take("init.type");
  InitSpec& init = cfg.init;
  if (type.empty() || type == "equilibrium") {
    init.kind = InitSpec::Kind::equilibrium;
  } else if (type == "tilted_rotation") {
    init.kind = InitSpec::Kind::tilted_rotation;
  } else if (type == "mode") {
    init.kind = InitSpec::Kind::mode;
  } else if (type == "random") {
    init.kind = InitSpec::Kind::random;
  } else {
    throw ConfigError("config: unknown init.type '" + type + "'");
  }

  auto take_for = [&](const char* key, InitSpec::Kind k1,
                      InitSpec::Kind k2) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return {};
    if (init.kind != k1 && init.kind != k2)
      throw ConfigError(std::string("config: key '") + key +
                        "' is not valid for the chosen init.type");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  using K = InitSpec::Kind;
  if (auto v = take_for("init.c", K::equilibrium, K::tilted_rotation);
      !v.empty())
    init.c = parse_double("init.c", v);
  if (auto v = take_for("init.axis", K::tilted_rotation, K::tilted_rotation);
      !v.empty())
    init.axis = v;
  if (auto v = take_for("init.l", K::mode, K::mode); !v.empty())
    init.l = int(parse_int("init.l", v));
  if (auto v = take_for("init.m", K::mode, K::mode); !v.empty())
    init.m = int(parse_int("init.m", v));
  if (auto v = take_for("init.amplitude", K::mode, K::random); !v.empty())
    init.amplitude = parse_double("init.amplitude", v);
  if (auto v = take_for("init.seed", K::random, K::random); !v.empty())
    init.seed = unsigned(parse_int("init.seed", v));
  if (auto v = take_for("init.spectrum_slope", K::random, K::random);
      !v.empty())
    init.spectrum_slope = parse_double("init.spectrum_slope", v);
  bool lmax_given = false;
  if (auto v = take_for("init.lmax", K::random, K::random); !v.empty()) {
    init.lmax = int(parse_int("init.lmax", v));
    lmax_given = true;
  }

  if (!kv.empty())
    throw ConfigError("config: unknown key '" + kv.begin()->first + "'");

  if (cfg.L < 2) throw ConfigError("config: sim.L must be at least 2");
  if (!(cfg.params.a > 0.0)) throw ConfigError("config: sim.a must be > 0");
  if (!(cfg.params.dt > 0.0)) throw ConfigError("config: sim.dt must be > 0");
  if (cfg.params.t_end < 0.0)
    throw ConfigError("config: sim.t_end must be >= 0");
  if (cfg.params.mu_s < 0.0)
    throw ConfigError("config: sim.mu_s must be >= 0");
  if (cfg.cadence < 1)
    throw ConfigError("config: output.cadence must be >= 1");
  if (init.kind == K::tilted_rotation && init.axis != "x" &&
      init.axis != "y" && init.axis != "z")
    throw ConfigError("config: init.axis must be one of x, y, z");
  if (init.kind == K::mode) {
    if (init.l < 1 || init.l > cfg.L)
      throw ConfigError("config: init.l must satisfy 1 <= l <= sim.L");
    if (init.m < -init.l || init.m > init.l)
      throw ConfigError("config: init.m must satisfy |m| <= l");
  }
  if ((init.kind == K::mode || init.kind == K::random) &&
      !(init.amplitude > 0.0))
    throw ConfigError("config: init.amplitude must be > 0");
  if (init.kind == K::random) {
    if (!lmax_given) init.lmax = std::min(init.lmax, cfg.L);
    if (init.lmax < 1 || init.lmax > cfg.L)
      throw ConfigError("config: init.lmax must satisfy 1 <= lmax <= sim.L");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

SimState make_initial_state(const Model& model, const InitSpec& init) {
  const Grid& g = model.grid();
  SimState state;
  state.t = 0.0;
  using K = InitSpec::Kind;
  switch (init.kind) {
    case K::equilibrium: {
      SpectralScalar psi = model.killing().psi_z;
      for (auto& z : psi.c) z *= init.c;
      state.zeta = vorticity_from_stream(StreamFunction(psi));
      break;
    }
    case K::tilted_rotation: {
      const SpectralScalar& base = init.axis == "x" ? model.killing().psi_x
                                   : init.axis == "y" ? model.killing().psi_y
                                                      : model.killing().psi_z;
      SpectralScalar psi = base;
      for (auto& z : psi.c) z *= init.c;
      state.zeta = vorticity_from_stream(StreamFunction(psi));
      break;
    }
    case K::mode: {
      if (init.l < 1 || init.l > g.L || std::abs(init.m) > init.l)
        throw InvalidParameterError("make_initial_state: mode out of range");
      SpectralScalar zeta(g.L, g.radius);
      zeta.at(init.l, std::abs(init.m)) = init.amplitude;
      state.zeta = std::move(zeta);
      break;
    }
    case K::random: {
      SpectralScalar zeta(g.L, g.radius);
      std::mt19937 rng(init.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      const int lmax = std::min(init.lmax, g.L);
      for (int l = 1; l <= lmax; ++l) {
        const double w = init.amplitude * std::pow(double(l),
                                                   init.spectrum_slope);
        for (int m = 0; m <= l; ++m) {
          const double re = w * dist(rng);
          const double im = m == 0 ? 0.0 : w * dist(rng);
          zeta.at(l, m) = {re, im};
        }
      }
      state.zeta = std::move(zeta);
      break;
    }
  }
  return state;
}

}  // namespace sphereflow
