#include "config.hpp"

#include <cmath>
#include <fstream>

#include "virodyn/csv.hpp"

namespace virodyn::cli {

json load_config(const std::string& path,
                 const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  for (const std::string& o : overrides) apply_override(cfg, o);
  return cfg;
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json* node = &cfg;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (part.empty()) throw ConfigError("empty key segment in: " + assignment);
    if (dot == std::string::npos) {
      json value = json::parse(raw, nullptr, false);
      if (value.is_discarded()) value = raw;  // plain string
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null()) {
      throw ConfigError("override path crosses a non-object: " + assignment);
    }
    start = dot + 1;
  }
}

double require_number(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing config key: " + key);
  if (!cfg.at(key).is_number()) throw ConfigError("config key must be a number: " + key);
  return cfg.at(key).get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number()) throw ConfigError("config key must be a number: " + key);
  return cfg.at(key).get<double>();
}

int int_or(const json& cfg, const std::string& key, int fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number_integer()) {
    throw ConfigError("config key must be an integer: " + key);
  }
  return cfg.at(key).get<int>();
}

std::string require_string(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing config key: " + key);
  if (!cfg.at(key).is_string()) throw ConfigError("config key must be a string: " + key);
  return cfg.at(key).get<std::string>();
}

ModelParams model_from_config(const json& cfg) {
  const bool has_dimless = cfg.contains("model");
  const bool has_dim = cfg.contains("dimensional");
  if (has_dimless == has_dim) {
    throw ConfigError(
        "exactly one of \"model\" and \"dimensional\" must be present");
  }
  try {
    if (has_dimless) {
      const json& m = cfg.at("model");
      ModelParams p;
      p.m = require_number(m, "m");
      p.xi = require_number(m, "xi");
      p.gamma = require_number(m, "gamma");
      p.K = number_or(m, "K", 100.0);
      p.validate();
      return p;
    }
    const json& d = cfg.at("dimensional");
    DimensionalParams dp;
    dp.r = require_number(d, "r");
    dp.K = require_number(d, "K");
    dp.beta = require_number(d, "beta");
    dp.alpha = require_number(d, "alpha");
    dp.d_I = require_number(d, "d_I");
    dp.d_V = require_number(d, "d_V");
    dp.validate();
    const bool rescale = d.value("rescale_by_K", false);
    return nondimensionalize(dp, rescale);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
}

State state_from_config(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing config key: " + key);
  const json& s = cfg.at(key);
  State st;
  st.U = require_number(s, "U");
  st.I = require_number(s, "I");
  st.V = require_number(s, "V");
  return st;
}

IntegratorConfig integrator_from_config(const json& cfg) {
  IntegratorConfig ic;
  if (!cfg.contains("integrator")) return ic;
  const json& j = cfg.at("integrator");
  ic.rel_tol = number_or(j, "rel_tol", ic.rel_tol);
  ic.abs_tol = number_or(j, "abs_tol", ic.abs_tol);
  ic.max_step = number_or(j, "max_step", ic.max_step);
  ic.floor = number_or(j, "floor", ic.floor);
  ic.absorb_total = number_or(j, "absorb_total", ic.absorb_total);
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid integrator settings: ") + e.what());
  }
  return ic;
}

InjectionSchedule schedule_from_json(const json& j) {
  InjectionSchedule s;
  s.D0 = require_number(j, "D0");
  s.n = int_or(j, "n", 1);
  s.kappa = number_or(j, "kappa", 0.0);
  s.t0 = number_or(j, "t0", 0.0);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid schedule: ") + e.what());
  }
  return s;
}

std::vector<double> grid_from_json(const json& j, const std::string& key) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const json& v : j) {
      if (!v.is_number()) throw ConfigError("grid entries must be numbers: " + key);
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError("grid must be non-empty: " + key);
    return out;
  }
  if (j.is_object()) {
    const double lo = require_number(j, "lo");
    const double hi = require_number(j, "hi");
    const int n = int_or(j, "n", 0);
    if (n < 1) throw ConfigError("grid needs n >= 1: " + key);
    if (n == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
  }
  throw ConfigError("grid must be an array or {lo,hi,n}: " + key);
}

json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return json::parse(format_double(v));
}

json state_to_json(const State& s) {
  return json{{"U", jnum(s.U)}, {"I", jnum(s.I)}, {"V", jnum(s.V)}};
}

}  // namespace virodyn::cli
