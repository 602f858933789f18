#ifndef VIRODYN_CLI_CONFIG_HPP
#define VIRODYN_CLI_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "virodyn/integrator.hpp"
#include "virodyn/model.hpp"

namespace virodyn::cli {

using nlohmann::json;

/// Any configuration problem: missing keys, wrong types, failed model
/// validation. Mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loads a JSON config file and applies `key.path=value` overrides in
/// order. Values parse as JSON when possible, otherwise as strings.
json load_config(const std::string& path,
                 const std::vector<std::string>& overrides);

/// Applies one `key.path=value` override in place.
void apply_override(json& cfg, const std::string& assignment);

// Typed extraction. All throw ConfigError with the offending key in the
// message.
double require_number(const json& cfg, const std::string& key);
double number_or(const json& cfg, const std::string& key, double fallback);
int int_or(const json& cfg, const std::string& key, int fallback);
std::string require_string(const json& cfg, const std::string& key);

/// Model parameters from the config root: exactly one of "model"
/// (dimensionless m, xi, gamma, K) or "dimensional" (r, K, beta, alpha,
/// d_I, d_V, optional rescale_by_K) must be present.
ModelParams model_from_config(const json& cfg);

/// State triple {"U":..,"I":..,"V":..} under `key`.
State state_from_config(const json& cfg, const std::string& key);

/// Integrator settings from the optional "integrator" object; absent keys
/// keep library defaults.
IntegratorConfig integrator_from_config(const json& cfg);

/// Injection schedule from an object {"D0":..,"n":..,"kappa":..,"t0":..}.
InjectionSchedule schedule_from_json(const json& j);

/// A sample grid: either an explicit JSON array of numbers or an object
/// {"lo":..,"hi":..,"n":..} expanded to n uniform samples.
std::vector<double> grid_from_json(const json& j, const std::string& key);

/// Number -> JSON with 12 significant digits (the file-format contract);
/// non-finite values map to null.
json jnum(double v);

json state_to_json(const State& s);

}  // namespace virodyn::cli

#endif
