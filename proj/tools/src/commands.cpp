#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include "virodyn/continuation.hpp"
#include "virodyn/csv.hpp"
#include "virodyn/protocol.hpp"
#include "virodyn/stability.hpp"

namespace virodyn::cli {

namespace fs = std::filesystem;

namespace {

/// Collects output files and writes the closing manifest.json; every
/// command funnels its emissions through one of these.
class Emitter {
 public:
  Emitter(const std::string& command, const json& cfg)
      : command_(command),
        cfg_(cfg),
        dir_(cfg.value("output", ".")),
        start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir_.string());
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    outputs_.push_back(name);
    return out;
  }

  void write_json(const std::string& name, const json& j) {
    std::ofstream out = open(name);
    out << j.dump(2) << '\n';
  }

  /// Extra top-level manifest fields (result summaries).
  json& extra() { return extra_; }

  void finish() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    json manifest{
        {"command", command_},
        {"version", kVersion},
        {"config", cfg_},
        {"outputs", outputs_},
        {"wall_clock_seconds",
         jnum(std::chrono::duration<double>(elapsed).count())},
    };
    for (auto& [k, v] : extra_.items()) manifest[k] = v;
    std::ofstream out(dir_ / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest.json");
    out << manifest.dump(2) << '\n';
  }

 private:
  std::string command_;
  json cfg_;
  fs::path dir_;
  std::vector<std::string> outputs_;
  json extra_ = json::object();
  std::chrono::steady_clock::time_point start_;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double require_positive(const json& cfg, const std::string& key) {
  const double v = require_number(cfg, key);
  if (!(v > 0.0)) throw ConfigError("config key must be positive: " + key);
  return v;
}

ContinuationParam param_from_config(const json& cfg, const std::string& key) {
  const auto p = parse_continuation_param(require_string(cfg, key));
  if (!p) throw ConfigError("config key must be one of m, xi, gamma: " + key);
  return *p;
}

json report_to_json(const OutcomeReport& rep) {
  json j{
      {"outcome", lower(to_string(rep.outcome))},
      {"final_state", state_to_json(rep.final_state)},
      {"finalU", jnum(rep.final_state.U)},
      {"maxU", jnum(rep.max_U)},
      {"minU", jnum(rep.min_U)},
  };
  if (rep.cycle) {
    j["cycle"] = json{{"Umax", jnum(rep.cycle->U_max)},
                      {"Umin", jnum(rep.cycle->U_min)},
                      {"period", jnum(rep.cycle->period)}};
  }
  return j;
}

json bifurcation_to_json(const BifurcationPoint& bp) {
  json j{
      {"kind", to_string(bp.kind)},
      {"param1", to_string(bp.param1)},
      {"value1", jnum(bp.value1)},
      {"criticality", to_string(bp.criticality)},
  };
  if (bp.param2) {
    j["param2"] = to_string(*bp.param2);
    j["value2"] = jnum(bp.value2);
  }
  if (bp.omega != 0.0) j["omega"] = jnum(bp.omega);
  return j;
}

}  // namespace

int cmd_simulate(const json& cfg) {
  Emitter em("simulate", cfg);
  const ModelParams p = model_from_config(cfg);
  const State s0 = state_from_config(cfg, "initial");
  const IntegratorConfig ic = integrator_from_config(cfg);
  const double horizon = require_positive(cfg, "horizon");

  std::optional<InjectionSchedule> sched;
  if (cfg.contains("schedule")) sched = schedule_from_json(cfg.at("schedule"));

  Trajectory traj;
  const OutcomeReport rep = integrate_to_outcome(
      p, s0, ic, horizon, sched ? &*sched : nullptr, &traj);

  {
    std::ofstream out = em.open("trajectory.csv");
    write_trajectory_csv(out, traj);
  }
  if (sched) {
    std::ofstream out = em.open("events.csv");
    write_events_csv(out, traj);
  }
  em.write_json("summary.json", report_to_json(rep));
  em.extra()["outcome"] = lower(to_string(rep.outcome));
  em.finish();
  return 0;
}

int cmd_equilibria(const json& cfg) {
  Emitter em("equilibria", cfg);
  const ModelParams p = model_from_config(cfg);

  json list = json::array();
  for (const Equilibrium& e : equilibria(p)) {
    json ev = json::array();
    for (const auto& l : e.eigenvalues) {
      ev.push_back(json{{"re", jnum(l.real())}, {"im", jnum(l.imag())}});
    }
    list.push_back(json{
        {"kind", to_string(e.kind)},
        {"state", state_to_json(e.state)},
        {"eigenvalues", ev},
        {"classification", to_string(e.classification)},
        {"physical", e.physical},
    });
  }
  em.write_json("equilibria.json", json{{"equilibria", list}});
  em.finish();
  return 0;
}

int cmd_region(const json& cfg) {
  Emitter em("region", cfg);
  if (!cfg.contains("m") || !cfg.contains("xi") || !cfg.contains("gamma")) {
    throw ConfigError("region requires m, xi and gamma grids");
  }
  const auto ms = grid_from_json(cfg.at("m"), "m");
  const auto xis = grid_from_json(cfg.at("xi"), "xi");
  const auto gammas = grid_from_json(cfg.at("gamma"), "gamma");
  const double K = number_or(cfg, "K", 100.0);

  auto samples = scan_region(ms, xis, gammas, K);

  // Optional slice: keep only samples whose equilibrium tumour burden
  // falls in [lo, hi].
  if (cfg.contains("Ustar_interval")) {
    const json& iv = cfg.at("Ustar_interval");
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() ||
        !iv[1].is_number()) {
      throw ConfigError("Ustar_interval must be [lo, hi]");
    }
    const double lo = iv[0].get<double>(), hi = iv[1].get<double>();
    std::erase_if(samples, [&](const RegionSample& s) {
      return s.Ustar < lo || s.Ustar > hi;
    });
  }

  {
    std::ofstream out = em.open("region.csv");
    write_region_csv(out, samples);
  }

  if (cfg.contains("contour")) {
    const json& c = cfg.at("contour");
    const double U_T = require_positive(c, "U_T");
    const auto cms = grid_from_json(c.at("m"), "contour.m");
    const auto cgs = grid_from_json(c.at("gamma"), "contour.gamma");
    std::vector<ContourPoint> pts;
    for (double m : cms) {
      for (double g : cgs) {
        pts.push_back({m, g, U_T, threshold_contour(m, g, K, U_T)});
      }
    }
    std::ofstream out = em.open("contour.csv");
    write_contour_csv(out, pts);
  }
  em.finish();
  return 0;
}

int cmd_branch(const json& cfg) {
  Emitter em("branch", cfg);
  const ModelParams p = model_from_config(cfg);
  const ContinuationParam param = param_from_config(cfg, "param");
  const double lo = require_number(cfg, "lo");
  const double hi = require_number(cfg, "hi");
  if (!(hi > lo)) throw ConfigError("branch range needs hi > lo");

  ContinuationOptions opts;
  if (cfg.contains("continuation")) {
    const json& c = cfg.at("continuation");
    opts.ds_min = number_or(c, "ds_min", opts.ds_min);
    opts.ds_max = number_or(c, "ds_max", opts.ds_max);
    opts.ds0 = number_or(c, "ds0", opts.ds0);
    opts.newton_tol = number_or(c, "newton_tol", opts.newton_tol);
    opts.newton_max_iter = int_or(c, "newton_max_iter", opts.newton_max_iter);
    opts.max_points = int_or(c, "max_points", opts.max_points);
    if (c.contains("classify_hopf") && c.at("classify_hopf").is_boolean()) {
      opts.classify_hopf_points = c.at("classify_hopf").get<bool>();
    }
  }

  const Branch branch =
      continue_equilibrium(p, EquilibriumKind::Coexistence, param, lo, hi, opts);
  {
    std::ofstream out = em.open("branch.csv");
    write_branch_csv(out, branch);
  }

  // Stability of the eradication branch over the same range, probed
  // dynamically; its flip point is reported alongside the equilibrium
  // branch's own singularities.
  std::vector<BifurcationPoint> bifs = branch.bifurcations;
  const int n_probe = int_or(cfg, "eradication_samples", 17);
  const EradicationScan scan =
      eradication_branch_stability(p, param, lo, hi, n_probe);
  {
    std::ofstream out = em.open("eradication.csv");
    write_eradication_scan_csv(out, scan);
  }
  if (scan.fold) bifs.push_back(*scan.fold);

  {
    std::ofstream out = em.open("bifurcations.csv");
    write_bifurcations_csv(out, bifs);
  }

  json jb = json::array();
  for (const BifurcationPoint& bp : bifs) jb.push_back(bifurcation_to_json(bp));
  em.extra()["bifurcations"] = jb;
  em.extra()["truncated"] = branch.truncated;
  if (!branch.note.empty()) em.extra()["note"] = branch.note;
  em.finish();
  return 0;
}

int cmd_hopf_curve(const json& cfg) {
  Emitter em("hopf-curve", cfg);
  const ModelParams p = model_from_config(cfg);
  const ContinuationParam sweep = param_from_config(cfg, "sweep");
  const ContinuationParam solve_for = param_from_config(cfg, "solve_for");
  if (sweep == solve_for) throw ConfigError("sweep and solve_for must differ");
  if (!cfg.contains("sweep_values")) throw ConfigError("missing config key: sweep_values");
  const auto values = grid_from_json(cfg.at("sweep_values"), "sweep_values");
  const double slo = number_or(cfg, "solve_lo", 1e-4);
  const double shi = number_or(cfg, "solve_hi", 1.0);
  if (!(shi > slo)) throw ConfigError("solve bracket needs solve_hi > solve_lo");

  const auto locus = hopf_locus(p, sweep, values, solve_for, slo, shi);
  {
    std::ofstream out = em.open("hopf_curve.csv");
    write_hopf_locus_csv(out, locus, sweep, solve_for);
  }

  std::vector<BifurcationPoint> bifs;
  if (cfg.contains("gh")) {
    const json& g = cfg.at("gh");
    const auto gh = generalized_hopf(p, sweep, require_number(g, "lo"),
                                     require_number(g, "hi"), solve_for, slo, shi);
    if (gh) bifs.push_back(*gh);
  }
  {
    std::ofstream out = em.open("bifurcations.csv");
    write_bifurcations_csv(out, bifs);
  }
  json jb = json::array();
  for (const BifurcationPoint& bp : bifs) jb.push_back(bifurcation_to_json(bp));
  em.extra()["bifurcations"] = jb;
  em.extra()["points"] = locus.size();
  em.finish();
  return 0;
}

int cmd_cycles(const json& cfg) {
  Emitter em("cycles", cfg);
  const ModelParams p = model_from_config(cfg);
  const ContinuationParam param = param_from_config(cfg, "param");
  const double lo = require_number(cfg, "lo");
  const double hi = require_number(cfg, "hi");
  const double step = require_positive(cfg, "step");
  const double horizon = number_or(cfg, "horizon", 20000.0);
  if (!(hi > lo)) throw ConfigError("cycles range needs hi > lo");

  const auto cycles =
      track_cycles(p, param, lo, hi, step, horizon, integrator_from_config(cfg));
  std::ofstream out = em.open("cycles.csv");
  write_cycles_csv(out, cycles);
  em.extra()["points"] = cycles.size();
  em.finish();
  return 0;
}

int cmd_protocol(const json& cfg) {
  Emitter em("protocol", cfg);
  const ModelParams p = model_from_config(cfg);
  const IntegratorConfig ic = integrator_from_config(cfg);

  if (cfg.contains("kappa_sweep")) {
    const json& k = cfg.at("kappa_sweep");
    const KappaSweepResult sweep = kappa_sweep(
        p, require_positive(k, "D0"), int_or(k, "n", 2),
        require_positive(k, "lo"), require_positive(k, "hi"),
        int_or(k, "count", 12), number_or(k, "horizon", 0.0), ic);
    {
      std::ofstream out = em.open("kappa_sweep.csv");
      write_kappa_sweep_csv(out, sweep);
    }
    json outcomes = json::array();
    for (const KappaRecord& r : sweep.records) {
      outcomes.push_back(json{{"kappa", jnum(r.kappa)},
                              {"outcome", lower(to_string(r.outcome))}});
    }
    em.write_json("summary.json",
                  json{{"baseline",
                        json{{"s0", state_to_json(sweep.s0)},
                             {"period", jnum(sweep.baseline_period)},
                             {"Umax", jnum(sweep.baseline_U_max)},
                             {"Umin", jnum(sweep.baseline_U_min)}}},
                       {"outcomes", outcomes}});
    em.finish();
    return 0;
  }

  if (!cfg.contains("schedule")) {
    throw ConfigError("protocol requires a schedule or kappa_sweep block");
  }
  const State s0 = state_from_config(cfg, "initial");
  const InjectionSchedule sched = schedule_from_json(cfg.at("schedule"));
  const double horizon = require_positive(cfg, "horizon");
  try {
    const ProtocolResult res = run_protocol(p, s0, sched, horizon, ic);
    {
      std::ofstream out = em.open("trajectory.csv");
      write_trajectory_csv(out, res.trajectory);
    }
    {
      std::ofstream out = em.open("events.csv");
      write_events_csv(out, res.trajectory);
    }
    json summary = report_to_json(res.report);
    summary["post_maxU"] = jnum(res.post_max_U);
    summary["post_minU"] = jnum(res.post_min_U);
    em.write_json("summary.json", summary);
    em.extra()["outcome"] = lower(to_string(res.report.outcome));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  em.finish();
  return 0;
}

int cmd_dosage_sweep(const json& cfg) {
  Emitter em("dosage-sweep", cfg);
  const ModelParams p = model_from_config(cfg);
  const auto records = dosage_sweep(
      p, require_positive(cfg, "U0"), require_number(cfg, "I0"),
      require_positive(cfg, "V0_lo"), require_positive(cfg, "V0_hi"),
      int_or(cfg, "steps", 11), number_or(cfg, "horizon", 20000.0),
      integrator_from_config(cfg));
  std::ofstream out = em.open("dosage_sweep.csv");
  write_dosage_sweep_csv(out, records);
  em.finish();
  return 0;
}

int cmd_basin(const json& cfg) {
  Emitter em("basin", cfg);
  const ModelParams p = model_from_config(cfg);
  if (!cfg.contains("U0") || !cfg.contains("V0")) {
    throw ConfigError("basin requires U0 and V0 grids");
  }
  const auto points = basin_slice(
      p, grid_from_json(cfg.at("U0"), "U0"), grid_from_json(cfg.at("V0"), "V0"),
      require_number(cfg, "I0"), number_or(cfg, "horizon", 20000.0),
      integrator_from_config(cfg));
  std::ofstream out = em.open("basin.csv");
  write_basin_csv(out, points);
  em.finish();
  return 0;
}

int cmd_repro(const std::string& out_dir) {
  const json base_model{{"m", 0.1}, {"xi", 0.01}, {"gamma", 0.1}, {"K", 100.0}};
  auto in_dir = [&](const std::string& name, json cfg) {
    cfg["output"] = out_dir + "/" + name;
    return cfg;
  };

  // The four dynamical regimes from a common initial condition.
  const std::vector<std::pair<std::string, double>> regimes{
      {"regime_coexistence", 0.01},
      {"regime_cycle", 0.06},
      {"regime_square_wave", 0.097},
      {"regime_eradication", 0.12},
  };
  for (const auto& [name, xi] : regimes) {
    json m = base_model;
    m["xi"] = xi;
    cmd_simulate(in_dir(name, json{{"model", m},
                                   {"initial", {{"U", 50.0}, {"I", 10.0}, {"V", 10.0}}},
                                   {"horizon", 30000.0}}));
  }

  cmd_equilibria(in_dir("equilibria", json{{"model", base_model}}));

  cmd_region(in_dir(
      "region",
      json{{"m", {{"lo", 0.02}, {"hi", 0.5}, {"n", 13}}},
           {"xi", {{"lo", 0.005}, {"hi", 0.2}, {"n", 14}}},
           {"gamma", json::array({0.1})},
           {"contour",
            {{"U_T", 40.657},
             {"m", {{"lo", 0.02}, {"hi", 0.5}, {"n", 13}}},
             {"gamma", json::array({0.05, 0.1, 0.2})}}}}));

  cmd_branch(in_dir("branch_xi", json{{"model", base_model},
                                      {"param", "xi"},
                                      {"lo", 0.005},
                                      {"hi", 0.2}}));
  {
    json m = base_model;
    m["gamma"] = 0.05;
    cmd_branch(in_dir("branch_gamma", json{{"model", m},
                                           {"param", "gamma"},
                                           {"lo", 0.005},
                                           {"hi", 0.5}}));
  }

  cmd_hopf_curve(in_dir(
      "hopf_curve",
      json{{"model", base_model},
           {"sweep", "m"},
           {"sweep_values", {{"lo", 0.01}, {"hi", 0.5}, {"n", 25}}},
           {"solve_for", "xi"},
           {"gh", {{"lo", 0.1}, {"hi", 0.5}}}}));

  cmd_cycles(in_dir("cycles", json{{"model", base_model},
                                   {"param", "xi"},
                                   {"lo", 0.045},
                                   {"hi", 0.095},
                                   {"step", 0.005}}));

  {
    json m = base_model;
    m["m"] = 0.2;
    m["xi"] = 0.06915;
    cmd_protocol(in_dir("kappa_sweep",
                        json{{"model", m},
                             {"kappa_sweep", {{"D0", 20.0},
                                              {"n", 2},
                                              {"lo", 5.0},
                                              {"hi", 110.0},
                                              {"count", 12}}}}));
  }

  {
    json m = base_model;
    m["m"] = 0.5;
    m["xi"] = 0.138;
    cmd_dosage_sweep(in_dir("dosage_sweep", json{{"model", m},
                                                 {"U0", 50.0},
                                                 {"I0", 10.0},
                                                 {"V0_lo", 20.0},
                                                 {"V0_hi", 200.0},
                                                 {"steps", 19}}));
    m["xi"] = 0.136;
    cmd_basin(in_dir("basin",
                     json{{"model", m},
                          {"U0", {{"lo", 20.0}, {"hi", 100.0}, {"n", 9}}},
                          {"V0", {{"lo", 5.0}, {"hi", 45.0}, {"n", 9}}},
                          {"I0", 10.0}}));
  }
  return 0;
}

}  // namespace virodyn::cli
