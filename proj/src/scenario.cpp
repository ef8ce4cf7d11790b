#include "nhqfi/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nhqfi/error.hpp"
#include "nhqfi/estimation.hpp"
#include "nhqfi/metric.hpp"

namespace nhqfi {

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorKind::config_error, msg); }

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) config_fail(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) config_fail(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) config_fail(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_fail(where + ": must be finite");
  return v;
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) config_fail(where + ": expected a string");
  return j.get<std::string>();
}

struct ParamSpec {
  const char* name;
  bool required;
  double fallback;
};

const std::vector<ParamSpec>& param_specs(const std::string& model) {
  static const std::vector<ParamSpec> gain_loss = {{"omega0", false, 0.0}, {"g", true, 0.0}, {"gamma", true, 0.0}};
  static const std::vector<ParamSpec> decaying = {{"omega", true, 0.0}, {"gamma", true, 0.0}};
  static const std::vector<ParamSpec> general = {
      {"r", false, 0.0}, {"s", true, 0.0}, {"tau", true, 0.0}, {"phi", false, 0.0}};
  if (model == "gain_loss") return gain_loss;
  if (model == "decaying_qubit") return decaying;
  if (model == "general2x2") return general;
  config_fail("unknown model '" + model + "' (expected gain_loss|decaying_qubit|general2x2)");
}

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    const double scale = std::max(std::abs(b[k]), 1e-300);
    worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

bool has(const std::vector<Formalism>& fs, Formalism f) {
  for (auto x : fs)
    if (x == f) return true;
  return false;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const Json& j) {
  reject_unknown(j,
                 {"description", "model", "params", "state", "grid", "formalisms", "outputs", "tolerances",
                  "me_rate_scale", "jump_dt", "qfi_parameter", "observables"},
                 "config");
  ScenarioConfig c;
  if (j.contains("description")) c.description = text(j["description"], "description");
  if (!j.contains("model")) config_fail("config: missing 'model'");
  c.model = text(j["model"], "model");
  const auto& specs = param_specs(c.model);

  const Json params = j.value("params", Json::object());
  std::set<std::string> allowed;
  for (const auto& s : specs) allowed.insert(s.name);
  reject_unknown(params, allowed, "params");
  for (const auto& s : specs) {
    if (params.contains(s.name)) {
      c.params[s.name] = number(params[s.name], std::string("params.") + s.name);
    } else if (s.required) {
      config_fail(std::string("params: missing '") + s.name + "' for model " + c.model);
    } else {
      c.params[s.name] = s.fallback;
    }
  }

  if (j.contains("state")) {
    reject_unknown(j["state"], {"theta", "x"}, "state");
    if (j["state"].contains("theta")) c.state.theta = number(j["state"]["theta"], "state.theta");
    if (j["state"].contains("x")) c.state.x = number(j["state"]["x"], "state.x");
  }
  if (j.contains("grid")) {
    reject_unknown(j["grid"], {"t_max", "points"}, "grid");
    if (j["grid"].contains("t_max")) c.t_max = number(j["grid"]["t_max"], "grid.t_max");
    if (j["grid"].contains("points")) {
      const Json& p = j["grid"]["points"];
      if (!p.is_number_integer() || p.get<long long>() < 1) config_fail("grid.points: expected a positive integer");
      c.points = p.get<std::size_t>();
    }
  }
  if (!j.contains("formalisms")) config_fail("config: missing 'formalisms'");
  if (!j["formalisms"].is_array()) config_fail("formalisms: expected an array");
  for (const auto& f : j["formalisms"]) {
    const Formalism parsed = formalism_from_string(text(f, "formalisms[]"));
    if (has(c.formalisms, parsed)) config_fail("formalisms: duplicate entry");
    c.formalisms.push_back(parsed);
  }
  if (j.contains("outputs")) c.outputs = text(j["outputs"], "outputs");
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    reject_unknown(t, {"trace_floor", "positivity", "hermiticity", "metric_pd"}, "tolerances");
    if (t.contains("trace_floor")) c.tolerances.trace_floor = number(t["trace_floor"], "tolerances.trace_floor");
    if (t.contains("positivity")) c.tolerances.positivity = number(t["positivity"], "tolerances.positivity");
    if (t.contains("hermiticity")) c.tolerances.hermiticity = number(t["hermiticity"], "tolerances.hermiticity");
    if (t.contains("metric_pd")) c.tolerances.metric_pd = number(t["metric_pd"], "tolerances.metric_pd");
  }
  if (j.contains("me_rate_scale") && !j["me_rate_scale"].is_null()) {
    c.me_rate_scale = number(j["me_rate_scale"], "me_rate_scale");
  }
  if (j.contains("jump_dt")) c.jump_dt = number(j["jump_dt"], "jump_dt");
  if (j.contains("qfi_parameter")) c.qfi_parameter = text(j["qfi_parameter"], "qfi_parameter");
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) config_fail("observables: expected an array");
    for (const auto& o : j["observables"]) {
      reject_unknown(o, {"name", "coefficients"}, "observables[]");
      NamedObservable n;
      n.name = o.contains("name") ? text(o["name"], "observables[].name") : "";
      if (!o.contains("coefficients") || !o["coefficients"].is_array() || o["coefficients"].size() != 4) {
        config_fail("observables[].coefficients: expected [a0, a1, a2, a3]");
      }
      n.a.a0 = number(o["coefficients"][0], "observables[].coefficients");
      n.a.a1 = number(o["coefficients"][1], "observables[].coefficients");
      n.a.a2 = number(o["coefficients"][2], "observables[].coefficients");
      n.a.a3 = number(o["coefficients"][3], "observables[].coefficients");
      c.observables.push_back(n);
    }
  } else {
    c.observables.push_back({"sigma_z", Observable{0.0, 0.0, 0.0, 1.0}});
  }
  c.validate();
  return c;
}

void ScenarioConfig::validate() const {
  if (formalisms.empty()) config_fail("formalisms: at least one of metric|norm|nj|me is required");
  if (!(t_max >= 0.0) || (points > 1 && t_max == 0.0)) config_fail("grid: need t_max > 0");
  if (points < 1) config_fail("grid.points: must be >= 1");
  if (!(jump_dt > 0.0)) config_fail("jump_dt: must be positive");
  if (qfi_parameter != "theta" && qfi_parameter != "x" && qfi_parameter != "none") {
    config_fail("qfi_parameter: expected theta|x|none");
  }
  if (me_rate_scale && *me_rate_scale < 0.0) config_fail("me_rate_scale: must be non-negative");
  if (model == "general2x2" && (has(formalisms, Formalism::me) || has(formalisms, Formalism::nj))) {
    config_fail("general2x2 has no master-equation parent: use formalisms metric and norm only");
  }
  if ((model == "gain_loss" || model == "decaying_qubit") && params.at("gamma") < 0.0) {
    config_fail("params.gamma: must be non-negative");
  }
  try {
    state.validate();
  } catch (const Error& e) {
    config_fail(std::string("state: ") + e.what());
  }
}

ScenarioConfig ScenarioConfig::parse(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    config_fail(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) config_fail("cannot open config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Json ScenarioConfig::to_json() const {
  Json j;
  j["description"] = description;
  j["model"] = model;
  Json p = Json::object();
  for (const auto& s : param_specs(model)) p[s.name] = params.at(s.name);
  j["params"] = p;
  j["state"] = {{"theta", state.theta}, {"x", state.x}};
  j["grid"] = {{"t_max", t_max}, {"points", points}};
  Json fs = Json::array();
  for (auto f : formalisms) fs.push_back(to_string(f));
  j["formalisms"] = fs;
  j["outputs"] = outputs;
  j["tolerances"] = {{"trace_floor", tolerances.trace_floor},
                     {"positivity", tolerances.positivity},
                     {"hermiticity", tolerances.hermiticity},
                     {"metric_pd", tolerances.metric_pd}};
  j["me_rate_scale"] = me_rate_scale ? Json(*me_rate_scale) : Json(nullptr);
  j["jump_dt"] = jump_dt;
  j["qfi_parameter"] = qfi_parameter;
  Json obs = Json::array();
  for (const auto& o : observables) {
    obs.push_back({{"name", o.name}, {"coefficients", {o.a.a0, o.a.a1, o.a.a2, o.a.a3}}});
  }
  j["observables"] = obs;
  return j;
}

std::string ScenarioConfig::emit() const { return to_json().dump(2) + "\n"; }

ModelParams ScenarioConfig::model_params() const {
  if (model == "gain_loss") return GainLossParams{params.at("omega0"), params.at("g"), params.at("gamma")};
  if (model == "decaying_qubit") return DecayingQubitParams{params.at("omega"), params.at("gamma")};
  return General2x2Params{params.at("r"), params.at("s"), params.at("tau"), params.at("phi")};
}

double ScenarioConfig::resolved_rate_scale() const {
  if (me_rate_scale) return *me_rate_scale;
  return model == "decaying_qubit" ? 4.0 : 2.0;
}

RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  RunResult result;
  const ModelParams mp = config.model_params();
  const ComplexMatrix h_tilde = model_matrix(mp);
  const std::vector<double> grid = uniform_grid(config.t_max, config.points);
  const DensityState rho0 = make_input_state(config.state);
  const auto& fs = config.formalisms;

  std::optional<OpenModel> open;
  if (const auto* gl = std::get_if<GainLossParams>(&mp)) {
    open = make_gain_loss_open(gl->omega0, gl->g, gl->gamma, config.resolved_rate_scale());
  } else if (const auto* dq = std::get_if<DecayingQubitParams>(&mp)) {
    open = make_decaying_qubit(dq->omega, dq->gamma, config.resolved_rate_scale()).second;
  }

  Json& summary = result.summary;
  summary["model"] = config.model;
  const Region region = classify_region(h_tilde);
  summary["region"] = to_string(region);
  {
    const Spectrum s = eig_general(h_tilde);
    Json ev = Json::array();
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      ev.push_back(Json::array({s.eigenvalues(k).real(), s.eigenvalues(k).imag()}));
    }
    summary["eigenvalues"] = ev;
  }

  // Normalized (tilde-frame) trajectory: needed for norm output and for the
  // metric-trace check.
  const bool need_tilde = has(fs, Formalism::norm) || has(fs, Formalism::metric);
  StateTrajectory tilde;
  if (need_tilde) {
    tilde = evolve_normalized(h_tilde, rho0, grid, NormalizedOptions{config.tolerances.trace_floor});
  }

  std::optional<ComplexMatrix> h_metric;
  if (has(fs, Formalism::metric)) {
    Json m;
    MetricTrajectory eta_traj;
    const HermitizeOptions hopt{config.tolerances.hermiticity, 30};
    if (region == Region::hermitian_real) {
      eta_traj = MetricTrajectory::from_static(MetricOperator(identity(2)), grid);
      m["kind"] = "identity";
    } else if (region == Region::nonhermitian_real) {
      const MetricOperator eta = biorthogonal_metric(h_tilde);
      eta_traj = MetricTrajectory::from_static(eta, grid);
      m["kind"] = "static_biorthogonal";
      m["eta"] = matrix_json(eta.eta());
      m["pseudo_hermiticity_residual"] = pseudo_hermiticity_residual(h_tilde, eta);
    } else {
      MetricOdeOptions opt;
      opt.pd_tol = config.tolerances.metric_pd;
      eta_traj = solve_metric_ode(h_tilde, MetricOperator(identity(2), grid.front()), grid, opt);
      m["kind"] = "time_dependent";
      m["eta_final"] = matrix_json(eta_traj.metrics.back().eta());
    }
    h_metric = hermitize(h_tilde, eta_traj, 0, hopt);
    m["hermitized_generator"] = matrix_json(*h_metric);
    if (!eta_traj.constant && grid.size() > 1) {
      double drift = 0.0;
      const std::size_t stride = std::max<std::size_t>(1, grid.size() / 10);
      for (std::size_t k = stride; k < grid.size(); k += stride) {
        drift = std::max(drift, norm(hermitize(h_tilde, eta_traj, k, hopt) - *h_metric));
      }
      m["hermitized_generator_drift"] = drift;
    }
    double eta_trace_dev = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double w = (eta_traj.metrics[k].eta() * tilde.states[k].matrix).trace().real() * tilde.raw_traces[k];
      eta_trace_dev = std::max(eta_trace_dev, std::abs(w - 1.0));
    }
    m["eta_trace_max_deviation"] = eta_trace_dev;
    summary["metric"] = m;
    result.trajectories[Formalism::metric] = evolve_metric(*h_metric, rho0, grid);
  }

  if (has(fs, Formalism::norm)) {
    Json n;
    n["nonlinear_eom_residual"] = nonlinear_eom_residual(h_tilde, tilde);
    double tmin = tilde.raw_traces.front(), tmax = tmin;
    for (double r : tilde.raw_traces) tmin = std::min(tmin, r), tmax = std::max(tmax, r);
    n["raw_trace_min"] = tmin;
    n["raw_trace_max"] = tmax;
    std::vector<double> closed;
    if (const auto* gl = std::get_if<GainLossParams>(&mp); gl && gl->g * gl->g > gl->gamma * gl->gamma) {
      for (double t : grid) closed.push_back(catalog::gain_loss_trace(*gl, config.state, t));
    } else if (const auto* dq = std::get_if<DecayingQubitParams>(&mp)) {
      for (double t : grid) closed.push_back(catalog::decaying_trace(*dq, config.state, t));
    }
    if (!closed.empty()) n["trace_closed_form_max_rel_deviation"] = max_rel_diff(tilde.raw_traces, closed);
    summary["normalized"] = n;
    result.trajectories[Formalism::norm] = tilde;
  }

  if (has(fs, Formalism::nj)) {
    // A scalar -ic 1 in H_eff only rescales rho~ by e^{-2ct}; it is removed
    // before propagation so the trace floor sees the state-dependent decay
    // alone, and restored in the recorded raw traces.
    const ComplexMatrix h_eff = effective_hamiltonian(*open);
    const double c = -h_eff.trace().imag() / static_cast<double>(h_eff.rows());
    StateTrajectory nj = evolve_normalized(h_eff + kI * c * identity(h_eff.rows()), rho0, grid,
                                           NormalizedOptions{config.tolerances.trace_floor});
    for (std::size_t k = 0; k < grid.size(); ++k) nj.raw_traces[k] *= std::exp(-2.0 * c * grid[k]);
    result.trajectories[Formalism::nj] = std::move(nj);
  }

  if (has(fs, Formalism::me)) {
    LindbladOptions lopt;
    lopt.positivity_tol = config.tolerances.positivity;
    result.trajectories[Formalism::me] = evolve_lindblad(*open, rho0, grid, lopt);
    Json me;
    me["rate_scale"] = config.resolved_rate_scale();
    me["jump_operator"] = matrix_json(open->jumps.front());
    try {
      const DensityState ss = steady_state(*open);
      me["steady_state"] = matrix_json(ss.matrix);
      me["steady_state_vs_final_state"] = norm(ss.matrix - result.trajectories[Formalism::me].states.back().matrix);
      if (const auto* gl = std::get_if<GainLossParams>(&mp); gl && gl->g * gl->g > gl->gamma * gl->gamma) {
        const double g = gl->g, gm = gl->gamma;
        ComplexMatrix printed(2, 2);
        printed << 1.0, -kI * gm / g, kI * gm / g, 1.0 + (gm / g) * (gm / g);
        printed *= g * g / (2.0 * (g * g - gm * gm));
        me["printed_steady_state_trace"] = printed.trace().real();
        printed /= printed.trace().real();
        me["printed_steady_state_deviation"] = norm(printed - ss.matrix);
      }
    } catch (const Error& e) {
      me["steady_state"] = nullptr;
      me["steady_state_error"] = e.what();
    }
    summary["master_equation"] = me;
  }

  // QFI series.
  QfiTable& q = result.qfi;
  q.t = grid;
  double tau_divisor = 1.0;
  if (const auto* gl = std::get_if<GainLossParams>(&mp); gl && gl->g * gl->g > gl->gamma * gl->gamma) {
    tau_divisor = 2.0 * std::sqrt(gl->g * gl->g - gl->gamma * gl->gamma);
  } else if (const auto* dq = std::get_if<DecayingQubitParams>(&mp); dq && dq->gamma > 0.0) {
    tau_divisor = dq->gamma;
  }
  for (double t : grid) q.tau.push_back(t / tau_divisor);
  const std::vector<double> nan_column(grid.size(), std::nan(""));
  q.metric = q.norm = q.me = q.nj = nan_column;
  if (config.qfi_parameter != "none") {
    const StateParam which = config.qfi_parameter == "theta" ? StateParam::theta : StateParam::x;
    if (has(fs, Formalism::metric)) q.metric = qfi_vs_time(MetricChannel{*h_metric}, config.state, which, grid);
    if (has(fs, Formalism::norm)) q.norm = qfi_vs_time(NormalizedChannel{h_tilde}, config.state, which, grid);
    if (has(fs, Formalism::me)) q.me = qfi_vs_time(LindbladChannel{*open}, config.state, which, grid);
    if (has(fs, Formalism::nj)) {
      q.nj = qfi_vs_time(NoJumpChannel{*open, config.jump_dt}, config.state, which, grid);
    }

    Json qs;
    qs["parameter"] = config.qfi_parameter;
    qs["tau_divisor"] = tau_divisor;
    const bool mixed = config.state.theta * (1.0 - config.state.theta) - config.state.x * config.state.x > 0.0;
    if (which == StateParam::theta && mixed) {
      const double fm = catalog::metric(config.state);
      qs["F_metric_closed_form"] = fm;
      if (has(fs, Formalism::metric)) {
        qs["F_metric_max_abs_deviation"] = max_abs_diff(q.metric, std::vector<double>(grid.size(), fm));
      }
      if (has(fs, Formalism::norm) && has(fs, Formalism::metric)) {
        std::vector<double> scaled;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          scaled.push_back(q.metric[k] / (tilde.raw_traces[k] * tilde.raw_traces[k]));
        }
        qs["norm_scaling_max_rel_deviation"] = max_rel_diff(q.norm, scaled);
      }
      if (const auto* gl = std::get_if<GainLossParams>(&mp);
          gl && gl->g * gl->g > gl->gamma * gl->gamma && has(fs, Formalism::norm)) {
        std::vector<double> printed;
        for (double t : grid) printed.push_back(catalog::gain_loss_norm_printed(*gl, config.state, t));
        qs["printed_norm_max_rel_deviation"] = max_rel_diff(printed, q.norm);
      }
      if (const auto* dq = std::get_if<DecayingQubitParams>(&mp)) {
        if (has(fs, Formalism::norm)) {
          std::vector<double> closed;
          for (double t : grid) closed.push_back(catalog::decaying_norm(*dq, config.state, t));
          qs["norm_closed_form_max_rel_deviation"] = max_rel_diff(q.norm, closed);
        }
        if (has(fs, Formalism::me) && config.resolved_rate_scale() == 4.0) {
          std::vector<double> printed, rescaled;
          for (double t : grid) {
            printed.push_back(catalog::decaying_me_printed(*dq, config.state, t));
            rescaled.push_back(catalog::decaying_me(*dq, config.state, t));
          }
          qs["me_printed_max_abs_deviation"] = max_abs_diff(q.me, printed);
          qs["me_rescaled_max_abs_deviation"] = max_abs_diff(q.me, rescaled);
        }
      }
    }
    summary["qfi"] = qs;
  }

  // Expectation values.
  for (const auto& obs : config.observables) {
    for (auto f : fs) {
      const std::vector<double> v = expect(f, result.trajectories.at(f), obs.a);
      for (std::size_t k = 0; k < grid.size(); ++k) result.expectations.push_back({grid[k], f, obs.a, v[k]});
    }
  }
  if (const auto* dq = std::get_if<DecayingQubitParams>(&mp); dq && config.resolved_rate_scale() == 4.0) {
    Json ex = Json::object();
    for (const auto& obs : config.observables) {
      Json per = Json::object();
      for (auto f : fs) {
        if (f == Formalism::nj) continue;
        const std::vector<double> v = expect(f, result.trajectories.at(f), obs.a);
        double worst = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const ExpectationTriple c = closed_form_expectations(obs.a, config.state.theta, config.state.x, dq->omega,
                                                               dq->gamma, grid[k]);
          const double ref = f == Formalism::metric ? c.metric : f == Formalism::norm ? c.norm : c.me;
          worst = std::max(worst, std::abs(v[k] - ref));
        }
        per[to_string(f)] = worst;
      }
      ex[obs.name] = per;
    }
    summary["closed_form_expectation_max_abs_deviation"] = ex;
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    auto open_file = [&](const std::string& name) {
      const std::filesystem::path p = out_dir / name;
      std::ofstream out(p, std::ios::binary);
      if (!out) throw Error(ErrorKind::config_error, "cannot write " + p.string());
      result.files.push_back(p);
      return out;
    };
    for (auto f : fs) {
      auto out = open_file(std::string("trajectory_") + to_string(f) + ".csv");
      write_trajectory_csv(out, result.trajectories.at(f));
    }
    if (config.qfi_parameter != "none") {
      auto out = open_file("qfi.csv");
      write_qfi_csv(out, q);
    }
    {
      auto out = open_file("expectations.csv");
      write_expectation_csv(out, result.expectations);
    }
    Json files = Json::array();
    for (const auto& p : result.files) files.push_back(p.filename().string());
    files.push_back("summary.json");
    summary["files"] = files;
    summary["config"] = config.to_json();
    auto out = open_file("summary.json");
    out << summary.dump(2) << '\n';
  }
  return result;
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6"}; }

ScenarioConfig preset(const std::string& figure) {
  ScenarioConfig c;
  c.formalisms = {Formalism::metric, Formalism::norm, Formalism::me, Formalism::nj};
  c.observables = {{"sigma_z", Observable{0.0, 0.0, 0.0, 1.0}}};
  if (figure == "fig3" || figure == "fig4") {
    c.model = "gain_loss";
    c.params = {{"omega0", 0.0}, {"g", 0.5}, {"gamma", 0.4}};
    c.state = {0.6, 0.24};
    if (figure == "fig3") {
      c.description = "Gain-loss qubit: Bloch trajectories of the metric, normalized and master-equation states";
      c.t_max = 20.0;
      c.points = 2001;
    } else {
      c.description = "Gain-loss qubit: QFI for theta over two periods of the normalized trace";
      c.t_max = 40.0;
      c.points = 4001;
    }
  } else if (figure == "fig5" || figure == "fig6") {
    c.model = "decaying_qubit";
    c.params = {{"omega", 0.5}, {"gamma", 0.4}};
    c.t_max = 20.0;
    c.points = 2001;
    if (figure == "fig5") {
      c.description = "Decaying qubit: Bloch trajectories";
      c.state = {0.4, 0.24};
    } else {
      c.description = "Decaying qubit: QFI for theta and <sigma_z>";
      c.state = {0.4, 0.0};
    }
  } else {
    config_fail("unknown figure '" + figure + "' (expected fig3|fig4|fig5|fig6)");
  }
  c.outputs = figure;
  c.validate();
  return c;
}

std::vector<ScenarioConfig> expand_sweep(const Json& j) {
  if (!j.is_object()) config_fail("sweep: expected an object");
  struct Axis {
    std::string section, key;
    std::vector<Json> values;
  };
  std::vector<Axis> axes;
  for (const char* section : {"params", "state"}) {
    if (!j.contains(section) || !j[section].is_object()) continue;
    for (const auto& item : j[section].items()) {
      if (!item.value().is_array()) continue;
      if (item.value().empty()) config_fail(std::string("sweep: empty value list for ") + section + "." + item.key());
      axes.push_back({section, item.key(), std::vector<Json>(item.value().begin(), item.value().end())});
    }
  }
  std::vector<ScenarioConfig> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    Json point = j;
    for (std::size_t a = 0; a < axes.size(); ++a) point[axes[a].section][axes[a].key] = axes[a].values[idx[a]];
    out.push_back(ScenarioConfig::from_json(point));
    // Advance the last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].values.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace nhqfi
