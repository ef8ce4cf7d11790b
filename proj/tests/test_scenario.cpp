#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nhqfi/csv.hpp"
#include "nhqfi/error.hpp"
#include "nhqfi/scenario.hpp"
#include "test_util.hpp"

using namespace nhqfi;
using testutil::kind_of;
using testutil::max_abs_diff;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig small(const std::string& figure, std::size_t points) {
  ScenarioConfig c = preset(figure);
  c.points = points;
  return c;
}

const char* kMinimal = R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"]})";

}  // namespace

TEST_CASE("config round trip") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    const std::string text = c.emit();
    CHECK(ScenarioConfig::parse(text).emit() == text);
  }
  const ScenarioConfig m = ScenarioConfig::parse(kMinimal);
  CHECK(m.params.at("omega0") == 0.0);
  CHECK(m.points == 2001);
  CHECK(m.t_max == 20.0);
  REQUIRE(m.observables.size() == 1);
  CHECK(m.observables[0].name == "sigma_z");
  CHECK(m.resolved_rate_scale() == 2.0);
  CHECK(ScenarioConfig::parse(m.emit()).emit() == m.emit());
}

TEST_CASE("shipped configs equal the presets") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = ScenarioConfig::load(fs::path(NHQFI_CONFIG_DIR) / (name + ".json"));
    CHECK(c.emit() == preset(name).emit());
  }
}

TEST_CASE("config errors") {
  const auto bad = [](const std::string& text) { return kind_of([&] { ScenarioConfig::parse(text); }); };
  CHECK(bad("{") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": []})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"], "colour": 1})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4, "k": 1}, "formalisms": ["metric"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5}, "formalisms": ["metric"]})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": "0.5", "gamma": 0.4}, "formalisms": ["metric"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric", "metric"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["trajectory"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": -0.4}, "formalisms": ["metric"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"],
                "state": {"theta": 0.5, "x": 0.6}})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"],
                "state": {"theta": 0.5, "phase": 0.1}})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"],
                "tolerances": {"eps": 1}})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"],
                "grid": {"points": 0}})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "gain_loss", "params": {"g": 0.5, "gamma": 0.4}, "formalisms": ["metric"],
                "qfi_parameter": "omega"})") == ErrorKind::config_error);
  CHECK(bad(R"({"model": "general2x2", "params": {"s": 0.1, "tau": 0.5}, "formalisms": ["me"]})") ==
        ErrorKind::config_error);
  CHECK(bad(R"({"model": "ising", "formalisms": ["metric"]})") == ErrorKind::config_error);
  CHECK(kind_of([] { ScenarioConfig::load("/nonexistent/config.json"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { preset("fig9"); }) == ErrorKind::config_error);
}

TEST_CASE("gain-loss run") {
  const RunResult r = run_scenario(small("fig3", 201), "");
  CHECK(r.files.empty());
  REQUIRE(r.trajectories.size() == 4);
  for (const auto& [f, traj] : r.trajectories) {
    const auto b = bloch_vector(traj.states.front());
    CHECK(b[0] == doctest::Approx(0.48));
    CHECK(std::abs(b[1]) < 1e-15);
    CHECK(b[2] == doctest::Approx(-0.2));
    CHECK(traj.size() == 201);
  }
  const Json& s = r.summary;
  CHECK(s["region"] == "Omega_NH^R");
  CHECK(s["metric"]["kind"] == "static_biorthogonal");
  CHECK(s["metric"]["eta_trace_max_deviation"].get<double>() < 1e-8);
  CHECK(s["metric"]["pseudo_hermiticity_residual"].get<double>() < 1e-10);
  CHECK(s["qfi"]["F_metric_max_abs_deviation"].get<double>() < 1e-6);
  CHECK(s["qfi"]["norm_scaling_max_rel_deviation"].get<double>() < 1e-6);
  CHECK(s["normalized"]["trace_closed_form_max_rel_deviation"].get<double>() < 1e-10);
  CHECK(s["master_equation"]["steady_state_vs_final_state"].get<double>() < 1e-6);
  // h = 0.3 sigma_x.
  CHECK(s["metric"]["hermitized_generator"][0][1][0].get<double>() == doctest::Approx(0.3));
  for (std::size_t k = 0; k < r.qfi.t.size(); ++k) CHECK(r.qfi.nj[k] - r.qfi.me[k] >= -1e-8);
  CHECK(r.expectations.size() == 4 * 201);
}

TEST_CASE("F_norm returns to F_metric when the trace returns to one") {
  // Tr rho~ = 1 at 2 t sqrt(g^2 - gamma^2) = 2 pi n.
  ScenarioConfig c = preset("fig4");
  c.formalisms = {Formalism::metric, Formalism::norm};
  c.t_max = 2.0 * M_PI / 0.3;
  c.points = 3;
  const RunResult r = run_scenario(c, "");
  for (std::size_t k = 0; k < 3; ++k) CHECK(testutil::rel_diff(r.qfi.norm[k], r.qfi.metric[k]) < 1e-6);
  CHECK(r.qfi.tau[2] == doctest::Approx(c.t_max / 0.6));
}

TEST_CASE("decaying-qubit run") {
  const RunResult r = run_scenario(small("fig6", 201), "");
  const Json& s = r.summary;
  CHECK(s["region"] == "Omega_NH^C");
  CHECK(s["metric"]["kind"] == "time_dependent");
  CHECK(s["metric"]["eta_trace_max_deviation"].get<double>() < 1e-8);
  CHECK(s["metric"]["hermitized_generator_drift"].get<double>() < 1e-7);
  CHECK(s["qfi"]["norm_closed_form_max_rel_deviation"].get<double>() < 1e-6);
  CHECK(s["qfi"]["me_rescaled_max_abs_deviation"].get<double>() < 1e-6);
  CHECK(s["qfi"]["me_printed_max_abs_deviation"].get<double>() > 0.1);
  for (const auto& [name, per] : s["closed_form_expectation_max_abs_deviation"].items()) {
    for (const auto& [f, v] : per.items()) CHECK(v.get<double>() < 1e-10);
  }
  CHECK(r.qfi.tau.back() == doctest::Approx(20.0 / 0.4));
}

TEST_CASE("Hermitian limit: trajectories coincide") {
  ScenarioConfig c = small("fig3", 101);
  c.params["gamma"] = 0.0;
  const RunResult r = run_scenario(c, "");
  CHECK(r.summary["region"] == "Omega_H^R");
  const auto& ref = r.trajectories.at(Formalism::metric);
  for (const auto& [f, traj] : r.trajectories) {
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(max_abs_diff(traj.states[k].matrix, ref.states[k].matrix) < 1e-9);
  }
}

TEST_CASE("outputs are written and byte-identical across runs") {
  const fs::path base = fs::temp_directory_path() / "nhqfi_test_scenario";
  fs::remove_all(base);
  const ScenarioConfig c = small("fig5", 51);
  const RunResult a = run_scenario(c, base / "a");
  const RunResult b = run_scenario(c, base / "b");
  REQUIRE(a.files.size() == 7);
  for (std::size_t k = 0; k < a.files.size(); ++k) {
    CHECK(a.files[k].filename() == b.files[k].filename());
    const std::string ta = slurp(a.files[k]);
    CHECK(!ta.empty());
    CHECK(ta == slurp(b.files[k]));
  }
  const std::string qfi = slurp(base / "a" / "qfi.csv");
  CHECK(qfi.rfind("t,tau,F_metric,F_norm,F_me,F_nj\n", 0) == 0);
  CHECK(qfi.find('\r') == std::string::npos);
  const std::string traj = slurp(base / "a" / "trajectory_me.csv");
  CHECK(traj.rfind("t,re(rho00),im(rho00),re(rho01),im(rho01),re(rho10),im(rho10),re(rho11),im(rho11),raw_trace,"
                   "bloch_x,bloch_y,bloch_z\n",
                   0) == 0);
  const Json summary = Json::parse(slurp(base / "a" / "summary.json"));
  CHECK(summary["files"].size() == 7);
  CHECK(ScenarioConfig::from_json(summary["config"]).emit() == c.emit());
  fs::remove_all(base);
}

TEST_CASE("qfi_parameter none skips the QFI file") {
  ScenarioConfig c = small("fig3", 11);
  c.qfi_parameter = "none";
  const fs::path dir = fs::temp_directory_path() / "nhqfi_test_noqfi";
  fs::remove_all(dir);
  const RunResult r = run_scenario(c, dir);
  CHECK(r.files.size() == 6);
  CHECK_FALSE(fs::exists(dir / "qfi.csv"));
  fs::remove_all(dir);
}

TEST_CASE("sweep expansion") {
  const Json j = Json::parse(R"({"model": "gain_loss", "params": {"g": [0.5, 0.7], "gamma": [0.1, 0.2, 0.3]},
                                 "state": {"theta": 0.6, "x": [0.0, 0.1]}, "formalisms": ["norm"]})");
  const auto points = expand_sweep(j);
  REQUIRE(points.size() == 12);
  CHECK(points[0].params.at("g") == 0.5);
  CHECK(points[0].params.at("gamma") == 0.1);
  CHECK(points[0].state.x == 0.0);
  CHECK(points[1].state.x == 0.1);
  CHECK(points[2].params.at("gamma") == 0.2);
  CHECK(points[6].params.at("g") == 0.7);
  CHECK(points[11].params.at("gamma") == 0.3);
  CHECK(points[11].state.x == 0.1);
  CHECK(expand_sweep(Json::parse(kMinimal)).size() == 1);
  CHECK(kind_of([] { expand_sweep(Json::parse(R"({"model": "gain_loss", "params": {"g": [], "gamma": 0.4},
                                                 "formalisms": ["metric"]})")); }) == ErrorKind::config_error);
  CHECK(kind_of([] { expand_sweep(Json::array()); }) == ErrorKind::config_error);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(std::nan("")) == "NaN");
  CHECK(format_double(INFINITY) == "Inf");
  CHECK(format_double(-INFINITY) == "-Inf");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}
