// nhqfi: classify non-Hermitian qubit Hamiltonians, run scenarios, reproduce
// figure data and run parameter sweeps.
//
// Exit codes: 0 success, 2 configuration or parse error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nhqfi/error.hpp"
#include "nhqfi/metric.hpp"
#include "nhqfi/models.hpp"
#include "nhqfi/scenario.hpp"

namespace fs = std::filesystem;
using namespace nhqfi;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::string fmt_number(double v) {
  if (std::abs(v) < 5e-15) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_complex(Complex z) {
  if (std::abs(z.imag()) < 5e-15) return fmt_number(z.real());
  return fmt_number(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt_number(std::abs(z.imag())) + "i";
}

std::string region_label(Region r) {
  switch (r) {
    case Region::hermitian_real: return "Ω_H^R";
    case Region::nonhermitian_real: return "Ω_NH^R";
    case Region::nonhermitian_complex: return "Ω_NH^C";
  }
  return "?";
}

fs::path output_root() {
  if (const char* env = std::getenv("NHQFI_OUT_DIR"); env && *env) return env;
  return "results";
}

bool is_config_kind(ErrorKind k) {
  return k == ErrorKind::config_error || k == ErrorKind::invalid_input || k == ErrorKind::unknown_formula ||
         k == ErrorKind::nonphysical_state;
}

struct ClassifyArgs {
  std::string matrix_file;
  std::string model = "gain_loss";
  double omega0 = 0.0, g = 0.5, gamma = 0.4, omega = 0.5;
  double r = 0.0, s = 0.0, tau = 1.0, phi = 0.0;
  double tol = 1e-10;
};

int cmd_classify(const ClassifyArgs& a) {
  ComplexMatrix h;
  if (!a.matrix_file.empty()) {
    std::ifstream in(a.matrix_file);
    if (!in) throw Error(ErrorKind::config_error, "cannot open matrix file " + a.matrix_file);
    h = read_matrix_text(in);
  } else if (a.model == "gain_loss") {
    h = make_gain_loss(a.omega0, a.g, a.gamma).matrix;
  } else if (a.model == "decaying_qubit") {
    h = model_matrix(DecayingQubitParams{a.omega, a.gamma});
  } else if (a.model == "general2x2") {
    h = make_general2x2(a.r, a.s, a.tau, a.phi).matrix;
  } else {
    throw Error(ErrorKind::config_error, "unknown model '" + a.model + "'");
  }
  const Region region = classify_region(h, a.tol);
  const Spectrum spec = eig_general(h);
  std::cout << "region: " << region_label(region) << " (" << to_string(region) << ")\n";
  std::cout << "eigenvalues:";
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    std::cout << (k ? ", " : " ") << fmt_complex(spec.eigenvalues(k));
  }
  std::cout << '\n';
  if (region == Region::nonhermitian_real) {
    try {
      const MetricOperator eta = biorthogonal_metric(h, a.tol);
      std::cout << "pseudo-hermiticity residual: " << fmt_number(pseudo_hermiticity_residual(h, eta)) << '\n';
    } catch (const Error& e) {
      std::cout << "note: static biorthogonal metric unavailable (" << e.what() << ")\n";
    }
  } else if (region == Region::nonhermitian_complex) {
    std::cout << "note: complex spectrum, the static biorthogonal metric is unavailable\n";
  }
  return 0;
}

void report(const RunResult& r, const fs::path& dir) {
  std::cout << "wrote " << r.files.size() << " files to " << dir.string() << '\n';
}

void apply_overrides(ScenarioConfig& c, std::optional<std::size_t> points, std::optional<double> tol) {
  if (points) c.points = *points;
  if (tol) c.tolerances.hermiticity = *tol;
  c.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian qubit dynamics and quantum Fisher information"};
  app.require_subcommand(1);

  std::string out_dir;
  std::optional<std::size_t> grid_points;
  std::optional<double> tol;

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Report the spectral region of a 2x2 Hamiltonian");
  classify->add_option("--matrix", ca.matrix_file, "Matrix text file (dimension, then 're im' per entry)");
  classify->add_option("--model", ca.model, "gain_loss | decaying_qubit | general2x2");
  classify->add_option("--omega0", ca.omega0, "gain_loss: energy offset");
  classify->add_option("--g", ca.g, "gain_loss: coupling");
  classify->add_option("--gamma", ca.gamma, "gain_loss / decaying_qubit: rate");
  classify->add_option("--omega", ca.omega, "decaying_qubit: frequency");
  classify->add_option("--r", ca.r, "general2x2: r");
  classify->add_option("--s", ca.s, "general2x2: s");
  classify->add_option("--tau", ca.tau, "general2x2: tau");
  classify->add_option("--phi", ca.phi, "general2x2: phi");
  classify->add_option("--tol", ca.tol, "Relative tolerance for Hermiticity and real spectrum");

  std::string config_file;
  auto* run = app.add_subcommand("run", "Run a scenario configuration");
  run->add_option("config", config_file, "Scenario JSON file")->required();

  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce", "Write data for a built-in figure preset");
  reproduce->add_option("figure", figure, "fig3 | fig4 | fig5 | fig6")->required();

  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of array-valued parameters");
  sweep->add_option("config", sweep_file, "Sweep JSON file")->required();

  for (auto* sub : {run, reproduce, sweep}) {
    sub->add_option("--out-dir", out_dir, "Output directory (default: $NHQFI_OUT_DIR or ./results)");
    sub->add_option("--grid-points", grid_points, "Override the number of grid points");
    sub->add_option("--tol", tol, "Override the Hermitization tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  std::string stage = "setup";
  try {
    if (*classify) {
      stage = "classify";
      return cmd_classify(ca);
    }
    if (*run) {
      stage = "config";
      ScenarioConfig c = ScenarioConfig::load(config_file);
      apply_overrides(c, grid_points, tol);
      const fs::path dir = !out_dir.empty() ? fs::path(out_dir) : output_root() / (c.outputs.empty() ? "run" : c.outputs);
      stage = "run";
      report(run_scenario(c, dir), dir);
      return 0;
    }
    if (*reproduce) {
      stage = "config";
      ScenarioConfig c = preset(figure);
      apply_overrides(c, grid_points, tol);
      const fs::path dir = !out_dir.empty() ? fs::path(out_dir) : output_root() / figure;
      stage = "reproduce " + figure;
      report(run_scenario(c, dir), dir);
      return 0;
    }
    if (*sweep) {
      stage = "config";
      std::ifstream in(sweep_file);
      if (!in) throw Error(ErrorKind::config_error, "cannot open sweep file " + sweep_file);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::config_error, std::string("sweep parse error: ") + e.what());
      }
      std::vector<ScenarioConfig> points = expand_sweep(j);
      for (auto& p : points) apply_overrides(p, grid_points, tol);
      const fs::path root =
          !out_dir.empty() ? fs::path(out_dir) : output_root() / (points.front().outputs.empty() ? "sweep" : points.front().outputs);
      for (std::size_t k = 0; k < points.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "point_%04zu", k);
        stage = std::string("sweep ") + name;
        run_scenario(points[k], root / name);
      }
      std::cout << "wrote " << points.size() << " sweep points to " << root.string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << stage << "] " << e.what();
    if (e.payload()) std::cerr << " (at " << fmt_number(*e.payload()) << ")";
    std::cerr << '\n';
    return is_config_kind(e.kind()) ? kConfigError : kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
    return stage == "config" ? kConfigError : kNumericalError;
  }
  return 0;
}
