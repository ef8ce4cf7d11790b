#pragma once

// Fisher information: SLD eigen-sum QFI matrix, the mixed-qubit closed form,
// classical FI of a POVM, finite-difference derivatives of the
// encode-then-evolve pipeline, and closed-form QFI expressions.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nhqfi/matcore.hpp"
#include "nhqfi/models.hpp"

namespace nhqfi {

enum class Provenance { numeric, closed_form };

struct QfiMatrix {
  std::vector<std::string> names;
  RealMatrix entries;
  Provenance provenance = Provenance::numeric;

  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
  /// Entry by parameter labels; throws invalid_input for unknown labels.
  double at(const std::string& a, const std::string& b) const;
};

/// F_ij = sum_{m,n: l_m + l_n > eps} 2 Re[<m|d_i|n><n|d_j|m>] / (l_m + l_n).
QfiMatrix sld_qfi(const DensityState& rho, const std::vector<ComplexMatrix>& drho,
                  std::vector<std::string> names = {}, double eps = 1e-12);
double sld_qfi(const ComplexMatrix& rho, const ComplexMatrix& drho, double eps = 1e-12);

/// Tr[d_i d_j] + Tr[rho d_i rho d_j] / det(rho). Throws pure_state_limit
/// when det(rho) <= det_threshold.
double qubit_qfi_closed(const DensityState& rho, const ComplexMatrix& di, const ComplexMatrix& dj,
                        double det_threshold = 1e-12);

/// Single-parameter QFI: the qubit closed form when det(rho) >= purity_switch
/// or det(rho) exceeds 1e6 times its rounding error, the eigen-sum otherwise.
double qfi_scalar(const ComplexMatrix& rho, const ComplexMatrix& drho, double purity_switch = 1e-10);

/// Symmetric logarithmic derivative L with drho = (L rho + rho L) / 2 on the support of rho.
ComplexMatrix sld_operator(const ComplexMatrix& rho, const ComplexMatrix& drho, double eps = 1e-12);

class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects, double tol = 1e-12);
  const std::vector<ComplexMatrix>& effects() const { return effects_; }

  /// Projectors onto the eigenvectors of a Hermitian operator.
  static Povm projective(const ComplexMatrix& observable);

 private:
  std::vector<ComplexMatrix> effects_;
};

struct ClassicalFi {
  double value = 0.0;
  /// Outcomes left out because their probability was below the floor.
  std::vector<std::size_t> excluded;
};

ClassicalFi classical_fi(const DensityState& rho, const ComplexMatrix& drho, const Povm& povm,
                         double probability_floor = 1e-14);

/// Projective measurement in the eigenbasis of the SLD; attains the QFI.
Povm sld_eigenbasis_povm(const ComplexMatrix& rho, const ComplexMatrix& drho);

// Channels acting on the encoded input state.

/// Unitary evolution under a Hermitian (Hermitized) generator.
struct MetricChannel {
  ComplexMatrix h;
};
/// e^{-iHt} rho e^{iH^dagger t} divided by its trace.
struct NormalizedChannel {
  ComplexMatrix h_tilde;
};
struct LindbladChannel {
  OpenModel model;
};
/// Master-equation evolution to t - dt followed by one conditional no-jump
/// Kraus step of length dt (shortened to t when t < dt).
struct NoJumpChannel {
  OpenModel model;
  double dt = 1e-3;
};

using Channel = std::variant<MetricChannel, NormalizedChannel, LindbladChannel, NoJumpChannel>;

struct ParamPipeline {
  Channel channel;
  double time = 0.0;

  /// Encodes the input state and evolves it; the result has unit trace.
  ComplexMatrix apply(const InputStateParams& p) const;
};

/// Evolves an arbitrary (unit-trace) input through the channel for time t.
ComplexMatrix apply_channel(const Channel& channel, const ComplexMatrix& rho0, double t);

enum class StateParam { theta, x };
const char* to_string(StateParam p);

/// Central difference of the pipeline output in theta or x, Richardson
/// extrapolated over steps h and h/2, Hermitized, and made exactly traceless
/// by resetting the largest-population diagonal entry. The default step is
/// 1e-5 * max(1, |p|). Throws step_adjustment (payload: largest feasible h)
/// if p +- h leaves the physical domain.
ComplexMatrix param_derivative(const ParamPipeline& pipeline, const InputStateParams& params, StateParam which,
                               std::optional<double> h = std::nullopt);

/// Largest step keeping p +- h inside theta(1 - theta) >= x^2.
double max_feasible_step(const InputStateParams& params, StateParam which);

/// Richardson-extrapolated central derivative of a matrix-valued function.
ComplexMatrix central_derivative(const std::function<ComplexMatrix(double)>& f, double p, double h);

/// F_theta (or F_x) of the pipeline at each grid time.
std::vector<double> qfi_vs_time(const Channel& channel, const InputStateParams& params, StateParam which,
                                const std::vector<double>& grid);

struct QfiSeries {
  std::string label;
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<double> values;
};

/// qfi_vs_time plus the dimensionless abscissa tau = t / tau_divisor.
QfiSeries qfi_series(const std::string& label, const Channel& channel, const InputStateParams& params,
                     StateParam which, const std::vector<double>& grid, double tau_divisor);

/// Numerical QFI matrix over (r, s, tau, phi) for the input state evolved for
/// time t under hermitian_counterpart_general.
QfiMatrix hamiltonian_qfi_numeric(const General2x2Params& hp, const InputStateParams& sp, double t,
                                  double h = 1e-5);

/// Closed-form expressions.
namespace catalog {

/// 4x4 block over (r, s, tau, phi). Requires s != 0.
QfiMatrix hamiltonian_block(const General2x2Params& hp, const InputStateParams& sp, double t);
/// 2x2 block over (theta, x) for the input state itself. Requires a mixed state.
QfiMatrix state_block(const InputStateParams& sp);

double metric(const InputStateParams& sp);

/// Tr rho~(t) for the gain-loss model (g > |gamma|).
double gain_loss_trace(const GainLossParams& m, const InputStateParams& sp, double t);
/// The gain-loss F^norm exactly as printed (denominator not squared).
double gain_loss_norm_printed(const GainLossParams& m, const InputStateParams& sp, double t);
/// F^metric / Tr[rho~]^2.
double gain_loss_norm(const GainLossParams& m, const InputStateParams& sp, double t);

double decaying_trace(const DecayingQubitParams& m, const InputStateParams& sp, double t);
double decaying_norm(const DecayingQubitParams& m, const InputStateParams& sp, double t);
/// The decaying-qubit F^me exactly as printed.
double decaying_me_printed(const DecayingQubitParams& m, const InputStateParams& sp, double t);
/// The printed F^me with gamma -> 2 gamma; equals the numerical value under
/// the jump operator 2 sqrt(gamma) sigma_-.
double decaying_me(const DecayingQubitParams& m, const InputStateParams& sp, double t);

/// Scalar formulas by id: "metric", "gain_loss.trace", "gain_loss.norm",
/// "gain_loss.norm_printed", "decaying.trace", "decaying.norm",
/// "decaying.me", "decaying.me_printed". Throws unknown_formula.
double evaluate(const std::string& id, const ModelParams& model, const InputStateParams& sp, double t);

}  // namespace catalog

}  // namespace nhqfi
