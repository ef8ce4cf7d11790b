#pragma once

// Model zoo: the general 2x2 non-Hermitian family, the gain-loss qubit,
// the decaying qubit with its Lindblad parent, the parametrized input
// state, and the spectral region classifier.
//
// Rate conventions. The gain-loss master equation is printed with a 2*gamma
// dissipator and the decaying qubit with L = sqrt(gamma) sigma_-. Neither
// reproduces its stated effective Hamiltonian. Both open models therefore
// default to the jump operator 2 sqrt(gamma) sigma_- (rate 4 gamma), for which
// H_eff = H~ - i gamma 1 exactly. `rate_scale` multiplies the printed
// prefactor if the printed convention is wanted instead.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nhqfi/matcore.hpp"

namespace nhqfi {

struct General2x2Params {
  double r = 0.0;
  double s = 0.0;
  double tau = 0.0;
  double phi = 0.0;
};

struct GainLossParams {
  double omega0 = 0.0;
  double g = 0.0;
  double gamma = 0.0;
};

struct DecayingQubitParams {
  double omega = 0.0;
  double gamma = 0.0;
};

using ModelParams = std::variant<General2x2Params, GainLossParams, DecayingQubitParams>;

/// Two-level non-Hermitian Hamiltonian together with the parameters that
/// generate it.
struct NhModel {
  ComplexMatrix matrix;
  ModelParams params;
  /// Spectrum is real by the family's analytic criterion
  /// (|s| <= |tau| for the general family, g >= |gamma| for gain-loss).
  bool real_spectrum = false;
};

/// Hermitian Hamiltonian plus jump operators, each already carrying the
/// square root of its rate.
struct OpenModel {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> jumps;

  OpenModel() = default;
  OpenModel(ComplexMatrix h, std::vector<ComplexMatrix> jump_ops);
};

enum class Region { hermitian_real, nonhermitian_real, nonhermitian_complex };

/// "Omega_H^R" style label.
std::string to_string(Region region);

struct InputStateParams {
  double theta = 0.5;
  double x = 0.0;

  /// Throws nonphysical_state unless theta in [0,1] and x^2 <= theta(1-theta).
  void validate() const;
};

enum class TraceConvention { standard, eta_weighted };

struct DensityState {
  ComplexMatrix matrix;
  TraceConvention convention = TraceConvention::standard;
  double time = 0.0;
};

/// Rebuilds the matrix from a parameter record.
ComplexMatrix model_matrix(const ModelParams& params);

NhModel make_general2x2(double r, double s, double tau, double phi);
ComplexMatrix hermitian_counterpart_general(double r, double s, double tau, double phi);
NhModel make_gain_loss(double omega0, double g, double gamma);

/// Master-equation parent of the gain-loss model: H = omega0 1 + g sigma_x,
/// jump sqrt(rate_scale * 2 gamma) sigma_-.
OpenModel make_gain_loss_open(double omega0, double g, double gamma, double rate_scale = 2.0);

/// (omega - i gamma) sigma_z and its parent omega sigma_z with jump
/// sqrt(rate_scale * gamma) sigma_-. The default rate_scale = 4 gives
/// 2 sqrt(gamma) sigma_-.
std::pair<NhModel, OpenModel> make_decaying_qubit(double omega, double gamma, double rate_scale = 4.0);

/// H - (i/2) sum_l Gamma_l^dagger Gamma_l.
ComplexMatrix effective_hamiltonian(const OpenModel& model);

Region classify_region(const ComplexMatrix& h, double tol = 1e-10);
inline Region classify_region(const NhModel& m, double tol = 1e-10) { return classify_region(m.matrix, tol); }

DensityState make_input_state(const InputStateParams& p);

}  // namespace nhqfi
