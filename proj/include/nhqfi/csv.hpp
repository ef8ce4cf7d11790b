#pragma once

// Deterministic CSV output: '.' decimal point, '\n' line ends, 17 significant
// digits, "NaN" for missing values.

#include <ostream>
#include <string>
#include <vector>

#include "nhqfi/dynamics.hpp"
#include "nhqfi/observables.hpp"

namespace nhqfi {

std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const StateTrajectory& traj);

/// One row per time; columns a formalism did not compute hold NaN.
struct QfiTable {
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<double> metric;
  std::vector<double> norm;
  std::vector<double> me;
  std::vector<double> nj;
};

void write_qfi_csv(std::ostream& out, const QfiTable& table);

struct ExpectationRow {
  double t = 0.0;
  Formalism formalism = Formalism::metric;
  Observable observable;
  double value = 0.0;
};

void write_expectation_csv(std::ostream& out, const std::vector<ExpectationRow>& rows);

}  // namespace nhqfi
