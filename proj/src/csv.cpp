#include "nhqfi/csv.hpp"

#include <cmath>
#include <cstdio>

namespace nhqfi {

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const StateTrajectory& traj) {
  out << "t,re(rho00),im(rho00),re(rho01),im(rho01),re(rho10),im(rho10),re(rho11),im(rho11),"
         "raw_trace,bloch_x,bloch_y,bloch_z\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ComplexMatrix& m = traj.states[k].matrix;
    out << format_double(traj.grid[k]);
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        out << ',' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
      }
    }
    const double raw = k < traj.raw_traces.size() ? traj.raw_traces[k] : 1.0;
    out << ',' << format_double(raw);
    for (double c : bloch_vector(m)) out << ',' << format_double(c);
    out << '\n';
  }
}

void write_qfi_csv(std::ostream& out, const QfiTable& table) {
  out << "t,tau,F_metric,F_norm,F_me,F_nj\n";
  auto cell = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? format_double(v[k]) : std::string("NaN");
  };
  for (std::size_t k = 0; k < table.t.size(); ++k) {
    out << format_double(table.t[k]) << ',' << cell(table.tau, k) << ',' << cell(table.metric, k) << ','
        << cell(table.norm, k) << ',' << cell(table.me, k) << ',' << cell(table.nj, k) << '\n';
  }
}

void write_expectation_csv(std::ostream& out, const std::vector<ExpectationRow>& rows) {
  out << "t,formalism,a0,a1,a2,a3,value\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << to_string(r.formalism) << ',' << format_double(r.observable.a0) << ','
        << format_double(r.observable.a1) << ',' << format_double(r.observable.a2) << ','
        << format_double(r.observable.a3) << ',' << format_double(r.value) << '\n';
  }
}

}  // namespace nhqfi
