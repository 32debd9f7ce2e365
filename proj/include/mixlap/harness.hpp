#pragma once

// Experiment runner: solves the mixed operator on a ladder of grids, checks
// the eigenvalue-sum lower bounds with a refinement guard, runs the spectral
// diagnostics, and emits machine-readable reports (JSON or plot-ready CSV).

#include <mixlap/bounds.hpp>
#include <mixlap/discretize.hpp>
#include <mixlap/eigensolve.hpp>

#include "json.hpp"

#include <set>
#include <string>
#include <vector>

namespace mixlap {

struct RunConfig {
  OperatorSpec<double> op;  // n is fixed to 1 by the grid
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<int> grids{255, 511};  // interior node counts; the two largest drive the run
  int k_max = 10;
  std::set<std::string> checks{"bly"};  // subset of {bly, polya, berezin, weyl_ratio, proof_diag}
  std::string output_path;             // empty: nothing written to disk
  std::string output_format = "json";  // json | csv
  bool c_e_discrete = true;            // embedding constant from the fine grid when b < 0
  double c_e_value = 0.0;              // used instead when c_e_discrete is false
};

struct BoundRow {
  int k = 0;
  double sum_lambda = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  std::string verdict;  // pass | fail | unverdicted
  std::string note;     // reason when unverdicted
};

struct BoundReport {
  nlohmann::json meta;
  std::vector<BoundRow> rows;
};

// Spectral-density diagnostics for a computed spectrum: the density
// f(xi) = sum_i |u_hat_i(xi)|^2 of the zero-extended interpolants against
// the orthonormality cap |Omega|/(2 pi), and the truncated symbol moment
// int (a xi^2 + b |xi|^{2s}) f dxi against the eigenvalue sum.
struct ProofDiagnostics {
  double bessel_cap = 0.0;
  double bessel_max = 0.0;
  bool bessel_ok = false;  // bessel_max <= cap (1 + 1e-3)
  double moment = 0.0;
  double sum_lambda = 0.0;
  double moment_ratio = 0.0;
  double truncation_deficit = 0.0;  // 1 - moment_ratio, the tail mass outside the xi range
};

RunConfig config_from_json(const nlohmann::json& j);
void validate_config(const RunConfig& cfg);

BoundReport run_verification(const RunConfig& cfg);

ProofDiagnostics proof_diagnostics(const Spectrum<double>& sp, const Grid1D<double>& g,
                                   const OperatorSpec<double>& op,
                                   const std::vector<double>& xi_grid);

// Symmetric grid on [-40 pi / length, 40 pi / length]; fine enough for the
// resolution requirement (spacing below pi / length).
std::vector<double> default_xi_grid(double length, int points = 1601);

bool all_rows_ok(const BoundReport& report);
nlohmann::json report_to_json(const BoundReport& report);
std::string report_to_csv(const BoundReport& report);  // k,sum_lambda,bound,margin,verdict
BoundReport report_from_csv(const std::string& text);  // rows only; header line required
void emit_plot_data(const BoundReport& report, const std::string& path);

struct SweepConfig {
  std::vector<double> a{1.0};
  std::vector<double> b{0.0};
  std::vector<double> s{0.5};
  std::vector<int> grids{255, 511};
  int k_max = 10;
  double x_lo = 0.0;
  double x_hi = 1.0;
};

struct SweepResult {
  std::string csv;     // a,b,s,k,sum_lambda,bound,margin,verdict
  bool all_ok = true;  // no error rows and every verdict pass or unverdicted
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace mixlap
