#include <mixlap/harness.hpp>

#include <mixlap/embedding.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace mixlap {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGuardThreshold = 0.01;  // relative eigenvalue drift between the two finest grids

const std::set<std::string>& known_checks() {
  static const std::set<std::string> k{"bly", "polya", "berezin", "weyl_ratio", "proof_diag"};
  return k;
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// First m eigenpairs of an already computed spectrum.
Spectrum<double> head_pairs(const Spectrum<double>& sp, int m) {
  Spectrum<double> out;
  out.eigenvalues = sp.eigenvalues.head(m);
  out.eigenvectors = sp.eigenvectors.leftCols(m);
  out.residual_norms = sp.residual_norms.head(m);
  out.rayleigh_components.assign(sp.rayleigh_components.begin(),
                                 sp.rayleigh_components.begin() + m);
  return out;
}

// Symbol-based prediction for the k-th eigenvalue: the local branch counts
// modes at xi = k pi / L, the nonlocal branch carries the boundary-layer
// offset (1-s) pi / 4 of the pure fractional interval problem.
double symbol_prediction(int k, const OperatorSpec<double>& op, double length) {
  const double xi_local = k * kPi / length;
  const double xi_frac = std::max(k * kPi / 2 - (1 - op.s) * kPi / 4, 1e-30) * 2 / length;
  return op.a * xi_local * xi_local + op.b * std::pow(xi_frac, 2 * op.s);
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (!(cfg.x_lo < cfg.x_hi)) throw std::invalid_argument("config: domain endpoints out of order");
  if (cfg.grids.empty()) throw std::invalid_argument("config: at least one grid size required");
  int min_grid = cfg.grids.front();
  for (int n : cfg.grids) {
    if (n < 2) throw std::invalid_argument("config: grid sizes must be >= 2");
    min_grid = std::min(min_grid, n);
  }
  if (cfg.k_max < 1) throw std::invalid_argument("config: k_max must be >= 1");
  if (2 * cfg.k_max > min_grid)
    throw std::invalid_argument("config: k_max must not exceed half the smallest grid");
  if (cfg.output_format != "json" && cfg.output_format != "csv")
    throw std::invalid_argument("config: output format must be json or csv");
  for (const auto& c : cfg.checks)
    if (!known_checks().count(c)) throw std::invalid_argument("config: unknown check " + c);
  if (!cfg.c_e_discrete && !(cfg.c_e_value > 0))
    throw std::invalid_argument("config: supplied embedding constant must be positive");
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("operator")) {
    const auto& o = j.at("operator");
    cfg.op.a = o.value("a", cfg.op.a);
    cfg.op.b = o.value("b", cfg.op.b);
    cfg.op.s = o.value("s", cfg.op.s);
  }
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    cfg.x_lo = d.value("x_lo", cfg.x_lo);
    cfg.x_hi = d.value("x_hi", cfg.x_hi);
  }
  if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<int>>();
  cfg.k_max = j.value("k_max", cfg.k_max);
  if (j.contains("checks")) {
    cfg.checks.clear();
    for (const auto& c : j.at("checks")) cfg.checks.insert(c.get<std::string>());
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    cfg.output_path = o.value("path", cfg.output_path);
    cfg.output_format = o.value("format", cfg.output_format);
  }
  if (j.contains("c_e_source")) {
    const auto& c = j.at("c_e_source");
    if (c.is_string() && c.get<std::string>() == "discrete") {
      cfg.c_e_discrete = true;
    } else if (c.is_object() && c.contains("supplied")) {
      cfg.c_e_discrete = false;
      cfg.c_e_value = c.at("supplied").get<double>();
    } else {
      throw std::invalid_argument("config: c_e_source must be \"discrete\" or {\"supplied\": v}");
    }
  }
  return cfg;
}

std::vector<double> default_xi_grid(double length, int points) {
  if (!(length > 0)) throw std::invalid_argument("xi grid: length must be positive");
  if (points < 82) throw std::invalid_argument("xi grid: too few points to resolve the domain");
  const double hi = 40 * kPi / length;
  std::vector<double> xi(points);
  for (int i = 0; i < points; ++i) xi[i] = -hi + 2 * hi * i / (points - 1);
  return xi;
}

ProofDiagnostics proof_diagnostics(const Spectrum<double>& sp, const Grid1D<double>& g,
                                   const OperatorSpec<double>& op,
                                   const std::vector<double>& xi_grid) {
  if (xi_grid.size() < 2) throw std::invalid_argument("proof_diagnostics: xi grid too short");
  const double limit = kPi / g.length();
  for (std::size_t q = 1; q < xi_grid.size(); ++q) {
    if (!(xi_grid[q] > xi_grid[q - 1]))
      throw std::invalid_argument("proof_diagnostics: xi grid must be strictly increasing");
    if (xi_grid[q] - xi_grid[q - 1] > limit)
      throw std::invalid_argument(
          "proof_diagnostics: xi grid spacing exceeds the resolution limit pi/|Omega|");
  }
  const int n = g.n_interior;
  const int k = static_cast<int>(sp.eigenvalues.size());
  Vec<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = g.node(j);

  // Density of the first k modes: f(xi) = sum_i |u_hat_i(xi)|^2 with the
  // transform of the zero-extended interpolant taken by trapezoid quadrature,
  // which on interior nodes is just a scaled discrete Fourier sum.
  std::vector<double> f(xi_grid.size());
  for (std::size_t q = 0; q < xi_grid.size(); ++q) {
    const Vec<double> co = (xi_grid[q] * xs.array()).cos();
    const Vec<double> si = (xi_grid[q] * xs.array()).sin();
    double acc = 0;
    for (int i = 0; i < k; ++i) {
      const double re = co.dot(sp.eigenvectors.col(i));
      const double im = si.dot(sp.eigenvectors.col(i));
      acc += re * re + im * im;
    }
    f[q] = acc * g.h / (2 * kPi);
  }

  ProofDiagnostics out;
  out.bessel_cap = g.length() / (2 * kPi);
  out.bessel_max = *std::max_element(f.begin(), f.end());
  out.bessel_ok = out.bessel_max <= out.bessel_cap * (1 + 1e-3);

  double moment = 0;
  for (std::size_t q = 0; q + 1 < xi_grid.size(); ++q) {
    const auto weight = [&](double xi) {
      double w = op.a * xi * xi;
      if (op.b != 0) w += op.b * std::pow(std::abs(xi), 2 * op.s);
      return w;
    };
    moment += (xi_grid[q + 1] - xi_grid[q]) / 2 *
              (weight(xi_grid[q]) * f[q] + weight(xi_grid[q + 1]) * f[q + 1]);
  }
  out.moment = moment;
  out.sum_lambda = sp.eigenvalues.sum();
  out.moment_ratio = moment / out.sum_lambda;
  out.truncation_deficit = 1 - out.moment_ratio;
  return out;
}

BoundReport run_verification(const RunConfig& cfg) {
  validate_config(cfg);
  std::vector<int> grids = cfg.grids;
  std::sort(grids.begin(), grids.end());
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
  const int fine_n = grids.back();
  // The refinement guard needs a companion grid; with a single entry the run
  // coarsens it once itself.
  const int coarse_n = grids.size() >= 2 ? grids[grids.size() - 2]
                                         : std::max(2 * cfg.k_max, (fine_n - 1) / 2);

  const auto fine = make_grid(cfg.x_lo, cfg.x_hi, fine_n);
  const auto coarse = make_grid(cfg.x_lo, cfg.x_hi, coarse_n);
  const double length = cfg.x_hi - cfg.x_lo;
  const DomainMeta<double> dom{1, length};
  OperatorSpec<double> op = cfg.op;
  op.n = 1;

  std::optional<double> ce;
  if (op.b < 0 || !cfg.c_e_discrete)
    ce = cfg.c_e_discrete ? discrete_embedding_constant(fine, op.s).mu_max : cfg.c_e_value;
  const Regime regime = classify_regime(op, ce);

  const auto sp_fine = mixed_spectrum(fine, op, std::min(cfg.k_max + 1, fine_n));
  const auto sp_coarse = mixed_spectrum(coarse, op, std::min(cfg.k_max, coarse_n));

  // Guard: verdicts stop at the first k whose eigenvalue still drifts by 1%
  // or more under the last refinement.
  int verdicted_k = cfg.k_max;
  Vec<double> drift(cfg.k_max);
  for (int k = 0; k < cfg.k_max; ++k) {
    drift[k] = std::abs(sp_fine.eigenvalues[k] - sp_coarse.eigenvalues[k]) /
               std::max(std::abs(sp_fine.eigenvalues[k]), 1e-300);
    if (drift[k] >= kGuardThreshold && verdicted_k == cfg.k_max) verdicted_k = k;
  }

  BoundReport report;
  double sum = 0;
  for (int k = 1; k <= cfg.k_max; ++k) {
    sum += sp_fine.eigenvalues[k - 1];
    BoundRow row;
    row.k = k;
    row.sum_lambda = sum;
    row.bound = mixed_bly_lower(k, op, dom, ce);
    row.margin = row.sum_lambda / row.bound;
    if (!std::isfinite(row.margin)) throw std::runtime_error("run_verification: non-finite margin");
    if (k > verdicted_k) {
      row.verdict = "unverdicted";
      std::ostringstream note;
      note << "lambda_" << verdicted_k + 1 << " drifted "
           << fmt12(drift[verdicted_k] * 100) << "% between n=" << coarse_n << " and n=" << fine_n
           << "; verdicts need < 1%";
      row.note = note.str();
    } else {
      row.verdict = row.margin >= 1 - 1e-9 ? "pass" : "fail";
    }
    report.rows.push_back(std::move(row));
  }

  nlohmann::json meta;
  meta["operator"] = {{"a", op.a}, {"b", op.b}, {"s", op.s}};
  meta["domain"] = {{"x_lo", cfg.x_lo}, {"x_hi", cfg.x_hi}};
  meta["grids"] = {coarse_n, fine_n};
  meta["k_max"] = cfg.k_max;
  meta["regime"] = regime == Regime::local      ? "local"
                   : regime == Regime::positive_b ? "positive_b"
                                                  : "negative_b";
  if (ce) meta["c_e"] = *ce;
  meta["residual_max"] =
      std::max(sp_fine.residual_norms.maxCoeff(), sp_coarse.residual_norms.maxCoeff());
  meta["guard"] = {{"threshold", kGuardThreshold},
                   {"verdicted_k", verdicted_k},
                   {"coarse", coarse_n},
                   {"fine", fine_n}};

  double recomb = 0;
  for (int k = 0; k < cfg.k_max; ++k)
    recomb += sp_fine.rayleigh_components[k].local_part +
              sp_fine.rayleigh_components[k].nonlocal_part;
  meta["rayleigh_recombination_rel"] =
      std::abs(recomb - report.rows.back().sum_lambda) /
      std::max(std::abs(report.rows.back().sum_lambda), 1e-300);

  if (op.b < 0) meta["positive_definite"] = is_positive_definite(mixed_matrix(fine, op));

  nlohmann::json checks = nlohmann::json::object();
  if (cfg.checks.count("polya")) {
    if (op.b == 0) {
      // Sharp for the interval, so the discrete eigenvalues sit a hair below
      // the continuum value; passing within the guard tolerance is the most
      // the scheme can certify.
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= cfg.k_max; ++k)
        worst = std::min(worst, sp_fine.eigenvalues[k - 1] / (op.a * polya_bound(k, dom)));
      checks["polya"] = {{"worst_margin", worst},
                         {"within_guard_tolerance", worst >= 1 - kGuardThreshold}};
    } else {
      checks["polya"] = {{"skipped", "stated for b = 0 only"}};
    }
  }
  if (cfg.checks.count("berezin")) {
    if (op.b == 0) {
      // Riesz-mean upper bound at caps between consecutive scaled eigenvalues.
      const Vec<double> scaled = sp_fine.eigenvalues.head(cfg.k_max + 1) / op.a;
      bool all_ok = true;
      double min_slack = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= cfg.k_max; ++k) {
        const double cap = (scaled[k - 1] + scaled[k]) / 2;
        const auto chk = berezin_riesz_upper(cap, 1.0, dom, scaled);
        all_ok = all_ok && chk.lhs <= chk.rhs * (1 + 1e-9);
        min_slack = std::min(min_slack, chk.rhs - chk.lhs);
      }
      checks["berezin"] = {{"all_ok", all_ok}, {"min_slack", min_slack}, {"caps", cfg.k_max}};
    } else {
      checks["berezin"] = {{"skipped", "stated for b = 0 only"}};
    }
  }
  if (cfg.checks.count("weyl_ratio")) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int k = 1; k <= verdicted_k; ++k) {
      const double r = sp_fine.eigenvalues[k - 1] / symbol_prediction(k, op, length);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    checks["weyl_ratio"] = {{"min_ratio", lo}, {"max_ratio", hi}, {"k_used", verdicted_k}};
  }
  if (cfg.checks.count("proof_diag")) {
    const auto diag = proof_diagnostics(head_pairs(sp_fine, cfg.k_max), fine, op,
                                        default_xi_grid(length));
    checks["proof_diag"] = {{"bessel_cap", diag.bessel_cap},
                            {"bessel_max", diag.bessel_max},
                            {"bessel_ok", diag.bessel_ok},
                            {"moment_ratio", diag.moment_ratio},
                            {"truncation_deficit", diag.truncation_deficit}};
  }
  meta["checks"] = checks;
  report.meta = std::move(meta);

  if (!cfg.output_path.empty()) {
    if (cfg.output_format == "csv") {
      emit_plot_data(report, cfg.output_path);
    } else {
      std::ofstream out(cfg.output_path);
      if (!out) throw std::runtime_error("run_verification: cannot write " + cfg.output_path);
      out << report_to_json(report).dump(2) << "\n";
    }
  }
  return report;
}

bool all_rows_ok(const BoundReport& report) {
  for (const auto& row : report.rows)
    if (row.verdict != "pass" && row.verdict != "unverdicted") return false;
  return true;
}

nlohmann::json report_to_json(const BoundReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r = {{"k", row.k},
                        {"sum_lambda", row.sum_lambda},
                        {"bound", row.bound},
                        {"margin", row.margin},
                        {"verdict", row.verdict}};
    if (!row.note.empty()) r["note"] = row.note;
    rows.push_back(std::move(r));
  }
  return {{"meta", report.meta}, {"rows", rows}};
}

std::string report_to_csv(const BoundReport& report) {
  std::string out = "k,sum_lambda,bound,margin,verdict\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.k) + "," + fmt12(row.sum_lambda) + "," + fmt12(row.bound) + "," +
           fmt12(row.margin) + "," + row.verdict + "\n";
  }
  return out;
}

BoundReport report_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "k,sum_lambda,bound,margin,verdict")
    throw std::invalid_argument("report_from_csv: missing or mangled header");
  BoundReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string item;
    BoundRow row;
    std::getline(fields, item, ',');
    row.k = std::stoi(item);
    std::getline(fields, item, ',');
    row.sum_lambda = std::stod(item);
    std::getline(fields, item, ',');
    row.bound = std::stod(item);
    std::getline(fields, item, ',');
    row.margin = std::stod(item);
    if (!std::getline(fields, row.verdict, ','))
      throw std::invalid_argument("report_from_csv: short row");
    report.rows.push_back(std::move(row));
  }
  return report;
}

void emit_plot_data(const BoundReport& report, const std::string& path) {
  if (report.rows.empty()) throw std::invalid_argument("emit_plot_data: empty report");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plot_data: cannot write " + path);
  out << report_to_csv(report);
  if (!out) throw std::runtime_error("emit_plot_data: write failed for " + path);
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  if (j.contains("a")) cfg.a = j.at("a").get<std::vector<double>>();
  if (j.contains("b")) cfg.b = j.at("b").get<std::vector<double>>();
  if (j.contains("s")) cfg.s = j.at("s").get<std::vector<double>>();
  if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<int>>();
  cfg.k_max = j.value("k_max", cfg.k_max);
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    cfg.x_lo = d.value("x_lo", cfg.x_lo);
    cfg.x_hi = d.value("x_hi", cfg.x_hi);
  }
  return cfg;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  auto ordered = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  SweepResult result;
  result.csv = "a,b,s,k,sum_lambda,bound,margin,verdict\n";
  for (double a : ordered(cfg.a)) {
    for (double b : ordered(cfg.b)) {
      for (double s : ordered(cfg.s)) {
        const std::string prefix = fmt12(a) + "," + fmt12(b) + "," + fmt12(s) + ",";
        RunConfig point;
        point.op = OperatorSpec<double>{1, a, b, s};
        point.x_lo = cfg.x_lo;
        point.x_hi = cfg.x_hi;
        point.grids = cfg.grids;
        point.k_max = cfg.k_max;
        point.checks = {"bly"};
        try {
          const BoundReport report = run_verification(point);
          for (const auto& row : report.rows) {
            result.csv += prefix + std::to_string(row.k) + "," + fmt12(row.sum_lambda) + "," +
                          fmt12(row.bound) + "," + fmt12(row.margin) + "," + row.verdict + "\n";
          }
          result.all_ok = result.all_ok && all_rows_ok(report);
        } catch (const std::exception&) {
          // Per-point isolation: a bad parameter point becomes a marker row
          // and the sweep keeps going.
          result.csv += prefix + "0,nan,nan,nan,error\n";
          result.all_ok = false;
        }
      }
    }
  }
  return result;
}

}  // namespace mixlap
