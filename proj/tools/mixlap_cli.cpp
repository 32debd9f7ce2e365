// Command-line front end. Subcommands map one-to-one onto the library
// modules: cns, bathtub, bounds, spectrum, embed, verify, sweep. Machine
// consumers get JSON on stdout (CSV for plot data and sweeps); exit status
// is 0 only when every verdict passes or is unverdicted.

#include <mixlap/bathtub.hpp>
#include <mixlap/bounds.hpp>
#include <mixlap/discretize.hpp>
#include <mixlap/eigensolve.hpp>
#include <mixlap/embedding.hpp>
#include <mixlap/harness.hpp>
#include <mixlap/specfun.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  return j;
}

const char* branch_name(mixlap::BathtubBranch b) {
  switch (b) {
    case mixlap::BathtubBranch::local: return "local";
    case mixlap::BathtubBranch::nonlocal: return "nonlocal";
    default: return "interior";
  }
}

struct DomainOpt {
  std::vector<double> v{0.0, 1.0};
  double lo() const { return v.at(0); }
  double hi() const { return v.at(1); }
};

void add_domain(CLI::App* cmd, DomainOpt& d) {
  cmd->add_option("--domain", d.v, "interval as x_lo,x_hi")->delimiter(',')->expected(1, 2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet spectra and eigenvalue-sum bounds for -a Lap + b (-Lap)^s on intervals"};
  app.require_subcommand(1);
  int exit_code = 0;

  // cns: kernel normalization constant
  auto* cns = app.add_subcommand("cns", "kernel normalization constant c_{n,s}");
  int cns_n = 1;
  double cns_s = 0.5;
  cns->add_option("--n", cns_n, "dimension");
  cns->add_option("--s", cns_s, "fractional order in (0,1)")->required();
  cns->callback([&] {
    const auto c = mixlap::normalization_constant<double>(cns_n, cns_s);
    std::cout << json{{"n", cns_n}, {"s", cns_s}, {"value", c.value}}.dump(2) << "\n";
  });

  // bathtub: extremal radius and mass bounds
  auto* bt = app.add_subcommand("bathtub", "extremal ball for the capped-moment mass problem");
  mixlap::BathtubProblem<double> btp{1, 0.5, 1.0, 1.0, 1.0, 1.0};
  bt->add_option("--n", btp.n, "dimension");
  bt->add_option("--s", btp.s, "fractional order in (0,1)");
  bt->add_option("--alpha", btp.alpha, "weight of |z|^2");
  bt->add_option("--beta", btp.beta, "weight of |z|^{2s}");
  bt->add_option("--m1", btp.m1, "pointwise cap");
  bt->add_option("--m2", btp.m2, "moment budget");
  bt->callback([&] {
    const auto sol = mixlap::bathtub_bounds(btp);
    std::cout << json{{"radius", sol.radius},
                      {"exact_bound", sol.exact_bound},
                      {"minform_bound", sol.minform_bound},
                      {"maxform_bound", sol.maxform_bound},
                      {"active_branch", branch_name(sol.active_branch)}}
                     .dump(2)
              << "\n";
  });

  // bounds: closed-form eigenvalue-sum bounds per k
  auto* bd = app.add_subcommand("bounds", "closed-form spectral bounds per k");
  mixlap::OperatorSpec<double> bd_op{1, 1.0, 0.0, 0.5};
  double bd_volume = 1.0;
  int bd_k = 10;
  double bd_ce = 0.0;
  bd->add_option("--n", bd_op.n, "dimension");
  bd->add_option("--a", bd_op.a, "local weight");
  bd->add_option("--b", bd_op.b, "nonlocal weight");
  bd->add_option("--s", bd_op.s, "fractional order in (0,1)");
  bd->add_option("--volume", bd_volume, "domain volume");
  bd->add_option("--k", bd_k, "largest index");
  auto* bd_ce_opt = bd->add_option("--c-e", bd_ce, "embedding constant (needed for b < 0)");
  bd->callback([&] {
    const mixlap::DomainMeta<double> dom{bd_op.n, bd_volume};
    std::optional<double> ce;
    if (bd_ce_opt->count()) ce = bd_ce;
    json rows = json::array();
    for (int k = 1; k <= bd_k; ++k) {
      json row = {{"k", k},
                  {"sum_bound", mixlap::mixed_bly_lower(k, bd_op, dom, ce)},
                  {"per_eigenvalue", mixlap::per_eigenvalue_lower(k, bd_op, dom, ce)}};
      if (bd_op.b == 0) row["polya"] = bd_op.a * mixlap::polya_bound(k, dom);
      rows.push_back(std::move(row));
    }
    std::cout << json{{"rows", rows}}.dump(2) << "\n";
  });

  // spectrum: eigenvalues of the discretized operator
  auto* spc = app.add_subcommand("spectrum", "Dirichlet eigenvalues on a grid");
  DomainOpt spc_dom;
  add_domain(spc, spc_dom);
  int spc_grid = 255, spc_k = 10;
  mixlap::OperatorSpec<double> spc_op{1, 1.0, 0.0, 0.5};
  std::string spc_csv;
  spc->add_option("--grid", spc_grid, "interior node count")->required();
  spc->add_option("--a", spc_op.a, "local weight");
  spc->add_option("--b", spc_op.b, "nonlocal weight");
  spc->add_option("--s", spc_op.s, "fractional order in (0,1)");
  spc->add_option("--k", spc_k, "number of eigenvalues");
  spc->add_option("--csv", spc_csv, "also write k,lambda rows to this path");
  spc->callback([&] {
    const auto g = mixlap::make_grid(spc_dom.lo(), spc_dom.hi(), spc_grid);
    const auto sp = mixlap::mixed_spectrum(g, spc_op, spc_k);
    json vals = json::array();
    for (int i = 0; i < spc_k; ++i) vals.push_back(sp.eigenvalues[i]);
    std::cout << vals.dump(2) << "\n";
    if (!spc_csv.empty()) {
      std::ofstream out(spc_csv);
      if (!out) throw std::runtime_error("cannot write " + spc_csv);
      out << "k,lambda\n";
      for (int i = 0; i < spc_k; ++i) out << i + 1 << "," << fmt12(sp.eigenvalues[i]) << "\n";
    }
  });

  // embed: discrete embedding constant and admissible b range
  auto* em = app.add_subcommand("embed", "discrete embedding constant of the grid");
  DomainOpt em_dom;
  add_domain(em, em_dom);
  int em_grid = 255;
  double em_s = 0.5, em_a = 1.0;
  bool em_omega = false;
  em->add_option("--grid", em_grid, "interior node count");
  em->add_option("--s", em_s, "fractional order in (0,1)")->required();
  em->add_option("--a", em_a, "local weight for the admissible range");
  em->add_flag("--omega-only", em_omega, "use the interval-restricted unnormalized form");
  em->callback([&] {
    const auto g = mixlap::make_grid(em_dom.lo(), em_dom.hi(), em_grid);
    if (em_omega) {
      const auto est = mixlap::discrete_embedding_constant(
          g, em_s, mixlap::GagliardoConvention::omega_only_unnormalized);
      std::cout << json{{"mu_max", est.mu_max}, {"convention", "omega_only_unnormalized"}}.dump(2)
                << "\n";
      return;
    }
    const auto est = mixlap::discrete_embedding_constant(g, em_s);
    const auto range = mixlap::admissible_b_range(g, em_s, em_a);
    std::cout << json{{"mu_max", est.mu_max},
                      {"convention", "full_space_normalized"},
                      {"a", em_a},
                      {"b_lo", range.b_lo},
                      {"certificate", range.certificate}}
                     .dump(2)
              << "\n";
  });

  // verify: full bound-verification run
  auto* vf = app.add_subcommand("verify", "run the eigenvalue-sum bound verification");
  std::string vf_config, vf_output, vf_format;
  DomainOpt vf_dom;
  std::vector<int> vf_grids;
  std::vector<std::string> vf_checks;
  double vf_a = 1, vf_b = 0, vf_s = 0.5, vf_ce = 0;
  int vf_kmax = 10;
  vf->add_option("--config", vf_config, "JSON config file");
  auto* vf_a_o = vf->add_option("--a", vf_a, "local weight");
  auto* vf_b_o = vf->add_option("--b", vf_b, "nonlocal weight");
  auto* vf_s_o = vf->add_option("--s", vf_s, "fractional order");
  auto* vf_d_o = vf->add_option("--domain", vf_dom.v, "interval as x_lo,x_hi")
                     ->delimiter(',')
                     ->expected(1, 2);
  auto* vf_g_o = vf->add_option("--grids", vf_grids, "grid ladder")->delimiter(',');
  auto* vf_k_o = vf->add_option("--k-max", vf_kmax, "largest index");
  auto* vf_c_o = vf->add_option("--checks", vf_checks, "checks to run")->delimiter(',');
  auto* vf_o_o = vf->add_option("--output", vf_output, "report path");
  auto* vf_f_o = vf->add_option("--format", vf_format, "json|csv");
  auto* vf_e_o = vf->add_option("--ce", vf_ce, "supplied embedding constant");
  vf->callback([&] {
    mixlap::RunConfig cfg;
    if (!vf_config.empty()) cfg = mixlap::config_from_json(load_json(vf_config));
    if (vf_a_o->count()) cfg.op.a = vf_a;
    if (vf_b_o->count()) cfg.op.b = vf_b;
    if (vf_s_o->count()) cfg.op.s = vf_s;
    if (vf_d_o->count()) {
      cfg.x_lo = vf_dom.lo();
      cfg.x_hi = vf_dom.hi();
    }
    if (vf_g_o->count()) cfg.grids = vf_grids;
    if (vf_k_o->count()) cfg.k_max = vf_kmax;
    if (vf_c_o->count()) cfg.checks = {vf_checks.begin(), vf_checks.end()};
    if (vf_o_o->count()) cfg.output_path = vf_output;
    if (vf_f_o->count()) cfg.output_format = vf_format;
    if (vf_e_o->count()) {
      cfg.c_e_discrete = false;
      cfg.c_e_value = vf_ce;
    }
    const auto report = mixlap::run_verification(cfg);
    if (cfg.output_format == "csv")
      std::cout << mixlap::report_to_csv(report);
    else
      std::cout << mixlap::report_to_json(report).dump(2) << "\n";
    if (!mixlap::all_rows_ok(report)) exit_code = 1;
  });

  // sweep: parameter-grid verification table
  auto* sw = app.add_subcommand("sweep", "verification sweep over a, b, s");
  std::string sw_config, sw_output;
  DomainOpt sw_dom;
  std::vector<double> sw_a, sw_b, sw_s;
  std::vector<int> sw_grids;
  int sw_kmax = 10;
  sw->add_option("--config", sw_config, "JSON config file");
  auto* sw_a_o = sw->add_option("--a", sw_a, "local weights")->delimiter(',');
  auto* sw_b_o = sw->add_option("--b", sw_b, "nonlocal weights")->delimiter(',');
  auto* sw_s_o = sw->add_option("--s", sw_s, "fractional orders")->delimiter(',');
  auto* sw_g_o = sw->add_option("--grids", sw_grids, "grid ladder")->delimiter(',');
  auto* sw_k_o = sw->add_option("--k-max", sw_kmax, "largest index");
  auto* sw_d_o = sw->add_option("--domain", sw_dom.v, "interval as x_lo,x_hi")
                     ->delimiter(',')
                     ->expected(1, 2);
  sw->add_option("--output", sw_output, "CSV path");
  sw->callback([&] {
    mixlap::SweepConfig cfg;
    if (!sw_config.empty()) cfg = mixlap::sweep_config_from_json(load_json(sw_config));
    if (sw_a_o->count()) cfg.a = sw_a;
    if (sw_b_o->count()) cfg.b = sw_b;
    if (sw_s_o->count()) cfg.s = sw_s;
    if (sw_g_o->count()) cfg.grids = sw_grids;
    if (sw_k_o->count()) cfg.k_max = sw_kmax;
    if (sw_d_o->count()) {
      cfg.x_lo = sw_dom.lo();
      cfg.x_hi = sw_dom.hi();
    }
    const auto result = mixlap::run_sweep(cfg);
    std::cout << result.csv;
    if (!sw_output.empty()) {
      std::ofstream out(sw_output);
      if (!out) throw std::runtime_error("cannot write " + sw_output);
      out << result.csv;
    }
    if (!result.all_ok) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cout << json{{"error", e.what()}}.dump(2) << "\n";
    return 2;
  }
  return exit_code;
}
