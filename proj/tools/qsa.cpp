// Command-line surface for the QSample preparation simulator. Every command
// emits JSON (or CSV for `benchmark`) to stdout or --out, echoes its
// effective configuration, and exits nonzero when a certified bound fails.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qsa/cost.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/io.hpp"
#include "qsa/verify.hpp"

namespace {

using qsa::json;

std::vector<double> split_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      qsa::fail(qsa::errc::parse, "cannot parse number '" + item + "'");
    }
  }
  return out;
}

// "2x3" -> cols 3 (only 2-row ladders exist).
int parse_ladder(const std::string& text) {
  auto pos = text.find('x');
  qsa::require(pos != std::string::npos, qsa::errc::parse,
               "ladder must look like 2x3, got '" + text + "'");
  int rows = std::stoi(text.substr(0, pos));
  int cols = std::stoi(text.substr(pos + 1));
  qsa::require(rows == 2, qsa::errc::parse, "only 2-row ladders are supported");
  return cols;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
  } else {
    qsa::write_text_file(out_path, content.back() == '\n' ? content : content + "\n");
  }
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2)); }

qsa::MarkovChain load_chain(const std::string& ladder, double beta, bool lazy,
                            const std::string& file) {
  if (!file.empty()) return qsa::chain_from_json(qsa::read_json_file(file));
  qsa::require(!ladder.empty(), qsa::errc::configuration, "pass --ladder/--beta or --file");
  return qsa::build_glauber_chain(qsa::IsingLadder::open(parse_ladder(ladder)), beta, lazy);
}

struct AnnealCli {
  std::string ladder = "2x2";
  std::string betas = "0,0.3,0.6,0.9,1.2";
  double eps = 0.1;
  std::string mode = "compiled";
  bool no_lazy = false;
  std::string p_bounds;

  void apply_config_file(const json& j) {
    if (j.contains("ladder")) ladder = j["ladder"].get<std::string>();
    if (j.contains("betas")) {
      std::string s;
      for (double b : j["betas"].get<std::vector<double>>())
        s += (s.empty() ? "" : ",") + qsa::format_double(b);
      betas = s;
    }
    if (j.contains("eps")) eps = j["eps"].get<double>();
    if (j.contains("mode")) mode = j["mode"].get<std::string>();
    if (j.contains("lazy")) no_lazy = !j["lazy"].get<bool>();
  }

  qsa::AnnealConfig build() const {
    qsa::AnnealConfig config;
    config.eps = eps;
    config.mode = mode == "exact" ? qsa::RunMode::exact_projector : qsa::RunMode::compiled;
    qsa::IsingLadder lad = qsa::IsingLadder::open(parse_ladder(ladder));
    for (double beta : split_doubles(betas))
      config.chains.push_back(qsa::build_glauber_chain(lad, beta, !no_lazy));
    if (!p_bounds.empty()) config.p_lower_overrides = split_doubles(p_bounds);
    return config;
  }

  json echo() const {
    return json{{"ladder", ladder}, {"betas", betas},       {"eps", eps},
                {"mode", mode},     {"lazy", !no_lazy},     {"p_bounds", p_bounds}};
  }
};

int run(int argc, char** argv) {
  CLI::App app{"QSample preparation simulator: qubitized walks, spectral "
               "filters, selective-phase gadgets, FPAA, and annealing"};
  app.require_subcommand(1);
  app.fallthrough();  // let --seed/--out appear after the subcommand
  std::uint64_t seed = qsa::kDefaultSeed;
  std::string out_path;
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--out", out_path, "write output to this file instead of stdout");

  // chain ------------------------------------------------------------------
  auto* chain_cmd = app.add_subcommand("chain", "build/validate a chain, report spectral data");
  std::string chain_ladder, chain_file;
  double chain_beta = 0.0;
  bool chain_lazy = false;
  chain_cmd->add_option("--ladder", chain_ladder, "ladder geometry, e.g. 2x3");
  chain_cmd->add_option("--beta", chain_beta, "inverse temperature");
  chain_cmd->add_flag("--lazy", chain_lazy, "lazify: P -> (I+P)/2");
  chain_cmd->add_option("--file", chain_file, "chain JSON file {n, P, pi?}");

  // walk -------------------------------------------------------------------
  auto* walk_cmd = app.add_subcommand("walk", "walk spectrum of a chain");
  std::string walk_ladder, walk_file;
  double walk_beta = 0.0;
  bool walk_lazy = false;
  walk_cmd->add_option("--ladder", walk_ladder, "ladder geometry");
  walk_cmd->add_option("--beta", walk_beta, "inverse temperature");
  walk_cmd->add_flag("--lazy", walk_lazy, "lazify the chain");
  walk_cmd->add_option("--file", walk_file, "chain JSON file");

  // filter -----------------------------------------------------------------
  auto* filter_cmd = app.add_subcommand("filter", "synthesize a gap filter");
  double filter_delta = 0.0, filter_eps = 0.0;
  std::string filter_eps_list;
  filter_cmd->add_option("--delta", filter_delta, "phase gap (radians)")->required();
  filter_cmd->add_option("--eps", filter_eps, "target attenuation");
  filter_cmd->add_option("--eps-list", filter_eps_list, "comma list for a degree curve");

  // gadget-check -----------------------------------------------------------
  auto* gadget_cmd = app.add_subcommand("gadget-check", "selective-phase error-bound sweep");
  int gadget_trials = 20;
  std::string gadget_phis = "0.448798950512827,1.0471975511965976,3.141592653589793,5.235987755982989";
  std::string gadget_eps = "0.1,0.01,0.001";
  gadget_cmd->add_option("--trials", gadget_trials, "number of random chains");
  gadget_cmd->add_option("--phis", gadget_phis, "comma list of phase angles");
  gadget_cmd->add_option("--eps-list", gadget_eps, "comma list of filter targets");

  // fpaa-angles ------------------------------------------------------------
  auto* fpaa_cmd = app.add_subcommand("fpaa-angles", "fixed-point amplification schedule");
  double fpaa_p = 0.0, fpaa_eps = 0.0;
  int fpaa_grid = 50;
  fpaa_cmd->add_option("--p", fpaa_p, "overlap lower bound")->required();
  fpaa_cmd->add_option("--eps", fpaa_eps, "target residual")->required();
  fpaa_cmd->add_option("--p-grid", fpaa_grid, "validation grid points");

  // anneal -----------------------------------------------------------------
  auto* anneal_cmd = app.add_subcommand("anneal", "run the annealing pipeline");
  AnnealCli anneal;
  std::string anneal_config;
  anneal_cmd->add_option("--config", anneal_config, "JSON config file (flags override)");
  auto* opt_ladder = anneal_cmd->add_option("--ladder", anneal.ladder, "ladder geometry");
  auto* opt_betas = anneal_cmd->add_option("--betas", anneal.betas, "comma list of betas");
  auto* opt_eps = anneal_cmd->add_option("--eps", anneal.eps, "total trace-distance budget");
  auto* opt_mode = anneal_cmd->add_option("--mode", anneal.mode, "compiled | exact");
  auto* opt_nolazy = anneal_cmd->add_flag("--no-lazy", anneal.no_lazy, "skip lazification");
  anneal_cmd->add_option("--p-bounds", anneal.p_bounds, "per-stage overlap bounds");

  // benchmark ---------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("benchmark", "resource sweep CSV (queries/ancillas)");
  std::string bench_ladder = "2x3", bench_betas = "0,0.3,0.6,0.9,1.2";
  std::string bench_grid = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6";
  bool bench_full = false, bench_json = false;
  double bench_cq = 1.0, bench_ca = 1.0;
  bench_cmd->add_option("--ladder", bench_ladder, "ladder geometry");
  bench_cmd->add_option("--betas", bench_betas, "comma list of betas");
  bench_cmd->add_option("--eps-grid", bench_grid, "comma list of trace-distance targets");
  bench_cmd->add_flag("--full", bench_full, "evolve states instead of cost-only fast mode");
  bench_cmd->add_flag("--json", bench_json, "emit JSON instead of CSV");
  bench_cmd->add_option("--c-query", bench_cq, "comparison-model query constant");
  bench_cmd->add_option("--c-ancilla", bench_ca, "comparison-model ancilla constant");

  // gibbs -------------------------------------------------------------------
  auto* gibbs_cmd = app.add_subcommand("gibbs", "Gibbs QSample run with schedule verification");
  std::string gibbs_model_file, gibbs_betas = "0,0.3,0.6,0.9,1.2", gibbs_mode = "compiled";
  int gibbs_cols = 2;
  double gibbs_eps = 0.1;
  gibbs_cmd->add_option("--model", gibbs_model_file, "model JSON {rows, cols, betas, eps}");
  gibbs_cmd->add_option("--cols", gibbs_cols, "ladder length");
  gibbs_cmd->add_option("--betas", gibbs_betas, "comma list of betas");
  gibbs_cmd->add_option("--eps", gibbs_eps, "trace-distance budget");
  gibbs_cmd->add_option("--mode", gibbs_mode, "compiled | exact");

  // verify ------------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  std::string verify_suite = "all";
  int verify_trials = 20, verify_pgrid = 50;
  verify_cmd->add_option("--suite", verify_suite, "all | prop1 | cor1 | fpaa | walk | scaling");
  verify_cmd->add_option("--trials", verify_trials, "random chains for prop1/cor1/walk");
  verify_cmd->add_option("--p-grid", verify_pgrid, "grid points for the fpaa sweep");

  CLI11_PARSE(app, argc, argv);

  if (*chain_cmd) {
    qsa::MarkovChain chain = load_chain(chain_ladder, chain_beta, chain_lazy, chain_file);
    json j;
    j["chain"] = qsa::chain_to_json(chain);
    j["lambda2"] = chain.lambda2;
    j["delta"] = chain.delta;
    j["reversibility_residual"] = qsa::detailed_balance_residual(chain.P, chain.pi);
    j["stationary_residual"] =
        ((chain.pi.transpose() * chain.P).transpose() - chain.pi).cwiseAbs().maxCoeff();
    j["seed"] = seed;
    emit_json(out_path, j);
    return 0;
  }

  if (*walk_cmd) {
    qsa::MarkovChain chain = load_chain(walk_ladder, walk_beta, walk_lazy, walk_file);
    qsa::WalkSpectrum spec = qsa::walk_spectrum(chain);
    json j;
    j["n"] = chain.n;
    j["busy_dim"] = spec.busy_dim;
    j["phase_gap"] = spec.phase_gap;
    j["arccos_lambda2"] = std::acos(chain.lambda2);
    j["complement_sym_dim"] = spec.complement_sym_dim;
    j["complement_antisym_dim"] = spec.complement_antisym_dim;
    std::vector<double> phases(spec.busy_phases.data(),
                               spec.busy_phases.data() + spec.busy_dim);
    std::sort(phases.begin(), phases.end());
    j["busy_phases"] = phases;
    emit_json(out_path, j);
    return 0;
  }

  if (*filter_cmd) {
    json j;
    if (!filter_eps_list.empty()) {
      json curve = json::array();
      for (auto [eps, d] : qsa::filter_degree_curve(filter_delta, split_doubles(filter_eps_list)))
        curve.push_back(json{{"eps", eps}, {"d", d}});
      j["Delta"] = filter_delta;
      j["curve"] = curve;
    } else {
      qsa::require(filter_eps > 0.0, qsa::errc::configuration, "pass --eps or --eps-list");
      j = qsa::filter_to_json(qsa::synthesize_filter(filter_delta, filter_eps));
    }
    emit_json(out_path, j);
    return 0;
  }

  if (*gadget_cmd) {
    auto rows = qsa::gadget_bound_sweep(gadget_trials, split_doubles(gadget_phis),
                                        split_doubles(gadget_eps), seed);
    bool all_pass = true;
    json arr = json::array();
    for (const auto& s : rows) {
      double tight = std::abs(std::exp(std::complex<double>(0.0, s.phi)) - 1.0) * s.eps_w;
      bool pass = s.error_norm <= 2.0 * s.eps_w + 1e-9 && s.error_norm <= tight + 1e-9;
      all_pass = all_pass && pass;
      arr.push_back(json{{"chain", s.chain_index},
                         {"n", s.n},
                         {"phi", s.phi},
                         {"eps_w", s.eps_w},
                         {"error_norm", s.error_norm},
                         {"bound_2eps", 2.0 * s.eps_w},
                         {"bound_tight", tight},
                         {"pass", pass}});
    }
    emit_json(out_path, json{{"seed", seed}, {"samples", arr}, {"all_pass", all_pass}});
    return all_pass ? 0 : 1;
  }

  if (*fpaa_cmd) {
    qsa::PhaseSchedule sched = qsa::make_schedule(fpaa_p, fpaa_eps);
    double worst = qsa::fpaa_worst_trace_distance(sched, fpaa_grid);
    json j = qsa::schedule_to_json(sched);
    j["validation_worst_trace_distance"] = worst;
    j["validation_pass"] = worst <= fpaa_eps + 1e-9;
    emit_json(out_path, j);
    return worst <= fpaa_eps + 1e-9 ? 0 : 1;
  }

  if (*anneal_cmd) {
    if (!anneal_config.empty()) {
      AnnealCli from_file;
      from_file.apply_config_file(qsa::read_json_file(anneal_config));
      if (!*opt_ladder) anneal.ladder = from_file.ladder;
      if (!*opt_betas) anneal.betas = from_file.betas;
      if (!*opt_eps) anneal.eps = from_file.eps;
      if (!*opt_mode) anneal.mode = from_file.mode;
      if (!*opt_nolazy) anneal.no_lazy = from_file.no_lazy;
    }
    qsa::AnnealConfig config = anneal.build();
    qsa::AnnealReport report = qsa::run_anneal(config);
    json j = qsa::anneal_report_to_json(report);
    j["config"] = anneal.echo();
    j["csv_row"] = qsa::anneal_report_csv_row(report);
    emit_json(out_path, j);
    return report.final_d_tr <= config.eps ? 0 : 1;
  }

  if (*bench_cmd) {
    qsa::AnnealConfig base;
    base.eps = 0.1;
    qsa::IsingLadder lad = qsa::IsingLadder::open(parse_ladder(bench_ladder));
    for (double beta : split_doubles(bench_betas))
      base.chains.push_back(qsa::build_glauber_chain(lad, beta, true));
    qsa::CostModel model;
    model.c_query = bench_cq;
    model.c_ancilla = bench_ca;
    auto rows = qsa::benchmark_sweep(base, split_doubles(bench_grid), !bench_full, model);
    if (bench_json)
      emit_json(out_path, qsa::benchmark_rows_to_json(rows));
    else
      emit(out_path, qsa::benchmark_csv(rows));
    return 0;
  }

  if (*gibbs_cmd) {
    qsa::GibbsSpec spec;
    if (!gibbs_model_file.empty()) {
      spec = qsa::gibbs_spec_from_json(qsa::read_json_file(gibbs_model_file));
    } else {
      spec.cols = gibbs_cols;
      spec.betas = split_doubles(gibbs_betas);
      spec.eps = gibbs_eps;
    }
    qsa::GibbsModel model = qsa::make_gibbs_model(qsa::IsingLadder::open(spec.cols), spec.betas);
    qsa::ScheduleCheck check = qsa::verify_schedule(model);
    qsa::AnnealReport report = qsa::gibbs_qsample_run(
        model, spec.eps,
        gibbs_mode == "exact" ? qsa::RunMode::exact_projector : qsa::RunMode::compiled);
    json j;
    j["schedule"] = json{{"min_overlap", check.min_overlap},
                         {"pass", check.pass},
                         {"ell_ratio", check.ell_ratio}};
    j["report"] = qsa::anneal_report_to_json(report);
    j["config"] = json{{"cols", spec.cols}, {"betas", spec.betas}, {"eps", spec.eps},
                       {"mode", gibbs_mode}};
    emit_json(out_path, j);
    return report.final_d_tr <= spec.eps && report.tvd_final <= report.final_d_tr + 1e-8 ? 0 : 1;
  }

  if (*verify_cmd) {
    bool all_pass = true;
    std::string text;
    auto line = [&](const std::string& name, bool pass, double value, const std::string& detail) {
      all_pass = all_pass && pass;
      text += std::string(pass ? "[PASS] " : "[FAIL] ") + name + " value=" +
              qsa::format_double(value) + " " + detail + "\n";
    };
    bool all = verify_suite == "all";

    if (all || verify_suite == "prop1") {
      auto rows = qsa::gadget_bound_sweep(
          verify_trials, {M_PI / 7, M_PI / 3, M_PI, 5 * M_PI / 3}, {1e-1, 1e-2, 1e-3}, seed);
      double worst = 0.0;
      bool ok = true;
      for (const auto& s : rows) {
        double tight = std::abs(std::exp(std::complex<double>(0.0, s.phi)) - 1.0) * s.eps_w;
        worst = std::max(worst, s.error_norm / (2.0 * s.eps_w));
        ok = ok && s.error_norm <= 2.0 * s.eps_w + 1e-9 && s.error_norm <= tight + 1e-9;
      }
      line("prop1.gadget_error_bound", ok, worst,
           "max error_norm/(2 eps_w) over " + std::to_string(rows.size()) + " samples");
    }
    if (all || verify_suite == "cor1") {
      qsa::Rng rng(seed);
      double worst = 0.0;
      bool ok = true;
      for (int t = 0; t < verify_trials; ++t) {
        int n = 2 + static_cast<int>(rng.raw() % 15);
        qsa::WalkSpectrum spec = qsa::walk_spectrum(qsa::random_reversible_chain(n, rng));
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          qsa::ChebyshevFilter filter = qsa::synthesize_filter(spec.phase_gap, eps);
          double norm = qsa::filter_operator_norm(spec, filter);
          worst = std::max(worst, norm / eps);
          ok = ok && norm <= eps;
        }
      }
      line("cor1.projector_norm", ok, worst, "max ||Upsilon(W)-Pi0||/eps_w");
    }
    if (all || verify_suite == "fpaa") {
      bool ok = true;
      double worst = 0.0;
      for (double p : {1.0 / 15.0, 0.1, 0.25, 0.5})
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          qsa::PhaseSchedule sched = qsa::make_schedule(p, eps);
          double w = qsa::fpaa_worst_trace_distance(sched, verify_pgrid);
          worst = std::max(worst, w / eps);
          ok = ok && w <= eps + 1e-9;
        }
      line("fpaa.fixed_point_sweep", ok, worst, "max trace_distance/eps_fp over the grid");
    }
    if (all || verify_suite == "walk") {
      qsa::Rng rng(seed);
      double worst = 0.0;
      for (int t = 0; t < std::min(verify_trials, 8); ++t) {
        int n = 2 + static_cast<int>(rng.raw() % 7);
        worst = std::max(worst, qsa::walk_engine_vs_dense(qsa::random_reversible_chain(n, rng),
                                                          qsa::mix_seed(seed, t)));
      }
      line("walk.busy_vs_dense", worst <= 1e-10, worst, "max |engine - dense| entry");
    }
    if (all || verify_suite == "scaling") {
      qsa::ScalingFits fits = qsa::scaling_fits();
      line("scaling.fpaa_length", fits.fpaa_length_slope >= 0.8 && fits.fpaa_length_slope <= 1.2,
           fits.fpaa_length_slope, "log(L+1) vs log(1/sqrt p)");
      line("scaling.filter_degree",
           fits.filter_degree_slope >= 0.5 && fits.filter_degree_slope <= 1.5,
           fits.filter_degree_slope, "d vs (1/Delta) ln(1/eps)");
      line("scaling.our_queries", fits.our_query_slope >= 0.8 && fits.our_query_slope <= 1.2,
           fits.our_query_slope, "log(queries) vs log(1/sqrt p_min)");
      line("scaling.wocjan_queries",
           fits.wocjan_query_slope >= 1.8 && fits.wocjan_query_slope <= 2.2,
           fits.wocjan_query_slope, "comparison model on the same axis");
    }
    emit(out_path, text);
    return all_pass ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qsa::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
