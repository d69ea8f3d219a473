#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsa/anneal.hpp"
#include "qsa/cost.hpp"
#include "qsa/error.hpp"
#include "qsa/fpaa.hpp"
#include "qsa/gibbs.hpp"
#include "qsa/markov.hpp"

namespace qsa {

using json = nlohmann::json;

// Shortest round-trip decimal rendering; shared by the CSV emitters so
// identical runs produce identical bytes.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline json chain_to_json(const MarkovChain& chain) {
  json j;
  j["n"] = chain.n;
  // Eigen stores column-major; emit row-major per the interchange format.
  std::vector<double> row_major(chain.n * chain.n);
  for (int x = 0; x < chain.n; ++x)
    for (int y = 0; y < chain.n; ++y) row_major[x * chain.n + y] = chain.P(x, y);
  j["P"] = row_major;
  j["pi"] = std::vector<double>(chain.pi.data(), chain.pi.data() + chain.pi.size());
  return j;
}

inline MarkovChain chain_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    auto p = j.at("P").get<std::vector<double>>();
    require(static_cast<int>(p.size()) == n * n, errc::parse,
            "field P must hold n*n row-major entries");
    Eigen::MatrixXd P(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) P(x, y) = p[x * n + y];
    std::optional<Eigen::VectorXd> pi;
    if (j.contains("pi")) {
      auto v = j.at("pi").get<std::vector<double>>();
      require(static_cast<int>(v.size()) == n, errc::parse, "field pi must hold n entries");
      pi = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
    }
    return MarkovChain::from_matrix(std::move(P), std::move(pi));
  } catch (const json::exception& e) {
    fail(errc::parse, std::string("chain file: ") + e.what());
  }
}

inline json filter_to_json(const ChebyshevFilter& filter) {
  return json{{"Delta", filter.Delta},
              {"eps_target", filter.eps_target},
              {"d", filter.d},
              {"achieved_eps", filter.achieved_eps}};
}

inline json schedule_to_json(const PhaseSchedule& sched) {
  json j;
  j["L"] = sched.L;
  j["alphas"] = std::vector<double>(sched.alphas.data(), sched.alphas.data() + sched.alphas.size());
  j["betas"] = std::vector<double>(sched.betas.data(), sched.betas.data() + sched.betas.size());
  j["p_lower"] = sched.p_lower;
  j["eps_fp"] = sched.eps_fp;
  j["gamma"] = sched.gamma;
  return j;
}

inline json stage_report_to_json(const StageReport& sr) {
  return json{{"i", sr.i},
              {"p_bound", sr.p_bound},
              {"p_actual", sr.p_actual},
              {"L", sr.L},
              {"eps_fp", sr.eps_fp},
              {"eps_w", sr.eps_w},
              {"d_source", sr.d_source},
              {"d_target", sr.d_target},
              {"queries", sr.queries},
              {"d_tr_measured", sr.d_tr_measured}};
}

inline json anneal_report_to_json(const AnnealReport& report) {
  json stages = json::array();
  for (const auto& sr : report.stages) stages.push_back(stage_report_to_json(sr));
  return json{{"stages", stages},
              {"total_queries", report.total_queries},
              {"final_d_tr", report.final_d_tr},
              {"ancilla_count", report.ancilla_count},
              {"register_qubits", report.register_qubits},
              {"eps", report.eps},
              {"mode", report.mode == RunMode::compiled ? "compiled" : "exact"},
              {"tvd_final", report.tvd_final},
              {"final_marginal",
               std::vector<double>(report.final_marginal.data(),
                                   report.final_marginal.data() + report.final_marginal.size())}};
}

inline std::string anneal_report_csv_row(const AnnealReport& report) {
  return format_double(report.eps) + "," + std::to_string(report.total_queries) + "," +
         format_double(report.final_d_tr) + "," + std::to_string(report.ancilla_count);
}

inline std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "log10_inv_eps,our_queries,wocjan_queries,our_ancillas,wocjan_ancillas\n";
  for (const auto& row : rows) {
    out += format_double(row.log10_inv_eps) + "," + format_double(row.our_queries) + "," +
           format_double(row.wocjan_queries) + "," + format_double(row.our_ancillas) + "," +
           format_double(row.wocjan_ancillas) + "\n";
  }
  return out;
}

inline json benchmark_rows_to_json(const std::vector<BenchmarkRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows)
    arr.push_back(json{{"log10_inv_eps", row.log10_inv_eps},
                       {"our_queries", row.our_queries},
                       {"wocjan_queries", row.wocjan_queries},
                       {"our_ancillas", row.our_ancillas},
                       {"wocjan_ancillas", row.wocjan_ancillas}});
  return arr;
}

// Debug dump of a lifted vector: row-major complex pairs.
inline json grid_to_json(const LiftedVector& u) {
  json rows = json::array();
  for (int x = 0; x < u.rows(); ++x) {
    json row = json::array();
    for (int y = 0; y < u.cols(); ++y) row.push_back(json::array({u(x, y).real(), u(x, y).imag()}));
    rows.push_back(row);
  }
  return json{{"n", u.rows()}, {"amplitudes", rows}};
}

struct GibbsSpec {
  int cols = 0;
  std::vector<double> betas;
  double eps = 0.1;
};

inline GibbsSpec gibbs_spec_from_json(const json& j) {
  try {
    GibbsSpec spec;
    require(j.at("rows").get<int>() == 2, errc::parse, "only 2-row ladders are supported");
    spec.cols = j.at("cols").get<int>();
    spec.betas = j.at("betas").get<std::vector<double>>();
    spec.eps = j.at("eps").get<double>();
    return spec;
  } catch (const json::exception& e) {
    fail(errc::parse, std::string("gibbs model file: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::parse, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::parse, path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), errc::parse, "cannot open " + path + " for writing");
  out << content;
}

}  // namespace qsa
