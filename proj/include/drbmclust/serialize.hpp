#pragma once
// JSON serialization for models and reports. nlohmann::json keeps keys
// sorted and prints shortest round-trip decimals, so identical inputs give
// byte-identical files and a model survives save/load bit-exactly.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "drbm.hpp"
#include "pipeline.hpp"

namespace drbmclust {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows; ++i) {
    json r = json::array();
    for (size_t j = 0; j < m.cols; ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.size(), j.empty() ? 0 : j[0].size());
  for (size_t i = 0; i < m.rows; ++i) {
    if (j[i].size() != m.cols) throw std::runtime_error("matrix_from_json: ragged rows");
    for (size_t c = 0; c < m.cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

inline json model_to_json(const DrbmModel& model) {
  json layers = json::array();
  for (const RbmLayer& l : model.layers) {
    json jl;
    jl["w"] = matrix_to_json(l.w);
    jl["b"] = l.b;
    jl["c"] = l.c;
    layers.push_back(std::move(jl));
  }
  json out;
  out["format"] = "drbm-model";
  out["layers"] = std::move(layers);
  return out;
}

inline DrbmModel model_from_json(const json& j) {
  if (!j.contains("layers")) throw std::runtime_error("model_from_json: missing layers");
  DrbmModel model;
  for (const json& jl : j["layers"]) {
    RbmLayer l;
    l.w = matrix_from_json(jl["w"]);
    l.b = jl["b"].get<std::vector<double>>();
    l.c = jl["c"].get<std::vector<double>>();
    if (l.b.size() != l.n_visible() || l.c.size() != l.n_hidden())
      throw std::runtime_error("model_from_json: bias size mismatch");
    model.layers.push_back(std::move(l));
  }
  return model;
}

inline void save_model(const std::string& path, const DrbmModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << model_to_json(model).dump(2) << "\n";
}

inline DrbmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

inline json run_report_to_json(const RunReport& r, bool labeled) {
  json jr;
  jr["run_index"] = r.run_index;
  jr["ok"] = r.ok;
  if (!r.ok) {
    jr["error"] = r.error;
    return jr;
  }
  jr["n_clusters"] = r.n_clusters;
  jr["bic_curve"] = r.bic_curve;
  if (labeled) {
    jr["eta"] = r.eta;
    jr["nmi"] = r.nmi_value;
  }
  return jr;
}

inline json pipeline_report_to_json(const PipelineReport& rep) {
  bool labeled = rep.mean_eta >= 0.0;
  json out;
  json runs = json::array();
  for (const RunReport& r : rep.runs) runs.push_back(run_report_to_json(r, labeled));
  out["runs"] = std::move(runs);
  json agg;
  agg["n_clusters_per_run"] = rep.n_clusters_per_run;
  if (labeled) {
    agg["mean_eta"] = rep.mean_eta;
    agg["std_eta"] = rep.std_eta;
    agg["mean_nmi"] = rep.mean_nmi;
    agg["std_nmi"] = rep.std_nmi;
  }
  out["aggregate"] = std::move(agg);
  return out;
}

inline json comparison_to_json(const ComparisonReport& cmp) {
  json out;
  json methods = json::array();
  for (size_t i = 0; i < cmp.methods.size(); ++i) {
    const MethodReport& m = cmp.methods[i];
    json jm;
    jm["method"] = m.method;
    jm["ok"] = m.ok;
    if (!m.ok) {
      jm["error"] = m.error;
    } else {
      jm["report"] = pipeline_report_to_json(m.report);
      if (cmp.eta_ranks[i] > 0) jm["rank"] = cmp.eta_ranks[i];
    }
    methods.push_back(std::move(jm));
  }
  out["methods"] = std::move(methods);
  return out;
}

// assignments file: one `row_index,cluster_id` line per sample
inline void save_assignments_csv(const std::string& path, const std::vector<int>& assignments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_assignments_csv: cannot open " + path);
  out << "row_index,cluster_id\n";
  for (size_t i = 0; i < assignments.size(); ++i) out << i << "," << assignments[i] << "\n";
}

inline std::vector<int> load_assignments_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_assignments_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_assignments_csv: empty file");
  std::vector<int> out;
  size_t expect = 0;
  while (std::getline(in, line)) {
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    size_t comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("load_assignments_csv: malformed line '" + t + "'");
    size_t row = std::stoul(t.substr(0, comma));
    if (row != expect) throw std::runtime_error("load_assignments_csv: rows out of order");
    out.push_back(std::stoi(t.substr(comma + 1)));
    ++expect;
  }
  return out;
}

}  // namespace drbmclust
