#pragma once
// Three-stage pipeline: deep RBM features -> BIC cluster count -> Kohonen
// clustering, plus the multi-method comparison harness.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "bic.hpp"
#include "dataset.hpp"
#include "drbm.hpp"
#include "kohonen.hpp"
#include "metrics.hpp"

namespace drbmclust {

struct PipelineConfig {
  // dataset source: either a csv path or a generator spec
  std::string data_path;
  bool has_header = true;
  int label_column = -1;
  std::string generator;  // "moons" | "flame" | "" (use data_path)
  size_t gen_n_per_class = 150;
  double gen_noise = 0.05;

  // feature extractor
  std::vector<size_t> hidden_sizes = {50, 50, 50, 50, 10};
  size_t epochs = 2000;
  double lr0 = 0.1;
  double lr_decay_time = 0.0;  // <= 0: use epochs
  size_t batch_size = 10;
  StackTransport transport = StackTransport::probabilities;
  bool feature_renorm = true;  // rescale extracted features to [0.1, 0.9]

  // cluster-count selection
  size_t c_max = 0;  // 0: min(20, ceil(sqrt(N)))
  size_t restarts = 5;
  double reg_multiplier = 1e-6;  // ridge = multiplier * mean feature variance

  // kohonen
  size_t som_iterations = 0;  // 0: 100 * N
  NeighborhoodDenom neighborhood_denom = NeighborhoodDenom::sigma_squared;

  // evaluation
  MappingMethod mapping = MappingMethod::hungarian;
  uint64_t seed = 0;
  size_t runs = 10;
};

struct RunReport {
  size_t run_index = 0;
  size_t n_clusters = 0;
  std::vector<int> assignments;
  double eta = -1.0;  // < 0 when the dataset has no labels
  double nmi_value = -1.0;
  std::vector<double> bic_curve;
  bool ok = true;
  std::string error;
};

struct PipelineReport {
  std::vector<RunReport> runs;
  double mean_eta = -1.0;
  double std_eta = 0.0;  // population std over successful runs
  double mean_nmi = -1.0;
  double std_nmi = 0.0;
  std::vector<size_t> n_clusters_per_run;
};

inline Dataset resolve_dataset(const PipelineConfig& cfg) {
  if (cfg.generator == "moons") return gen_moons(cfg.gen_n_per_class, cfg.gen_noise, cfg.seed);
  if (cfg.generator == "flame") return gen_flame(cfg.gen_n_per_class, cfg.seed);
  if (!cfg.generator.empty()) throw std::invalid_argument("unknown generator: " + cfg.generator);
  if (cfg.data_path.empty()) throw std::invalid_argument("config needs a data path or generator");
  return load_csv(cfg.data_path, cfg.has_header, cfg.label_column);
}

// Rescale every column to [0.1, 0.9] (constant columns -> 0.5).
inline Matrix renorm_features(const Matrix& f) {
  Dataset tmp;
  tmp.x = f;
  return normalize_minmax(tmp).first.x;
}

// One end-to-end run on already-normalized data.
inline RunReport run_once(const Matrix& xnorm, const std::vector<int>& labels,
                          const PipelineConfig& cfg, size_t run_index) {
  RunReport rep;
  rep.run_index = run_index;

  DrbmTrainConfig dcfg;
  dcfg.cd.epochs = cfg.epochs;
  dcfg.cd.lr0 = cfg.lr0;
  dcfg.cd.lr_decay_time = cfg.lr_decay_time;
  dcfg.cd.batch_size = cfg.batch_size;
  dcfg.cd.seed = derive_seed(cfg.seed, "drbm", run_index);
  dcfg.transport = cfg.transport;
  DrbmModel model = train_drbm(xnorm, cfg.hidden_sizes, dcfg);
  Matrix feats = extract_features(model, xnorm);
  if (cfg.feature_renorm) feats = renorm_features(feats);

  size_t c_max = cfg.c_max > 0 ? cfg.c_max : default_c_max(feats.rows);
  double reg = cfg.reg_multiplier * detail::mean_feature_variance(feats);
  BicResult bic = select_clusters(feats, c_max, cfg.restarts, derive_seed(cfg.seed, "bic", run_index), reg);
  rep.n_clusters = bic.n_clusters;
  rep.bic_curve = bic.bic;

  size_t iters = cfg.som_iterations > 0 ? cfg.som_iterations : 100 * feats.rows;
  KohonenNet net = init_kohonen(feats.cols, bic.n_clusters, iters,
                                derive_seed(cfg.seed, "som-init", run_index), cfg.neighborhood_denom);
  train_kohonen(net, feats, iters, derive_seed(cfg.seed, "som-train", run_index));
  rep.assignments = assign_clusters(net, feats);

  if (!labels.empty()) {
    rep.eta = clustering_accuracy(rep.assignments, labels, cfg.mapping).eta;
    rep.nmi_value = nmi(rep.assignments, labels);
  }
  return rep;
}

inline void aggregate_runs(PipelineReport& rep) {
  double se = 0.0, sn = 0.0;
  size_t n = 0;
  bool labeled = false;
  for (const RunReport& r : rep.runs) {
    if (!r.ok) continue;
    rep.n_clusters_per_run.push_back(r.n_clusters);
    if (r.eta >= 0.0) {
      labeled = true;
      se += r.eta;
      sn += r.nmi_value;
    }
    ++n;
  }
  if (n == 0 || !labeled) return;
  rep.mean_eta = se / static_cast<double>(n);
  rep.mean_nmi = sn / static_cast<double>(n);
  double ve = 0.0, vn = 0.0;
  for (const RunReport& r : rep.runs) {
    if (!r.ok || r.eta < 0.0) continue;
    ve += (r.eta - rep.mean_eta) * (r.eta - rep.mean_eta);
    vn += (r.nmi_value - rep.mean_nmi) * (r.nmi_value - rep.mean_nmi);
  }
  rep.std_eta = std::sqrt(ve / static_cast<double>(n));
  rep.std_nmi = std::sqrt(vn / static_cast<double>(n));
}

// Full seed sweep: normalize once, then `runs` independent runs with
// derived per-stage seeds. A failed run is recorded, not fatal, but the
// aggregate needs at least one success.
inline PipelineReport run_pipeline(const Dataset& ds, const PipelineConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run_pipeline: runs must be >= 1");
  Matrix xnorm = normalize_minmax(ds).first.x;
  PipelineReport rep;
  for (size_t r = 0; r < cfg.runs; ++r) {
    try {
      rep.runs.push_back(run_once(xnorm, ds.labels, cfg, r));
    } catch (const std::exception& e) {
      RunReport bad;
      bad.run_index = r;
      bad.ok = false;
      bad.error = e.what();
      rep.runs.push_back(std::move(bad));
    }
  }
  aggregate_runs(rep);
  bool any_ok = false;
  for (const RunReport& r : rep.runs) any_ok = any_ok || r.ok;
  if (!any_ok) throw std::runtime_error("run_pipeline: every run failed: " + rep.runs[0].error);
  return rep;
}

// ---- multi-method comparison ----

struct MethodReport {
  std::string method;
  PipelineReport report;
  bool ok = true;
  std::string error;
};

struct ComparisonReport {
  std::vector<MethodReport> methods;
  std::vector<int> eta_ranks;  // rank by mean eta (1 = best); -1 for failed cells
};

inline const std::vector<std::string>& comparison_method_names() {
  static const std::vector<std::string> names = {"kmeans", "em", "kohonen-raw", "rbm-pipeline",
                                                 "drbm-pipeline"};
  return names;
}

// Baselines run at k = number of true classes (labeled data); unlabeled
// data falls back to the DRBM pipeline's modal cluster count.
inline PipelineReport run_baseline(const std::string& method, const Matrix& xnorm,
                                   const std::vector<int>& labels, size_t k,
                                   const PipelineConfig& cfg) {
  PipelineReport rep;
  for (size_t r = 0; r < cfg.runs; ++r) {
    RunReport run;
    run.run_index = r;
    try {
      if (method == "kmeans") {
        run.assignments = kmeans(xnorm, k, derive_seed(cfg.seed, "cmp-kmeans", r)).assignments;
      } else if (method == "em") {
        double reg = cfg.reg_multiplier * detail::mean_feature_variance(xnorm);
        run.assignments = em_cluster(xnorm, k, derive_seed(cfg.seed, "cmp-em", r), reg).assignments;
      } else if (method == "kohonen-raw") {
        size_t iters = cfg.som_iterations > 0 ? cfg.som_iterations : 100 * xnorm.rows;
        KohonenNet net = init_kohonen(xnorm.cols, k, iters, derive_seed(cfg.seed, "cmp-som-init", r),
                                      cfg.neighborhood_denom);
        train_kohonen(net, xnorm, iters, derive_seed(cfg.seed, "cmp-som-train", r));
        run.assignments = assign_clusters(net, xnorm);
      } else {
        throw std::invalid_argument("unknown baseline: " + method);
      }
      run.n_clusters = k;
      if (!labels.empty()) {
        run.eta = clustering_accuracy(run.assignments, labels, cfg.mapping).eta;
        run.nmi_value = nmi(run.assignments, labels);
      }
    } catch (const std::exception& e) {
      run.ok = false;
      run.error = e.what();
    }
    rep.runs.push_back(std::move(run));
  }
  aggregate_runs(rep);
  return rep;
}

// Runs every comparison method on one dataset and ranks them by mean eta.
inline ComparisonReport run_comparison(const Dataset& ds, const PipelineConfig& cfg) {
  ComparisonReport cmp;
  Matrix xnorm = normalize_minmax(ds).first.x;

  PipelineConfig deep = cfg;
  PipelineConfig shallow = cfg;
  shallow.hidden_sizes = {50};

  MethodReport drbm_rep;
  drbm_rep.method = "drbm-pipeline";
  try {
    drbm_rep.report = run_pipeline(ds, deep);
  } catch (const std::exception& e) {
    drbm_rep.ok = false;
    drbm_rep.error = e.what();
  }

  size_t k = 0;
  if (ds.has_labels) {
    size_t nk = 0;
    detail::compact_labels(ds.labels, nk);
    k = nk;
  } else if (drbm_rep.ok) {
    std::map<size_t, size_t> freq;
    for (size_t c : drbm_rep.report.n_clusters_per_run) freq[c]++;
    size_t best = 0, cnt = 0;
    for (auto& kv : freq)
      if (kv.second > cnt) {
        best = kv.first;
        cnt = kv.second;
      }
    k = best;
  } else {
    k = 2;
  }

  for (const std::string& name : {std::string("kmeans"), std::string("em"), std::string("kohonen-raw")}) {
    MethodReport mr;
    mr.method = name;
    try {
      mr.report = run_baseline(name, xnorm, ds.labels, k, cfg);
      bool any_ok = false;
      for (const RunReport& r : mr.report.runs) any_ok = any_ok || r.ok;
      if (!any_ok) {
        mr.ok = false;
        mr.error = mr.report.runs.empty() ? "no runs" : mr.report.runs[0].error;
      }
    } catch (const std::exception& e) {
      mr.ok = false;
      mr.error = e.what();
    }
    cmp.methods.push_back(std::move(mr));
  }

  MethodReport rbm_rep;
  rbm_rep.method = "rbm-pipeline";
  try {
    rbm_rep.report = run_pipeline(ds, shallow);
  } catch (const std::exception& e) {
    rbm_rep.ok = false;
    rbm_rep.error = e.what();
  }
  cmp.methods.push_back(std::move(rbm_rep));
  cmp.methods.push_back(std::move(drbm_rep));

  // rank successful cells by mean eta; failures are excluded
  std::vector<double> etas;
  std::vector<size_t> which;
  for (size_t i = 0; i < cmp.methods.size(); ++i) {
    if (cmp.methods[i].ok && cmp.methods[i].report.mean_eta >= 0.0) {
      etas.push_back(cmp.methods[i].report.mean_eta);
      which.push_back(i);
    }
  }
  cmp.eta_ranks.assign(cmp.methods.size(), -1);
  std::vector<int> ranks = rank_methods(etas, true);
  for (size_t j = 0; j < which.size(); ++j) cmp.eta_ranks[which[j]] = ranks[j];
  return cmp;
}

// ---- flat key/value config files ----

inline std::vector<size_t> parse_size_list(const std::string& s) {
  std::vector<size_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) {
        out.push_back(static_cast<size_t>(std::stoul(cur)));
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  return out;
}

inline void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "data_path") cfg.data_path = value;
  else if (key == "has_header") cfg.has_header = value == "true" || value == "1";
  else if (key == "label_column") cfg.label_column = std::stoi(value);
  else if (key == "generator") cfg.generator = value;
  else if (key == "gen_n_per_class") cfg.gen_n_per_class = std::stoul(value);
  else if (key == "gen_noise") cfg.gen_noise = std::stod(value);
  else if (key == "layers") cfg.hidden_sizes = parse_size_list(value);
  else if (key == "epochs") cfg.epochs = std::stoul(value);
  else if (key == "lr0") cfg.lr0 = std::stod(value);
  else if (key == "lr_decay_time") cfg.lr_decay_time = std::stod(value);
  else if (key == "batch_size") cfg.batch_size = std::stoul(value);
  else if (key == "transport") {
    if (value == "probabilities") cfg.transport = StackTransport::probabilities;
    else if (value == "sampled") cfg.transport = StackTransport::sampled;
    else throw std::invalid_argument("config: transport must be probabilities|sampled");
  } else if (key == "feature_renorm") cfg.feature_renorm = value == "true" || value == "1";
  else if (key == "c_max") cfg.c_max = std::stoul(value);
  else if (key == "restarts") cfg.restarts = std::stoul(value);
  else if (key == "reg_multiplier") cfg.reg_multiplier = std::stod(value);
  else if (key == "som_iterations") cfg.som_iterations = std::stoul(value);
  else if (key == "neighborhood_denom") {
    if (value == "sigma-squared") cfg.neighborhood_denom = NeighborhoodDenom::sigma_squared;
    else if (value == "sigma") cfg.neighborhood_denom = NeighborhoodDenom::sigma;
    else throw std::invalid_argument("config: neighborhood_denom must be sigma|sigma-squared");
  } else if (key == "mapping") {
    if (value == "hungarian") cfg.mapping = MappingMethod::hungarian;
    else if (value == "majority") cfg.mapping = MappingMethod::majority;
    else throw std::invalid_argument("config: mapping must be hungarian|majority");
  } else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "runs") cfg.runs = std::stoul(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

// `key = value` lines; '#' starts a comment; blank lines ignored.
inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  PipelineConfig cfg;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

}  // namespace drbmclust
