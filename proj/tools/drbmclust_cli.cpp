// Command-line front end: dataset generation, feature-extractor training,
// cluster-count prediction, full pipeline runs, method comparison, and
// metric evaluation of saved assignment files.

#include <CLI11.hpp>

#include <drbmclust/drbmclust.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace drbmclust;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string data_path;
  std::string generator;
  size_t n_per_class = 150;
  double noise = 0.05;
  int label_column = -1;
  bool no_header = false;
  uint64_t seed = 0;
  size_t runs = 10;
  std::string layers;
  size_t epochs = 0;
  double lr = 0.0;
  double lr_decay_time = 0.0;
  size_t batch = 0;
  std::string transport;
  size_t cmax = 0;
  size_t restarts = 0;
  double reg_multiplier = 0.0;
  size_t som_iterations = 0;
  std::string neighborhood_denom;
  std::string mapping;
  bool paper_scale = false;
  int feature_renorm = -1;
  std::string out_dir = "out";
};

void add_data_flags(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--data", f.data_path, "input CSV path");
  sub->add_option("--generator", f.generator, "synthetic dataset: moons|flame");
  sub->add_option("--n", f.n_per_class, "samples per class for generators");
  sub->add_option("--noise", f.noise, "noise level for the moons generator");
  sub->add_option("--label-column", f.label_column, "0-based label column (-1 = unlabeled)");
  sub->add_flag("--no-header", f.no_header, "CSV has no header row");
}

void add_pipeline_flags(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "flat key=value config file");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--runs", f.runs, "number of independent runs");
  sub->add_option("--layers", f.layers, "hidden layer sizes, e.g. 50,50,10");
  sub->add_option("--epochs", f.epochs, "CD-1 epochs per layer");
  sub->add_option("--lr", f.lr, "initial learning rate");
  sub->add_option("--lr-decay-time", f.lr_decay_time, "learning-rate decay time constant");
  sub->add_option("--batch", f.batch, "minibatch size");
  sub->add_option("--transport", f.transport, "stack transport: probabilities|sampled");
  sub->add_option("--cmax", f.cmax, "largest candidate cluster count");
  sub->add_option("--restarts", f.restarts, "EM restarts per candidate count");
  sub->add_option("--reg-multiplier", f.reg_multiplier, "covariance ridge multiplier");
  sub->add_option("--som-iterations", f.som_iterations, "Kohonen presentations (0 = 100*N)");
  sub->add_option("--neighborhood-denom", f.neighborhood_denom,
                  "neighborhood denominator: sigma|sigma-squared");
  sub->add_option("--mapping", f.mapping, "accuracy mapping: hungarian|majority");
  sub->add_flag("--paper-scale", f.paper_scale, "use the long training schedule (50000 epochs)");
  sub->add_option("--feature-renorm", f.feature_renorm,
                  "rescale extracted features to [0.1,0.9]: 1|0");
  sub->add_option("--out", f.out_dir, "output directory");
}

PipelineConfig build_config(const CLI::App* sub, const CommonFlags& f) {
  PipelineConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  if (sub->count("--data")) cfg.data_path = f.data_path;
  if (sub->count("--generator")) cfg.generator = f.generator;
  if (sub->count("--n")) cfg.gen_n_per_class = f.n_per_class;
  if (sub->count("--noise")) cfg.gen_noise = f.noise;
  if (sub->count("--label-column")) cfg.label_column = f.label_column;
  if (sub->count("--no-header")) cfg.has_header = false;
  if (sub->count("--seed")) cfg.seed = f.seed;
  if (sub->count("--runs")) cfg.runs = f.runs;
  if (sub->count("--layers")) cfg.hidden_sizes = parse_size_list(f.layers);
  if (sub->count("--epochs")) cfg.epochs = f.epochs;
  if (sub->count("--lr")) cfg.lr0 = f.lr;
  if (sub->count("--lr-decay-time")) cfg.lr_decay_time = f.lr_decay_time;
  if (sub->count("--batch")) cfg.batch_size = f.batch;
  if (sub->count("--transport")) apply_config_entry(cfg, "transport", f.transport);
  if (sub->count("--cmax")) cfg.c_max = f.cmax;
  if (sub->count("--restarts")) cfg.restarts = f.restarts;
  if (sub->count("--reg-multiplier")) cfg.reg_multiplier = f.reg_multiplier;
  if (sub->count("--som-iterations")) cfg.som_iterations = f.som_iterations;
  if (sub->count("--neighborhood-denom"))
    apply_config_entry(cfg, "neighborhood_denom", f.neighborhood_denom);
  if (sub->count("--mapping")) apply_config_entry(cfg, "mapping", f.mapping);
  if (sub->count("--feature-renorm")) cfg.feature_renorm = f.feature_renorm != 0;
  if (f.paper_scale) cfg.epochs = 50000;
  return cfg;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
}

std::string format_pipeline_text(const PipelineReport& rep) {
  std::ostringstream os;
  bool labeled = rep.mean_eta >= 0.0;
  os << "run   n_clusters";
  if (labeled) os << "        eta        nmi";
  os << "  status\n";
  char buf[160];
  for (const RunReport& r : rep.runs) {
    if (r.ok && labeled)
      std::snprintf(buf, sizeof(buf), "%3zu   %10zu   %8.4f   %8.4f  ok\n", r.run_index,
                    r.n_clusters, r.eta, r.nmi_value);
    else if (r.ok)
      std::snprintf(buf, sizeof(buf), "%3zu   %10zu  ok\n", r.run_index, r.n_clusters);
    else
      std::snprintf(buf, sizeof(buf), "%3zu   failed: %s\n", r.run_index, r.error.c_str());
    os << buf;
  }
  if (labeled) {
    std::snprintf(buf, sizeof(buf), "\nmean eta %.4f +- %.4f   mean nmi %.4f +- %.4f\n",
                  rep.mean_eta, rep.std_eta, rep.mean_nmi, rep.std_nmi);
    os << buf;
  }
  os << "cluster counts per run:";
  for (size_t c : rep.n_clusters_per_run) os << " " << c;
  os << "\n";
  return os.str();
}

std::string format_comparison_text(const ComparisonReport& cmp) {
  std::ostringstream os;
  os << "method            mean_eta    std_eta   mean_nmi   rank\n";
  char buf[160];
  for (size_t i = 0; i < cmp.methods.size(); ++i) {
    const MethodReport& m = cmp.methods[i];
    if (!m.ok) {
      std::snprintf(buf, sizeof(buf), "%-15s   failed: %s\n", m.method.c_str(), m.error.c_str());
    } else if (m.report.mean_eta >= 0.0) {
      std::snprintf(buf, sizeof(buf), "%-15s   %8.4f   %8.4f   %8.4f   %4d\n", m.method.c_str(),
                    m.report.mean_eta, m.report.std_eta, m.report.mean_nmi, cmp.eta_ranks[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%-15s   (unlabeled data: no accuracy)\n", m.method.c_str());
    }
    os << buf;
  }
  return os.str();
}

int cmd_generate(const std::string& dataset, size_t n, double noise, uint64_t seed,
                 const std::string& out_file) {
  Dataset ds;
  if (dataset == "moons") ds = gen_moons(n, noise, seed);
  else if (dataset == "flame") ds = gen_flame(n, seed);
  else throw std::invalid_argument("generate: dataset must be moons|flame");
  save_csv(out_file, ds);
  std::cout << "wrote " << ds.x.rows << " samples to " << out_file << "\n";
  return 0;
}

int cmd_train(const CLI::App* sub, const CommonFlags& f) {
  PipelineConfig cfg = build_config(sub, f);
  Dataset ds = resolve_dataset(cfg);
  Matrix xnorm = normalize_minmax(ds).first.x;
  DrbmTrainConfig dcfg;
  dcfg.cd.epochs = cfg.epochs;
  dcfg.cd.lr0 = cfg.lr0;
  dcfg.cd.lr_decay_time = cfg.lr_decay_time;
  dcfg.cd.batch_size = cfg.batch_size;
  dcfg.cd.seed = derive_seed(cfg.seed, "drbm", 0);
  dcfg.transport = cfg.transport;
  DrbmModel model = train_drbm(xnorm, cfg.hidden_sizes, dcfg);
  Matrix feats = extract_features(model, xnorm);
  fs::create_directories(f.out_dir);
  save_model((fs::path(f.out_dir) / "model.json").string(), model);
  Dataset fd;
  fd.x = feats;
  save_csv((fs::path(f.out_dir) / "features.csv").string(), fd);
  std::cout << "trained " << model.layers.size() << " layers; features " << feats.rows << "x"
            << feats.cols << " -> " << f.out_dir << "\n";
  return 0;
}

int cmd_predict_k(const CLI::App* sub, const CommonFlags& f, const std::string& model_path) {
  PipelineConfig cfg = build_config(sub, f);
  Dataset ds = resolve_dataset(cfg);
  Matrix x = normalize_minmax(ds).first.x;
  if (!model_path.empty()) {
    DrbmModel model = load_model(model_path);
    x = extract_features(model, x);
    if (cfg.feature_renorm) x = renorm_features(x);
  }
  size_t c_max = cfg.c_max > 0 ? cfg.c_max : default_c_max(x.rows);
  double reg = cfg.reg_multiplier * detail::mean_feature_variance(x);
  BicResult res = select_clusters(x, c_max, cfg.restarts, derive_seed(cfg.seed, "bic", 0), reg);
  json out;
  out["n_clusters"] = res.n_clusters;
  out["bic_curve"] = res.bic;
  out["loglik_curve"] = res.loglik;
  fs::create_directories(f.out_dir);
  write_text_file(fs::path(f.out_dir) / "bic.json", out.dump(2) + "\n");
  std::cout << "n_clusters = " << res.n_clusters << "\n";
  return 0;
}

int cmd_cluster(const CLI::App* sub, const CommonFlags& f) {
  PipelineConfig cfg = build_config(sub, f);
  Dataset ds = resolve_dataset(cfg);
  PipelineReport rep = run_pipeline(ds, cfg);
  fs::create_directories(f.out_dir);
  write_text_file(fs::path(f.out_dir) / "report.json", pipeline_report_to_json(rep).dump(2) + "\n");
  std::string text = format_pipeline_text(rep);
  write_text_file(fs::path(f.out_dir) / "report.txt", text);
  bool all_ok = true;
  for (const RunReport& r : rep.runs) {
    if (!r.ok) {
      all_ok = false;
      continue;
    }
    char name[64];
    std::snprintf(name, sizeof(name), "assignments_run%zu.csv", r.run_index);
    save_assignments_csv((fs::path(f.out_dir) / name).string(), r.assignments);
  }
  std::cout << text;
  return all_ok ? 0 : 1;
}

int cmd_compare(const CLI::App* sub, const CommonFlags& f) {
  PipelineConfig cfg = build_config(sub, f);
  Dataset ds = resolve_dataset(cfg);
  ComparisonReport cmp = run_comparison(ds, cfg);
  fs::create_directories(f.out_dir);
  write_text_file(fs::path(f.out_dir) / "comparison.json", comparison_to_json(cmp).dump(2) + "\n");
  std::string text = format_comparison_text(cmp);
  write_text_file(fs::path(f.out_dir) / "comparison.txt", text);
  std::cout << text;
  for (const MethodReport& m : cmp.methods)
    if (!m.ok) return 1;
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& truth_data, int truth_label_column, bool truth_no_header,
             const std::string& mapping, const std::string& out_dir) {
  std::vector<int> pred = load_assignments_csv(pred_path);
  std::vector<int> truth;
  if (!truth_path.empty()) {
    truth = load_assignments_csv(truth_path);
  } else if (!truth_data.empty()) {
    Dataset ds = load_csv(truth_data, !truth_no_header, truth_label_column);
    if (!ds.has_labels) throw std::invalid_argument("eval: --truth-data needs --label-column");
    truth = ds.labels;
  } else {
    throw std::invalid_argument("eval: need --truth or --truth-data");
  }
  MappingMethod mm = MappingMethod::hungarian;
  if (mapping == "majority") mm = MappingMethod::majority;
  else if (mapping != "hungarian") throw std::invalid_argument("eval: mapping must be hungarian|majority");
  AccuracyResult acc = clustering_accuracy(pred, truth, mm);
  double nm = nmi(pred, truth);
  json out;
  out["eta"] = acc.eta;
  out["nmi"] = nm;
  out["mapping_method"] = mapping;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "eval.json", out.dump(2) + "\n");
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "eta %.6f  nmi %.6f\n", acc.eta, nm);
  std::cout << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep-feature clustering pipeline"};
  app.require_subcommand(1);

  // generate
  std::string gen_dataset = "moons", gen_out = "dataset.csv";
  size_t gen_n = 150;
  double gen_noise = 0.05;
  uint64_t gen_seed = 0;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic dataset CSV");
  generate->add_option("--dataset", gen_dataset, "moons|flame")->required();
  generate->add_option("--n", gen_n, "samples per class");
  generate->add_option("--noise", gen_noise, "noise level (moons only)");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output CSV path");

  // train
  CommonFlags tf;
  CLI::App* train = app.add_subcommand("train", "train the feature extractor, save model + features");
  add_data_flags(train, tf);
  add_pipeline_flags(train, tf);

  // predict-k
  CommonFlags pf;
  std::string pk_model;
  CLI::App* predict_k = app.add_subcommand("predict-k", "select the cluster count by BIC");
  add_data_flags(predict_k, pf);
  add_pipeline_flags(predict_k, pf);
  predict_k->add_option("--model", pk_model, "saved model to extract features with");

  // cluster
  CommonFlags cf;
  CLI::App* cluster = app.add_subcommand("cluster", "run the full pipeline");
  add_data_flags(cluster, cf);
  add_pipeline_flags(cluster, cf);

  // compare
  CommonFlags mf;
  CLI::App* compare = app.add_subcommand("compare", "run all methods and rank them");
  add_data_flags(compare, mf);
  add_pipeline_flags(compare, mf);

  // eval
  std::string ev_pred, ev_truth, ev_truth_data, ev_mapping = "hungarian", ev_out;
  int ev_label_column = -1;
  bool ev_no_header = false;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score saved assignments against reference labels");
  eval_cmd->add_option("--pred", ev_pred, "assignments CSV (row_index,cluster_id)")->required();
  eval_cmd->add_option("--truth", ev_truth, "reference assignments CSV");
  eval_cmd->add_option("--truth-data", ev_truth_data, "labeled dataset CSV");
  eval_cmd->add_option("--label-column", ev_label_column, "label column in --truth-data");
  eval_cmd->add_flag("--no-header", ev_no_header, "--truth-data has no header");
  eval_cmd->add_option("--mapping", ev_mapping, "hungarian|majority");
  eval_cmd->add_option("--out", ev_out, "optional output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen_dataset, gen_n, gen_noise, gen_seed, gen_out);
    if (train->parsed()) return cmd_train(train, tf);
    if (predict_k->parsed()) return cmd_predict_k(predict_k, pf, pk_model);
    if (cluster->parsed()) return cmd_cluster(cluster, cf);
    if (compare->parsed()) return cmd_compare(compare, mf);
    if (eval_cmd->parsed())
      return cmd_eval(ev_pred, ev_truth, ev_truth_data, ev_label_column, ev_no_header, ev_mapping,
                      ev_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
