// SPDX-License-Identifier: Apache-2.0
//
// gradfis command-line interface: fetch data, train, benchmark, explain,
// gradcheck. Exit codes: 0 success, 1 usage error, 2 data error, 3 an
// accuracy threshold was missed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradfis/bench.hpp"
#include "gradfis/dataset.hpp"
#include "gradfis/error.hpp"
#include "gradfis/explain.hpp"
#include "gradfis/fetch.hpp"
#include "gradfis/model.hpp"
#include "gradfis/model_io.hpp"
#include "gradfis/rng.hpp"
#include "gradfis/training.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitThreshold = 3;

std::vector<const gradfis::DatasetSpec*> select_datasets(const std::string& name) {
  std::vector<const gradfis::DatasetSpec*> selected;
  if (name == "all") {
    for (const auto& spec : gradfis::builtin_specs()) selected.push_back(&spec);
  } else {
    selected.push_back(&gradfis::spec_by_key(name));
  }
  return selected;
}

std::vector<double> parse_row(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw gradfis::DataError("cannot parse input value '" + token + "'");
    }
  }
  return values;
}

struct CommonOptions {
  std::string data_dir;
  std::string dataset;
  std::uint64_t seed = 42;
  std::size_t epochs = 250;
  double lr = 0.01;
  std::size_t mfs = 0;    // 0 = dataset default
  std::size_t rules = 0;  // 0 = dataset default
};

gradfis::GfConfig make_config(const gradfis::DatasetSpec& spec,
                              const CommonOptions& opts) {
  gradfis::GfConfig config;
  config.mfs_per_input = opts.mfs != 0 ? opts.mfs : spec.mfs_per_input;
  config.num_rules = opts.rules != 0 ? opts.rules : spec.num_rules;
  config.max_epochs = opts.epochs;
  config.lr = opts.lr;
  config.seed = opts.seed;
  return config;
}

int cmd_fetch(const CommonOptions& opts) {
  for (const auto* spec : select_datasets(opts.dataset)) {
    const gradfis::FetchResult result =
        gradfis::fetch_dataset(*spec, opts.data_dir);
    std::printf("%-8s %s (%s)\n", spec->key.c_str(), result.path.string().c_str(),
                result.downloaded ? "downloaded" : "already present");
  }
  return kExitOk;
}

int cmd_train(const CommonOptions& opts, const std::string& out_path,
              const std::string& loss_curve_path, const std::string& dump_path) {
  const gradfis::DatasetSpec& spec = gradfis::spec_by_key(opts.dataset);
  const gradfis::Dataset dataset = gradfis::load_csv(spec, opts.data_dir);

  const gradfis::MinMaxScaler scaler = gradfis::minmax_fit(dataset.features);
  const gradfis::Matrix<double> scaled = scaler.transform(dataset.features);
  if (!dump_path.empty()) {
    gradfis::write_csv(dataset, scaled, dump_path);
    std::printf("wrote normalized dataset to %s\n", dump_path.c_str());
  }

  const gradfis::GfConfig config = make_config(spec, opts);
  gradfis::FuzzyClassifier initial = gradfis::init_classifier_from_data(
      dataset.num_features(), dataset.num_classes(), config.mfs_per_input,
      config.num_rules, config.seed, scaled);

  gradfis::TrainConfig train_config;
  train_config.max_epochs = config.max_epochs;
  train_config.lr = config.lr;
  train_config.seed = config.seed;

  const gradfis::TrainResult result =
      gradfis::train(initial, scaled, dataset.labels, train_config);
  if (!loss_curve_path.empty()) {
    gradfis::write_loss_curve(result.record, loss_curve_path);
  }

  const std::string model_path =
      out_path.empty() ? spec.key + "_model.json" : out_path;
  gradfis::save_model(result.model, model_path);

  std::printf("dataset:        %s (%zu rows, %zu features, %zu classes)\n",
              dataset.name.c_str(), dataset.num_rows(), dataset.num_features(),
              dataset.num_classes());
  std::printf("config:         %zu MFs per input, %zu rules, %zu epochs, lr %g\n",
              config.mfs_per_input, config.num_rules, config.max_epochs, config.lr);
  std::printf("final loss:     %.6f\n", result.record.loss.back());
  std::printf("train accuracy: %.4f\n", result.record.final_train_accuracy);
  std::printf("train time:     %.3f s\n", result.record.wall_clock_seconds);
  std::printf("model saved to: %s\n", model_path.c_str());
  return kExitOk;
}

int cmd_benchmark(const CommonOptions& opts, const std::string& report_dir,
                  std::size_t threads) {
  std::vector<gradfis::BenchmarkReport> reports;
  for (const auto* spec : select_datasets(opts.dataset)) {
    const gradfis::GfConfig config = make_config(*spec, opts);
    std::printf("benchmarking %s ...\n", spec->display_name.c_str());
    std::fflush(stdout);
    reports.push_back(gradfis::run_benchmark(*spec, opts.data_dir, config, threads));
    const gradfis::BenchmarkReport& report = reports.back();
    std::printf("  accuracy min/mean/max: %.3f / %.3f / %.3f  (mean train %.3f s)\n",
                report.summary.min, report.summary.mean, report.summary.max,
                report.mean_train_seconds);
  }
  gradfis::write_reports(reports, report_dir);
  std::printf("reports written to %s\n", report_dir.c_str());

  bool all_pass = true;
  for (const auto& report : reports) {
    if (!report.comparison.pass) {
      std::printf("threshold missed: %s mean %.3f%% < %.3f%%\n",
                  report.dataset_key.c_str(), report.summary.mean,
                  report.comparison.threshold);
      all_pass = false;
    }
  }
  return all_pass ? kExitOk : kExitThreshold;
}

int cmd_explain(const std::string& model_path, const std::string& input_row,
                std::size_t top_k, bool as_json, const std::string& dataset_key,
                const std::string& data_dir, const std::string& out_path) {
  const gradfis::FuzzyClassifier model = gradfis::load_model(model_path);

  std::vector<std::string> feature_names =
      gradfis::default_feature_names(model.num_inputs);
  std::vector<std::string> class_names =
      gradfis::default_class_names(model.num_classes);
  if (!dataset_key.empty()) {
    const gradfis::DatasetSpec& spec = gradfis::spec_by_key(dataset_key);
    const gradfis::Dataset dataset = gradfis::load_csv(spec, data_dir);
    if (dataset.num_features() == model.num_inputs) {
      feature_names = dataset.feature_names;
    }
    if (dataset.num_classes() == model.num_classes) {
      class_names = dataset.class_names;
    }
  }

  std::string output;
  if (input_row.empty()) {
    const auto vocabulary = gradfis::LinguisticVocabulary::from_model(model);
    output = gradfis::export_rules(model, vocabulary, feature_names, class_names);
  } else {
    const std::vector<double> x = parse_row(input_row);
    const gradfis::PredictionTrace result =
        gradfis::trace(model, x, top_k, feature_names, class_names);
    output = as_json ? gradfis::trace_to_json(result, class_names)
                     : gradfis::trace_to_text(result, class_names);
  }

  if (out_path.empty()) {
    std::fputs(output.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw gradfis::IoError("cannot write " + out_path);
    out << output;
  }
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed, double h, std::size_t inputs, std::size_t mfs,
                  std::size_t rules, std::size_t classes, std::size_t batch) {
  gradfis::FuzzyClassifier model =
      gradfis::init_classifier(inputs, classes, mfs, rules, seed);

  // Perturb every parameter so the check exercises a generic point.
  gradfis::SplitMix64 rng(gradfis::mix_seed(seed, 1));
  for (double& v : model.bank.centers.data()) v = rng.unit();
  for (double& v : model.bank.width_params.data()) v = rng.range(-2.0, 1.0);
  for (double& v : model.rules.consequents.data()) v = rng.range(-1.0, 1.0);

  gradfis::Matrix<double> x(batch, inputs);
  std::vector<int> labels(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t d = 0; d < inputs; ++d) x(b, d) = rng.unit();
    labels[b] = static_cast<int>(rng.below(classes));
  }

  const gradfis::GradCheckReport report =
      gradfis::finite_difference_gradcheck(model, x, labels, h);
  std::printf("parameters checked: %zu\n", report.relative_error.size());
  std::printf("max relative error: %.3e at %s\n", report.max_relative_error,
              report.worst_name.c_str());
  const bool ok = report.max_relative_error <= 1e-4;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-trained fuzzy rule classifier"};
  app.require_subcommand(1);

  CommonOptions opts;
  const std::string default_data_dir = gradfis::default_data_dir().string();

  auto add_data_dir = [&](CLI::App* cmd) {
    cmd->add_option("--data-dir", opts.data_dir, "Directory holding dataset files")
        ->default_val(default_data_dir);
  };
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opts.seed, "Random seed")->default_val(42);
    cmd->add_option("--epochs", opts.epochs, "Training epochs")
        ->default_val(250)
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lr", opts.lr, "ADAM learning rate")
        ->default_val(0.01)
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mfs", opts.mfs,
                    "Membership functions per input (0 = dataset default)");
    cmd->add_option("--rules", opts.rules, "Rule count (0 = dataset default)");
  };

  // fetch
  CLI::App* fetch = app.add_subcommand("fetch", "Download dataset files");
  fetch->add_option("--dataset", opts.dataset, "Dataset key or 'all'")->required();
  add_data_dir(fetch);

  // train
  std::string out_path, loss_curve_path, dump_path;
  CLI::App* train = app.add_subcommand("train", "Train on a full dataset");
  train->add_option("--dataset", opts.dataset, "Dataset key")->required();
  add_data_dir(train);
  add_overrides(train);
  train->add_option("--out", out_path, "Model output path (JSON)");
  train->add_option("--loss-curve", loss_curve_path,
                    "Write epoch,loss lines to this file");
  train->add_option("--dump-csv", dump_path,
                    "Write the normalized dataset as CSV with header");

  // benchmark
  std::string report_dir = "reports";
  std::size_t threads = 0;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "5-fold evaluation against the reference table");
  benchmark->add_option("--dataset", opts.dataset, "Dataset key or 'all'")->required();
  add_data_dir(benchmark);
  add_overrides(benchmark);
  benchmark->add_option("--report-dir", report_dir, "Report output directory")
      ->default_val("reports");
  benchmark->add_option("--threads", threads, "Fold-level parallelism (0 = auto)");

  // explain
  std::string model_path, input_row, explain_dataset, explain_out;
  std::size_t top_k = 5;
  bool as_json = false;
  CLI::App* explain =
      app.add_subcommand("explain", "Export rules or trace one prediction");
  explain->add_option("--model", model_path, "Trained model file")->required();
  explain->add_option("--input", input_row,
                      "Comma-separated feature row (normalized space); "
                      "omit to export every rule");
  explain->add_option("-k,--top", top_k, "Rules to show in a trace")->default_val(5);
  explain->add_flag("--json", as_json, "Machine-readable trace output");
  explain->add_option("--dataset", explain_dataset,
                      "Dataset key for feature/class names");
  add_data_dir(explain);
  explain->add_option("--out", explain_out, "Write output here instead of stdout");

  // gradcheck
  std::uint64_t gc_seed = 11;
  double gc_h = 1e-5;
  std::size_t gc_inputs = 3, gc_mfs = 3, gc_rules = 5, gc_classes = 3, gc_batch = 8;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Verify analytic gradients against central differences");
  gradcheck->set_help_flag("--help", "Print this help message and exit");
  gradcheck->add_option("--seed", gc_seed)->default_val(11);
  gradcheck->add_option("--h", gc_h, "Finite-difference step")->default_val(1e-5);
  gradcheck->add_option("--inputs", gc_inputs)->default_val(3);
  gradcheck->add_option("--mfs", gc_mfs)->default_val(3);
  gradcheck->add_option("--rules", gc_rules)->default_val(5);
  gradcheck->add_option("--classes", gc_classes)->default_val(3);
  gradcheck->add_option("--batch", gc_batch)->default_val(8);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fetch->parsed()) return cmd_fetch(opts);
    if (train->parsed()) return cmd_train(opts, out_path, loss_curve_path, dump_path);
    if (benchmark->parsed()) return cmd_benchmark(opts, report_dir, threads);
    if (explain->parsed()) {
      return cmd_explain(model_path, input_row, top_k, as_json, explain_dataset,
                         opts.data_dir, explain_out);
    }
    if (gradcheck->parsed()) {
      return cmd_gradcheck(gc_seed, gc_h, gc_inputs, gc_mfs, gc_rules, gc_classes,
                           gc_batch);
    }
  } catch (const gradfis::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const gradfis::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitData;
  } catch (const gradfis::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
