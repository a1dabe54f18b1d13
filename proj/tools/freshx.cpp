#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freshx/csv.hpp"
#include "freshx/features.hpp"
#include "freshx/pipeline.hpp"
#include "freshx/selection.hpp"
#include "freshx/synth.hpp"
#include "freshx/types.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExtractArgs {
  std::string data;
  std::string meta;
  std::string format = "long";
  std::string config;
  std::string out;
  std::size_t jobs = 0;
};

struct SelectArgs {
  std::string features;
  std::string targets;
  double fdr_level = 0.10;
  std::string by_mode = "global";
  std::string out;
  std::string report;
};

struct RunArgs {
  ExtractArgs input;
  std::string targets;
  std::string pca = "none";
  double variance = 0.95;
  double fdr_level = 0.10;
  std::string by_mode = "global";
  std::string out;
  std::string report;
};

struct BenchArgs {
  std::size_t samples = 0;
  std::size_t length = 0;
  std::size_t kinds = 1;
  std::size_t jobs = 0;
  std::size_t repeat = 1;
};

void check_unit_interval(double value, const std::string& flag) {
  if (!(value > 0.0) || value > 1.0)
    throw UsageError(flag + " must lie in (0, 1]");
}

freshx::ByMode parse_by_mode(const std::string& mode) {
  return mode == "paper" ? freshx::ByMode::PaperLiteral
                         : freshx::ByMode::Global;
}

freshx::Dataset load_dataset(const ExtractArgs& args) {
  freshx::Dataset dataset = args.format == "wide"
                                ? freshx::read_wide_format(args.data)
                                : freshx::read_long_format(args.data);
  if (!args.meta.empty()) freshx::read_meta(args.meta, dataset);
  return dataset;
}

std::optional<std::vector<freshx::MappingSpec>> load_registry(
    const std::string& config) {
  if (config.empty()) return std::nullopt;
  return freshx::load_registry_file(config);
}

int cmd_extract(const ExtractArgs& args) {
  freshx::Dataset dataset = load_dataset(args);
  auto registry = load_registry(args.config);
  freshx::FeatureMatrix matrix = freshx::extract_all(
      dataset, registry ? *registry : freshx::default_registry(), args.jobs);
  freshx::write_feature_matrix(matrix, args.out);
  return 0;
}

int cmd_select(const SelectArgs& args) {
  check_unit_interval(args.fdr_level, "--fdr-level");
  freshx::FeatureMatrix matrix = freshx::read_feature_matrix(args.features);
  freshx::TargetVector target =
      freshx::read_targets(args.targets, matrix.entity_order);

  freshx::SelectionConfig config;
  config.q = args.fdr_level;
  config.by_mode = parse_by_mode(args.by_mode);
  freshx::RelevanceTable table =
      freshx::build_relevance_table(matrix, target, config);

  freshx::FeatureMatrix filtered;
  filtered.entity_order = matrix.entity_order;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c)
    if (table.rows[c].relevant) filtered.columns.push_back(matrix.columns[c]);

  freshx::write_feature_matrix(filtered, args.out);
  freshx::write_relevance_table(table, args.report);
  return 0;
}

int cmd_run(const RunArgs& args) {
  check_unit_interval(args.fdr_level, "--fdr-level");
  check_unit_interval(args.variance, "--variance");

  freshx::Dataset dataset = load_dataset(args.input);
  freshx::TargetVector target =
      freshx::read_targets(args.targets, dataset.entity_order);

  freshx::SelectionConfig config;
  config.q = args.fdr_level;
  config.by_mode = parse_by_mode(args.by_mode);
  config.variance_fraction = args.variance;
  config.worker_count = args.input.jobs;
  config.registry = load_registry(args.input.config);
  if (args.pca == "before")
    config.pca = freshx::PcaPlacement::Before;
  else if (args.pca == "after")
    config.pca = freshx::PcaPlacement::After;

  freshx::FreshResult result = freshx::run_pipeline(dataset, target, config);
  for (const auto& warning : result.warnings)
    std::cerr << "warning: " << warning << "\n";

  freshx::write_feature_matrix(result.matrix, args.out);
  freshx::write_relevance_table(result.table, args.report);
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  auto start = std::chrono::steady_clock::now();
  freshx::Dataset dataset =
      freshx::gen_noise_dataset(args.samples, args.length, args.kinds, 42);
  double gen_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::printf("phase,parameter,wall_seconds\n");
  std::printf("generate,0,%.6f\n", gen_seconds);
  auto registry = freshx::default_registry();
  for (std::size_t rep = 1; rep <= args.repeat; ++rep) {
    start = std::chrono::steady_clock::now();
    freshx::extract_all(dataset, registry, args.jobs);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("extract,%zu,%.6f\n", rep, seconds);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel time-series feature extraction and selection"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand(
      "extract", "Evaluate the feature registry over a time-series dataset");
  extract->add_option("--data", extract_args.data, "Input series CSV")
      ->required();
  extract->add_option("--meta", extract_args.meta,
                      "Static per-entity attributes CSV");
  extract->add_option("--format", extract_args.format, "Input layout")
      ->check(CLI::IsMember({"long", "wide"}));
  extract->add_option("--config", extract_args.config,
                      "Feature registry JSON file");
  extract->add_option("--jobs", extract_args.jobs, "Worker thread count")
      ->envname("FRESHX_JOBS");
  extract->add_option("--out", extract_args.out, "Feature matrix CSV")
      ->required();

  SelectArgs select_args;
  auto* select = app.add_subcommand(
      "select", "Filter an extracted feature matrix against a target");
  select->add_option("--features", select_args.features, "Feature matrix CSV")
      ->required();
  select->add_option("--targets", select_args.targets, "Target CSV")
      ->required();
  select->add_option("--fdr-level", select_args.fdr_level,
                     "False discovery level q");
  select->add_option("--by-mode", select_args.by_mode,
                     "Step-up threshold constant")
      ->check(CLI::IsMember({"global", "paper"}));
  select->add_option("--out", select_args.out, "Filtered matrix CSV")
      ->required();
  select->add_option("--report", select_args.report, "Relevance table CSV")
      ->required();

  RunArgs run_args;
  auto* run = app.add_subcommand(
      "run", "Extract, test, and select in one pass");
  run->add_option("--data", run_args.input.data, "Input series CSV")
      ->required();
  run->add_option("--targets", run_args.targets, "Target CSV")->required();
  run->add_option("--meta", run_args.input.meta,
                  "Static per-entity attributes CSV");
  run->add_option("--format", run_args.input.format, "Input layout")
      ->check(CLI::IsMember({"long", "wide"}));
  run->add_option("--config", run_args.input.config,
                  "Feature registry JSON file");
  run->add_option("--pca", run_args.pca,
                  "Principal-component placement in the pipeline")
      ->check(CLI::IsMember({"none", "before", "after"}));
  run->add_option("--variance", run_args.variance,
                  "Variance fraction retained by the reduction");
  run->add_option("--fdr-level", run_args.fdr_level,
                  "False discovery level q");
  run->add_option("--by-mode", run_args.by_mode,
                  "Step-up threshold constant")
      ->check(CLI::IsMember({"global", "paper"}));
  run->add_option("--jobs", run_args.input.jobs, "Worker thread count")
      ->envname("FRESHX_JOBS");
  run->add_option("--out", run_args.out, "Selected matrix CSV")->required();
  run->add_option("--report", run_args.report, "Relevance table CSV")
      ->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand(
      "bench", "Time feature extraction on synthetic noise data");
  bench->add_option("--samples", bench_args.samples, "Entity count")
      ->required();
  bench->add_option("--length", bench_args.length, "Series length")
      ->required();
  bench->add_option("--kinds", bench_args.kinds, "Series kind count")
      ->required();
  bench->add_option("--jobs", bench_args.jobs, "Worker thread count")
      ->envname("FRESHX_JOBS");
  bench->add_option("--repeat", bench_args.repeat, "Extraction repetitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (extract->parsed()) return cmd_extract(extract_args);
    if (select->parsed()) return cmd_select(select_args);
    if (run->parsed()) return cmd_run(run_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const freshx::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
