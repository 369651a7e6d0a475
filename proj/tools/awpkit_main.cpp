#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "awpkit/harness.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct InstanceFlags {
  std::string source = "median-split";
  std::string tree;
  std::string weights;
  std::string bin_by = "shuffle";
};

void add_instance_flags(CLI::App* cmd, awpkit::InstanceSpec& spec, InstanceFlags& f) {
  cmd->add_option("--source", f.source, "file | median-split | random-balanced | construction")
      ->capture_default_str();
  cmd->add_option("--tree", f.tree, "HWT tree file (implies --source file)");
  cmd->add_option("--weights", f.weights, "target weights file");
  cmd->add_option("--n", spec.n, "leaf count, or n/N for constructions")->capture_default_str();
  cmd->add_option("--dims", spec.dims, "feature dimensions for median-split trees")
      ->capture_default_str();
  cmd->add_option("--construction", spec.construction,
                  "greedy-ta | greedy-tb | lookahead | tightness");
  cmd->add_option("--construction-k", spec.construction_k, "k parameter of the construction")
      ->capture_default_str();
  cmd->add_option("--bins", spec.bins, "geometric target bin count")->capture_default_str();
  cmd->add_option("--ratio", spec.ratio, "weight ratio between consecutive bins")
      ->capture_default_str();
  cmd->add_option("--bin-by", f.bin_by, "order | shuffle | feature")->capture_default_str();
}

void resolve_instance(awpkit::InstanceSpec& spec, const InstanceFlags& f, std::uint64_t seed) {
  spec.seed = seed;
  spec.bin_by = awpkit::parse_bin_by(f.bin_by);
  spec.tree_source = awpkit::parse_tree_source(f.source);
  if (!f.tree.empty()) {
    spec.tree_source = awpkit::TreeSource::kFile;
    spec.tree_path = f.tree;
  }
  if (!spec.construction.empty()) spec.tree_source = awpkit::TreeSource::kConstruction;
  if (spec.tree_source == awpkit::TreeSource::kFile && spec.tree_path.empty()) {
    throw awpkit::ArgumentError("--source file needs --tree");
  }
  if (spec.tree_source == awpkit::TreeSource::kConstruction && spec.construction.empty()) {
    throw awpkit::ArgumentError("--source construction needs --construction");
  }
  if (!f.weights.empty()) spec.weights_path = f.weights;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate a target distribution from weight queries by tree pruning"};
  app.require_subcommand(1);

  awpkit::ExperimentConfig cfg;
  InstanceFlags run_flags;
  std::string k_list = "10";
  std::string algorithms = "awp,weight,uniform,empirical";
  std::string radius = "min";
  std::string out;
  std::string trace;
  std::uint64_t max_basic = 1000000;
  auto* run = app.add_subcommand("run", "run AWP and baselines, write CSV");
  add_instance_flags(run, cfg.instance, run_flags);
  run->add_option("--k", k_list, "comma-separated pruning sizes")->capture_default_str();
  run->add_option("--runs", cfg.runs, "runs per k")->capture_default_str();
  run->add_option("--delta", cfg.delta, "confidence parameter")->capture_default_str();
  run->add_option("--beta", cfg.beta, "split tolerance factor")->capture_default_str();
  run->add_option("--seed", cfg.seed, "base seed; run r uses seed + r")->capture_default_str();
  run->add_option("--radius", radius, "hoeffding | bernstein | min")->capture_default_str();
  run->add_option("--algorithms", algorithms, "comma-separated subset")->capture_default_str();
  run->add_option("--out", out, "CSV output path")->required();
  run->add_option("--trace", trace, "trace output path");
  run->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  run->add_option("--max-basic", max_basic, "basic-query cap per AWP run (0 = none)")
      ->capture_default_str();

  awpkit::InstanceSpec synth_spec;
  InstanceFlags synth_flags;
  std::uint64_t synth_seed = 0;
  std::string tree_out;
  std::string weights_out;
  auto* synth = app.add_subcommand("synth", "write a generated tree and target to files");
  add_instance_flags(synth, synth_spec, synth_flags);
  synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
  synth->add_option("--tree-out", tree_out, "HWT output path")->required();
  synth->add_option("--weights-out", weights_out, "weights output path")->required();

  std::string inspect_tree;
  std::string inspect_weights;
  auto* inspect = app.add_subcommand("inspect", "print tree and target diagnostics");
  inspect->add_option("--tree", inspect_tree, "HWT tree file")->required();
  inspect->add_option("--weights", inspect_weights, "weights file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) {
      resolve_instance(cfg.instance, run_flags, cfg.seed);
      cfg.k_values.clear();
      for (const auto& k : split_commas(k_list)) {
        std::size_t pos = 0;
        const unsigned long long value = std::stoull(k, &pos);
        if (pos != k.size()) throw awpkit::ArgumentError("bad k value '" + k + "'");
        cfg.k_values.push_back(static_cast<std::size_t>(value));
      }
      cfg.algorithms.clear();
      for (const auto& a : split_commas(algorithms)) {
        cfg.algorithms.push_back(awpkit::parse_algorithm(a));
      }
      cfg.radius_mode = awpkit::parse_radius_mode(radius);
      cfg.strict_bernstein = awpkit::strict_bernstein_from_env();
      cfg.max_basic_queries = max_basic == 0 ? std::nullopt : std::optional(max_basic);
      std::optional<std::filesystem::path> trace_path;
      if (!trace.empty()) trace_path = trace;
      awpkit::cmd_run(cfg, out, trace_path);
    } else if (*synth) {
      resolve_instance(synth_spec, synth_flags, synth_seed);
      awpkit::cmd_synth(synth_spec, tree_out, weights_out);
    } else if (*inspect) {
      awpkit::cmd_inspect(inspect_tree, inspect_weights, std::cout);
    }
  } catch (const awpkit::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: number out of range: " << e.what() << '\n';
    return 1;
  } catch (const awpkit::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
