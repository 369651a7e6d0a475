#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "awpkit/engine.hpp"
#include "awpkit/tree.hpp"

namespace awpkit {

enum class TreeSource { kFile, kMedianSplit, kRandomBalanced, kConstruction };
enum class TargetSource { kFile, kGeometricBins, kConstruction };
// How leaves are assigned to geometric bins: in leaf order, by a seeded
// shuffle, or by the first feature coordinate (median-split trees only).
enum class BinBy { kLeafOrder, kShuffle, kFeature };

struct InstanceSpec {
  TreeSource tree_source = TreeSource::kMedianSplit;
  std::filesystem::path tree_path;
  std::filesystem::path weights_path;
  // Leaf count for generated trees; n (or N for lookahead) for constructions.
  std::size_t n = 1024;
  std::size_t dims = 4;
  // greedy-ta | greedy-tb | lookahead | tightness
  std::string construction;
  int construction_k = 3;
  std::size_t bins = 10;
  double ratio = 4.0;
  BinBy bin_by = BinBy::kShuffle;
  std::uint64_t seed = 0;
};

struct Instance {
  HierTree tree;
  WeightTable truth;
};

// Builds the tree and the hidden target. A weights file wins over geometric
// bins whenever weights_path is set; constructions carry their own truth.
Instance make_instance(const InstanceSpec& spec);

enum class Algorithm { kAwp, kWeight, kUniform, kEmpirical };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
RadiusMode parse_radius_mode(std::string_view name);
BinBy parse_bin_by(std::string_view name);
TreeSource parse_tree_source(std::string_view name);

struct ExperimentConfig {
  InstanceSpec instance;
  std::vector<std::size_t> k_values{10};
  std::size_t runs = 10;
  double delta = 0.05;
  double beta = 4.0;
  RadiusMode radius_mode = RadiusMode::kMin;
  bool strict_bernstein = false;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::kAwp, Algorithm::kWeight, Algorithm::kUniform,
                                    Algorithm::kEmpirical};
  std::optional<std::uint64_t> max_basic_queries = 1000000;
  std::size_t threads = 1;
};

// Throws ArgumentError on an empty or unsorted k list, k < 2, runs < 1, or
// duplicate algorithms.
void validate(const ExperimentConfig& cfg);

struct RunRecord {
  Algorithm algorithm;
  std::size_t k = 0;
  std::size_t run = 0;
  double normalized_distance = 0.0;
  std::uint64_t basic_queries = 0;
  std::uint64_t node_queries = 0;
  std::size_t pruning_size = 0;
  std::vector<TraceEvent> trace;
};

// One (k, run) cell: AWP with seed = cfg.seed + run, then each requested
// baseline under the matched budget and the same seed. Records follow the
// order of cfg.algorithms. Baselines are asked for AWP's final pruning size,
// which equals k unless AWP stopped early.
std::vector<RunRecord> run_cell(const Instance& inst, const ExperimentConfig& cfg,
                                std::size_t k, std::size_t run);

// All cells, sorted by (algorithm, k, run).
std::vector<RunRecord> run_experiment(const Instance& inst, const ExperimentConfig& cfg);

// Detail rows, a blank line, then aggregate rows.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
// "RUN <algorithm> <k> <run>" headers, each followed by that run's events.
void write_traces(std::ostream& out, const HierTree& tree, const std::vector<RunRecord>& records);

// cmd_run: builds the instance, runs the grid, writes the CSV (and traces).
void cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& csv_out,
             const std::optional<std::filesystem::path>& trace_out = std::nullopt);

// cmd_synth: writes the instance as an HWT file plus a weights file.
void cmd_synth(const InstanceSpec& spec, const std::filesystem::path& tree_out,
               const std::filesystem::path& weights_out);

// cmd_inspect: tree and target diagnostics, one "key: value" per line.
void cmd_inspect(const std::filesystem::path& tree_path,
                 const std::filesystem::path& weights_path, std::ostream& out);

// True when AWPKIT_STRICT_PAPER is set to 1.
bool strict_bernstein_from_env();

}  // namespace awpkit
