#include "awpkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "awpkit/adversarial.hpp"
#include "awpkit/baselines.hpp"
#include "awpkit/discrepancy.hpp"
#include "awpkit/io.hpp"
#include "awpkit/oracle.hpp"

namespace awpkit {

namespace {

Construction make_construction(const InstanceSpec& spec) {
  const auto n = static_cast<int>(spec.n);
  const int k = spec.construction_k;
  if (spec.construction == "greedy-ta") return build_greedy_ta(k);
  if (spec.construction == "greedy-tb") return build_greedy_tb(k);
  if (spec.construction == "lookahead") return build_lookahead(n, k);
  if (spec.construction == "tightness") return build_tightness(n);
  throw ArgumentError("unknown construction '" + spec.construction + "'");
}

WeightTable geometric_target(const HierTree& tree, const InstanceSpec& spec,
                             const FeatureMap* features) {
  TargetSpec target;
  target.bin_count = spec.bins;
  target.ratio = spec.ratio;
  switch (spec.bin_by) {
    case BinBy::kLeafOrder: {
      std::vector<std::string> labels;
      labels.reserve(tree.leaf_count());
      for (std::size_t i = 0; i < tree.leaf_count(); ++i) labels.push_back(tree.leaf_label(i));
      target.bins = chunk_bins(labels, spec.bins);
      break;
    }
    case BinBy::kShuffle:
      break;
    case BinBy::kFeature:
      if (features == nullptr) throw ArgumentError("feature binning needs a median-split tree");
      target.bins = bins_by_feature(*features, 0, spec.bins);
      break;
  }
  return make_geometric_target(tree, target, spec.seed);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

Instance make_instance(const InstanceSpec& spec) {
  if (spec.tree_source == TreeSource::kConstruction) {
    auto c = make_construction(spec);
    return {std::move(c.tree), std::move(c.truth)};
  }
  std::optional<FeatureMap> features;
  HierTree tree = [&] {
    switch (spec.tree_source) {
      case TreeSource::kFile:
        return read_hwt_file(spec.tree_path);
      case TreeSource::kMedianSplit:
        if (spec.n < 1 || spec.dims < 1) throw ArgumentError("n and dims must be positive");
        features = make_uniform_features(spec.n, spec.dims, spec.seed);
        return build_median_split_tree(*features, spec.seed);
      case TreeSource::kRandomBalanced:
        if (spec.n < 1) throw ArgumentError("n must be positive");
        return build_random_balanced_tree(make_labels(spec.n), spec.seed);
      case TreeSource::kConstruction:
        break;
    }
    throw ArgumentError("unsupported tree source");
  }();
  if (!spec.weights_path.empty()) {
    auto truth = read_weights_file(spec.weights_path);
    truth.aligned(tree);
    return {std::move(tree), std::move(truth)};
  }
  auto truth = geometric_target(tree, spec, features ? &*features : nullptr);
  return {std::move(tree), std::move(truth)};
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAwp: return "awp";
    case Algorithm::kWeight: return "weight";
    case Algorithm::kUniform: return "uniform";
    case Algorithm::kEmpirical: return "empirical";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::kAwp, Algorithm::kWeight, Algorithm::kUniform, Algorithm::kEmpirical}) {
    if (to_string(a) == name) return a;
  }
  throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
}

RadiusMode parse_radius_mode(std::string_view name) {
  if (name == "hoeffding") return RadiusMode::kHoeffding;
  if (name == "bernstein") return RadiusMode::kBernstein;
  if (name == "min") return RadiusMode::kMin;
  throw ArgumentError("unknown radius mode '" + std::string(name) + "'");
}

BinBy parse_bin_by(std::string_view name) {
  if (name == "order") return BinBy::kLeafOrder;
  if (name == "shuffle") return BinBy::kShuffle;
  if (name == "feature") return BinBy::kFeature;
  throw ArgumentError("unknown binning '" + std::string(name) + "'");
}

TreeSource parse_tree_source(std::string_view name) {
  if (name == "file") return TreeSource::kFile;
  if (name == "median-split") return TreeSource::kMedianSplit;
  if (name == "random-balanced") return TreeSource::kRandomBalanced;
  if (name == "construction") return TreeSource::kConstruction;
  throw ArgumentError("unknown tree source '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.k_values.empty()) throw ArgumentError("no k values given");
  for (std::size_t i = 0; i < cfg.k_values.size(); ++i) {
    if (cfg.k_values[i] < 2) throw ArgumentError("every k must be at least 2");
    if (i > 0 && cfg.k_values[i] <= cfg.k_values[i - 1]) {
      throw ArgumentError("k values must be strictly ascending");
    }
  }
  if (cfg.runs < 1) throw ArgumentError("runs must be at least 1");
  if (cfg.algorithms.empty()) throw ArgumentError("no algorithms given");
  std::set<Algorithm> seen(cfg.algorithms.begin(), cfg.algorithms.end());
  if (seen.size() != cfg.algorithms.size()) throw ArgumentError("duplicate algorithm");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  if (!(cfg.beta > 1.0)) throw ArgumentError("beta must exceed 1");
}

std::vector<RunRecord> run_cell(const Instance& inst, const ExperimentConfig& cfg,
                                std::size_t k, std::size_t run) {
  const std::uint64_t seed = cfg.seed + run;
  EngineConfig ecfg;
  ecfg.k = k;
  ecfg.delta = cfg.delta;
  ecfg.beta = cfg.beta;
  ecfg.seed = seed;
  ecfg.radius_mode = cfg.radius_mode;
  ecfg.strict_bernstein = cfg.strict_bernstein;
  ecfg.max_basic_queries = cfg.max_basic_queries;

  // AWP always runs: the baselines' budget comes from it.
  Oracle awp_oracle(inst.tree, inst.truth);
  PruningResult awp = run_awp(awp_oracle, ecfg);
  const Budget budget = match_budget(awp);
  const std::size_t k_eff = awp.pruning.size();

  auto record = [&](Algorithm a, PruningResult&& r) {
    RunRecord rec;
    rec.algorithm = a;
    rec.k = k;
    rec.run = run;
    rec.normalized_distance = normalized_distance(r, inst.truth);
    rec.basic_queries = r.ledger.basic_queries;
    rec.node_queries = r.ledger.node_queries;
    rec.pruning_size = r.pruning.size();
    rec.trace = std::move(r.trace);
    return rec;
  };

  std::vector<RunRecord> out;
  for (Algorithm a : cfg.algorithms) {
    if (a == Algorithm::kAwp) {
      out.push_back(record(a, std::move(awp)));
      continue;
    }
    Oracle oracle(inst.tree, inst.truth);
    switch (a) {
      case Algorithm::kWeight:
        out.push_back(record(a, run_weight(oracle, k_eff, budget, seed)));
        break;
      case Algorithm::kUniform:
        out.push_back(record(a, run_uniform(oracle, k_eff, budget, seed)));
        break;
      case Algorithm::kEmpirical:
        out.push_back(record(a, run_empirical(oracle, k_eff, budget, seed)));
        break;
      case Algorithm::kAwp:
        break;
    }
  }
  return out;
}

std::vector<RunRecord> run_experiment(const Instance& inst, const ExperimentConfig& cfg) {
  validate(cfg);
  for (std::size_t k : cfg.k_values) {
    if (k > inst.tree.leaf_count()) throw ArgumentError("k exceeds the leaf count");
  }
  struct Cell {
    std::size_t k;
    std::size_t run;
  };
  std::vector<Cell> cells;
  for (std::size_t k : cfg.k_values) {
    for (std::size_t r = 0; r < cfg.runs; ++r) cells.push_back({k, r});
  }
  std::vector<std::vector<RunRecord>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_cell(inst, cfg, cells[i].k, cells[i].run);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cells.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<RunRecord> flat;
  for (auto& cell : results) {
    for (auto& rec : cell) flat.push_back(std::move(rec));
  }
  std::stable_sort(flat.begin(), flat.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.k != b.k) return a.k < b.k;
    return a.run < b.run;
  });
  return flat;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "algorithm,k,run,normalized_distance,basic_queries,node_queries\n";
  for (const auto& r : records) {
    out << to_string(r.algorithm) << ',' << r.k << ',' << r.run << ','
        << format_double(r.normalized_distance) << ',' << r.basic_queries << ','
        << r.node_queries << '\n';
  }
  out << '\n' << "algorithm,k,mean,min,max\n";
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    CompensatedSum sum;
    double lo = records[i].normalized_distance;
    double hi = lo;
    while (j < records.size() && records[j].algorithm == records[i].algorithm &&
           records[j].k == records[i].k) {
      const double d = records[j].normalized_distance;
      sum.add(d);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      ++j;
    }
    const double mean = std::clamp(sum.value() / static_cast<double>(j - i), lo, hi);
    out << to_string(records[i].algorithm) << ',' << records[i].k << ',' << format_double(mean)
        << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
    i = j;
  }
}

void write_traces(std::ostream& out, const HierTree& tree, const std::vector<RunRecord>& records) {
  for (const auto& r : records) {
    out << "RUN " << to_string(r.algorithm) << ' ' << r.k << ' ' << r.run << '\n';
    write_trace(out, tree, r.trace);
  }
}

void cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& csv_out,
             const std::optional<std::filesystem::path>& trace_out) {
  validate(cfg);
  const Instance inst = make_instance(cfg.instance);
  const auto records = run_experiment(inst, cfg);
  {
    auto out = open_out(csv_out);
    write_csv(out, records);
  }
  if (trace_out) {
    auto out = open_out(*trace_out);
    write_traces(out, inst.tree, records);
  }
}

void cmd_synth(const InstanceSpec& spec, const std::filesystem::path& tree_out,
               const std::filesystem::path& weights_out) {
  const Instance inst = make_instance(spec);
  write_hwt_file(tree_out, inst.tree);
  write_weights_file(weights_out, inst.truth);
}

void cmd_inspect(const std::filesystem::path& tree_path,
                 const std::filesystem::path& weights_path, std::ostream& out) {
  const HierTree tree = read_hwt_file(tree_path);
  const WeightTable truth = read_weights_file(weights_path);
  const auto w = truth.aligned(tree);
  auto opt = [](const std::optional<double>& x) {
    return x ? format_double(*x) : std::string("n/a");
  };
  CompensatedSum total;
  for (double x : w) total.add(x);
  out << "leaves: " << tree.leaf_count() << '\n';
  out << "depth: " << tree.height() << '\n';
  out << "total_weight: " << format_double(total.value()) << '\n';
  out << "split_quality: " << opt(split_quality(tree, w)) << '\n';
  out << "average_split_quality: " << opt(average_split_quality(tree, w)) << '\n';
  out << "root_discrepancy: " << format_double(node_discrepancy(tree, tree.root(), w)) << '\n';
}

bool strict_bernstein_from_env() {
  const char* v = std::getenv("AWPKIT_STRICT_PAPER");
  return v != nullptr && std::string_view(v) == "1";
}

}  // namespace awpkit
