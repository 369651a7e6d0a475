#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "awpkit/discrepancy.hpp"
#include "awpkit/tree.hpp"

namespace awpkit {

// Per-node sampling state: the known node mass w*_v, the leaf count N_v and
// the sequence z_v of leaf weights drawn uniformly with replacement from L_v.
class NodeStats {
 public:
  NodeStats(NodeId node, double w_star, std::size_t leaf_count);

  void add_sample(double z);

  NodeId node_id() const { return node_; }
  double w_star() const { return w_star_; }
  std::size_t leaf_count() const { return leaf_count_; }
  std::size_t sample_count() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  // w*_v / N_v.
  double mean_leaf_weight() const { return mean_leaf_; }

  // Sum over samples of Z' = |z - W| - z.
  double shifted_sum() const { return shifted_sum_.value(); }
  // Sum over samples of (Z' - mean Z')^2.
  double shifted_m2() const { return shifted_m2_; }

 private:
  NodeId node_;
  double w_star_;
  std::size_t leaf_count_;
  double mean_leaf_;
  std::vector<double> samples_;
  CompensatedSum shifted_sum_;
  double shifted_mean_ = 0.0;
  double shifted_m2_ = 0.0;
};

// D-hat_v = w*_v + (N_v / M_v) * (sum |z_i - W| - sum z_i). Unclamped.
// Throws ArgumentError when no samples were drawn.
double dhat(const NodeStats& stats);

// w*_v * sqrt(2 ln(2 K pi^2 M_v^2 / (3 delta)) / M_v); +inf with no samples.
// Throws ArgumentError unless k >= 2 and 0 < delta < 1.
double hoeffding_radius(const NodeStats& stats, std::size_t k, double delta);

// Sample variance of Z', i.e. sum_{i<j} (Z'_i - Z'_j)^2 / (m (m - 1)).
double shifted_variance(const NodeStats& stats);

// Empirical Bernstein radius
//   N_v sqrt(8 V L / M_v) + 28 w*_v L / (3 (M_v - 1)),
// with L = ln(2 K pi^2 M_v^2 / (3 delta)), or L = ln(2 / delta) when strict
// is set. +inf with fewer than two samples.
double bernstein_radius(const NodeStats& stats, std::size_t k, double delta,
                        bool strict = false);

enum class RadiusMode { kHoeffding, kBernstein, kMin };

struct RadiusConfig {
  std::size_t k = 2;
  double delta = 0.05;
  RadiusMode mode = RadiusMode::kMin;
  bool strict_bernstein = false;
};

double radius(const NodeStats& stats, const RadiusConfig& cfg);

}  // namespace awpkit
