#include "awpkit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace awpkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_confidence(std::size_t k, double delta) {
  if (k < 2) throw ArgumentError("pruning size K must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
}

// ln(2 K pi^2 m^2 / (3 delta)): the per-sample-count union bound.
double union_log(std::size_t k, double delta, std::size_t m) {
  const double md = static_cast<double>(m);
  return std::log(2.0 * static_cast<double>(k) * std::numbers::pi * std::numbers::pi * md * md /
                  (3.0 * delta));
}

}  // namespace

NodeStats::NodeStats(NodeId node, double w_star, std::size_t leaf_count)
    : node_(node), w_star_(w_star), leaf_count_(leaf_count) {
  if (leaf_count == 0) throw ArgumentError("node must cover at least one leaf");
  if (!(w_star >= 0.0)) throw ArgumentError("node mass must be non-negative");
  mean_leaf_ = w_star / static_cast<double>(leaf_count);
}

void NodeStats::add_sample(double z) {
  if (!(z >= 0.0 && z <= w_star_ + 1e-12)) {
    throw InvariantError("sample outside [0, w*_v] for node " + std::to_string(node_));
  }
  samples_.push_back(z);
  const double shifted = std::abs(z - mean_leaf_) - z;
  shifted_sum_.add(shifted);
  // Welford update.
  const double m = static_cast<double>(samples_.size());
  const double d = shifted - shifted_mean_;
  shifted_mean_ += d / m;
  shifted_m2_ += d * (shifted - shifted_mean_);
}

double dhat(const NodeStats& stats) {
  const auto m = stats.sample_count();
  if (m == 0) throw ArgumentError("discrepancy estimate needs at least one sample");
  return stats.w_star() +
         static_cast<double>(stats.leaf_count()) / static_cast<double>(m) * stats.shifted_sum();
}

double hoeffding_radius(const NodeStats& stats, std::size_t k, double delta) {
  check_confidence(k, delta);
  const auto m = stats.sample_count();
  if (m == 0) return kInf;
  return stats.w_star() * std::sqrt(2.0 * union_log(k, delta, m) / static_cast<double>(m));
}

double shifted_variance(const NodeStats& stats) {
  const auto m = stats.sample_count();
  if (m < 2) return kInf;
  return std::max(0.0, stats.shifted_m2() / static_cast<double>(m - 1));
}

double bernstein_radius(const NodeStats& stats, std::size_t k, double delta, bool strict) {
  check_confidence(k, delta);
  const auto m = stats.sample_count();
  if (m <= 1) return kInf;
  const double log_term = strict ? std::log(2.0 / delta) : union_log(k, delta, m);
  const double md = static_cast<double>(m);
  const double v = shifted_variance(stats);
  return static_cast<double>(stats.leaf_count()) * std::sqrt(8.0 * v * log_term / md) +
         28.0 * stats.w_star() * log_term / (3.0 * (md - 1.0));
}

double radius(const NodeStats& stats, const RadiusConfig& cfg) {
  switch (cfg.mode) {
    case RadiusMode::kHoeffding:
      return hoeffding_radius(stats, cfg.k, cfg.delta);
    case RadiusMode::kBernstein:
      return bernstein_radius(stats, cfg.k, cfg.delta, cfg.strict_bernstein);
    case RadiusMode::kMin:
      return std::min(hoeffding_radius(stats, cfg.k, cfg.delta),
                      bernstein_radius(stats, cfg.k, cfg.delta, cfg.strict_bernstein));
  }
  return kInf;
}

}  // namespace awpkit
