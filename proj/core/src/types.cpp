#include "qgp/types.hpp"

#include <algorithm>
#include <cmath>

namespace qgp {

void Dataset::validate() const {
  if (points.empty()) {
    throw EmptyInput("dataset has no points");
  }
  if (dimension <= 0) {
    throw InvalidArgument("dataset dimension must be positive");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const DataPoint& p = points[i];
    if (p.x.size() != dimension) {
      throw DimensionMismatch("dataset point " + std::to_string(i) +
                              " has dimension " + std::to_string(p.x.size()) +
                              ", expected " + std::to_string(dimension));
    }
    if (!std::isfinite(p.energy) || !p.x.allFinite()) {
      throw InvalidArgument("dataset point " + std::to_string(i) +
                            " contains a non-finite value");
    }
  }
}

std::pair<double, double> Dataset::energy_range() const {
  if (points.empty()) {
    throw EmptyInput("dataset has no points");
  }
  double lo = points.front().energy;
  double hi = lo;
  for (const DataPoint& p : points) {
    lo = std::min(lo, p.energy);
    hi = std::max(hi, p.energy);
  }
  return {lo, hi};
}

void EnergyWindow::validate() const {
  if (!(lo < hi)) {
    throw InvalidArgument("energy window requires lo < hi");
  }
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::entangled:
      return "entangled";
    case KernelKind::unentangled:
      return "unentangled";
    case KernelKind::rbf:
      return "rbf";
  }
  throw InvalidArgument("unknown kernel kind");
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "entangled") return KernelKind::entangled;
  if (name == "unentangled") return KernelKind::unentangled;
  if (name == "rbf") return KernelKind::rbf;
  throw InvalidArgument("unknown kernel kind '" + name +
                        "' (expected entangled, unentangled, or rbf)");
}

void RunConfig::validate() const {
  window.validate();
  if (train_n <= 0) {
    throw InvalidArgument("train_n must be positive");
  }
  if (bo_init < 2) {
    throw InvalidArgument("bo_init must be at least 2");
  }
  if (bo_iters < 0) {
    throw InvalidArgument("bo_iters must be non-negative");
  }
  if (kappa < 0.0) {
    throw InvalidArgument("kappa must be non-negative");
  }
  if (!(objective_offset_a > 0.0)) {
    throw InvalidArgument("objective offset a must be positive");
  }
  if (noise_var < 0.0) {
    throw InvalidArgument("noise variance must be non-negative");
  }
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             const RunConfig& cfg, Rng& rng) {
  data.validate();
  cfg.validate();

  std::vector<std::size_t> pool;
  pool.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (cfg.window.contains(data.points[i].energy)) {
      pool.push_back(i);
    }
  }
  if (pool.size() < static_cast<std::size_t>(cfg.train_n)) {
    throw InsufficientData("window holds " + std::to_string(pool.size()) +
                           " points, need train_n = " +
                           std::to_string(cfg.train_n));
  }

  shuffle(pool, rng);

  std::vector<bool> in_train(data.size(), false);
  Dataset train{data.dimension, {}};
  train.points.reserve(cfg.train_n);
  for (int k = 0; k < cfg.train_n; ++k) {
    in_train[pool[k]] = true;
    train.points.push_back(data.points[pool[k]]);
  }

  // Test set keeps the original dataset order.
  Dataset test{data.dimension, {}};
  test.points.reserve(data.size() - train.points.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!in_train[i]) {
      test.points.push_back(data.points[i]);
    }
  }
  return {std::move(train), std::move(test)};
}

}  // namespace qgp
