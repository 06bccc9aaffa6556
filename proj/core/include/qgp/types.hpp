#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qgp/errors.hpp"
#include "qgp/rng.hpp"

namespace qgp {

/// One molecular-geometry descriptor. Length equals the dataset dimension
/// (6 for the reference problem); components are dimensionless coordinates.
using InputVector = Eigen::VectorXd;

struct DataPoint {
  InputVector x;
  double energy = 0.0;  // cm^-1
};

/// Immutable collection of (geometry, energy) pairs with a fixed dimension.
struct Dataset {
  int dimension = 0;
  std::vector<DataPoint> points;

  std::size_t size() const { return points.size(); }

  /// Checks non-emptiness, finite values, and per-point dimension.
  void validate() const;

  /// (min, max) over all energies.
  std::pair<double, double> energy_range() const;
};

/// Half-open selection [lo, hi] on energies, in cm^-1.
struct EnergyWindow {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double energy) const { return lo <= energy && energy <= hi; }
  void validate() const;

  static EnergyWindow all() { return EnergyWindow{}; }
};

enum class KernelKind { entangled, unentangled, rbf };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Everything a single seeded experiment needs. One Rng stream is built from
/// `seed` and threaded through every stochastic step of the run.
struct RunConfig {
  std::uint64_t seed = 0;
  int train_n = 0;
  EnergyWindow window = EnergyWindow::all();
  KernelKind kernel_kind = KernelKind::entangled;
  int bo_init = 20;
  int bo_iters = 50;
  double kappa = 1.0;
  double objective_offset_a = 1.0;
  double noise_var = 0.0;

  void validate() const;
};

/// Draws `cfg.train_n` points uniformly without replacement from the points
/// whose energy falls inside `cfg.window`; everything else (including points
/// outside the window) becomes the test set. Deterministic given the rng
/// state. Throws InsufficientData when the window holds fewer than train_n
/// points.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             const RunConfig& cfg, Rng& rng);

}  // namespace qgp
