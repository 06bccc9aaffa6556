#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qgp/gp.hpp"
#include "qgp/rng.hpp"

namespace qgp {

/// Box of optimization parameters. Sampling is uniform in the box, or
/// uniform in log coordinates when log_scale is set (used for kernel scales,
/// which enter the circuit as divisors).
struct SearchSpace {
  std::vector<std::pair<double, double>> bounds;
  std::vector<std::string> names;
  bool log_scale = false;

  std::size_t dim() const { return bounds.size(); }
  void validate() const;

  std::vector<double> sample(Rng& rng) const;
  /// Maps a point in the box to the unit cube of sampling coordinates.
  std::vector<double> to_unit(const std::vector<double>& theta) const;
  std::vector<double> from_unit(const std::vector<double>& unit) const;

  static SearchSpace box(std::vector<std::string> names, double lo, double hi,
                         bool log_scale = false);
};

/// One objective evaluation. `lml` carries the raw log marginal likelihood
/// when the objective wraps a GP fit; synthetic objectives set it to the
/// objective value.
struct Evaluation {
  std::vector<double> theta;
  double objective = 0.0;
  double lml = 0.0;
  bool failed = false;
};

struct BOTrace {
  std::vector<Evaluation> evaluations;
  std::vector<double> best_so_far;  // running maximum of objective
  std::uint64_t seed = 0;
  double kappa = 1.0;

  std::size_t best_index() const;
  const Evaluation& best() const { return evaluations[best_index()]; }
};

struct ObjectiveOutcome {
  double objective = 0.0;
  double lml = 0.0;
};

/// Maps a parameter vector to an objective value. May throw
/// FactorizationFailure or ObjectiveFailure; the optimizer records such
/// evaluations as failures instead of aborting.
using ObjectiveFn =
    std::function<ObjectiveOutcome(const std::vector<double>&)>;

/// Upper confidence bound mu(x) + kappa * sigma(x) of the surrogate at x.
/// x must live in the coordinates the surrogate was trained on.
double acquisition(const GPModel& surrogate, const InputVector& x,
                   double kappa);

/// Draws 2048 candidates from the box and returns the acquisition argmax
/// (ties broken by lowest candidate index). The surrogate must be trained on
/// unit-cube coordinates of `space`, as optimize() does.
std::vector<double> propose_next(const GPModel& surrogate,
                                 const SearchSpace& space, double kappa,
                                 Rng& rng);

/// Gradient-free maximization: evaluates init_count random points, then
/// repeatedly fits an RBF surrogate to all evaluations and evaluates the
/// objective at the acquisition argmax. Failed evaluations are recorded with
/// an objective one unit below the worst value seen so far. Deterministic
/// given the rng state.
BOTrace optimize(const ObjectiveFn& objective, const SearchSpace& space,
                 int init_count, int iterations, double kappa, Rng& rng);

/// Writes `iter,theta_1..theta_k,objective,lml,best_so_far` rows.
void save_trace_csv(const BOTrace& trace, const SearchSpace& space,
                    const std::filesystem::path& path);

/// Reads a trace written by save_trace_csv.
BOTrace load_trace_csv(const std::filesystem::path& path);

}  // namespace qgp
