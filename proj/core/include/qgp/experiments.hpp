#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qgp/bayesopt.hpp"
#include "qgp/gp.hpp"
#include "qgp/types.hpp"

namespace qgp {

/// Root mean squared error between predictions and targets.
double rmse(const std::vector<double>& predictions,
            const std::vector<double>& targets);

/// Deterministic six-dimensional model surface used when no external dataset
/// is supplied: a sum of one-dimensional Morse wells plus a pairwise
/// coupling term, in cm^-1, defined on [0.5, 3.0]^6.
double synth_pes(const InputVector& x);

inline constexpr int kSynthDimension = 6;
inline constexpr double kSynthDomainLo = 0.5;
inline constexpr double kSynthDomainHi = 3.0;

/// Dataset energies are cm^-1; the optimization objective evaluates the
/// marginal likelihood in hartree (the native ab initio unit).
inline constexpr double kCmPerHartree = 219474.6313632;
/// Largest synthetic dataset ever generated (matches the scale of the
/// reference ab initio set).
inline constexpr int kSynthMaxPoints = 31124;

/// Samples n points uniformly over the synthetic domain, energies from
/// synth_pes. n is capped at kSynthMaxPoints.
Dataset synth_dataset(int n, std::uint64_t seed);

/// Search box for kernel parameters: [0.05, 20] per dimension, sampled
/// log-uniformly. Dimension is the input dimension for unentangled kernels,
/// input dimension + 1 (the shared pair scale last) for entangled kernels,
/// and 1 for the RBF baseline.
SearchSpace theta_space(KernelKind kind, int input_dim);

/// Builds the kernel configuration a theta vector from theta_space denotes.
KernelConfig kernel_from_theta(KernelKind kind,
                               const std::vector<double>& theta,
                               int input_dim);

struct ExperimentReport {
  RunConfig config;
  int n_train = 0;
  int n_test = 0;
  double rmse_value = 0.0;       // at the optimized parameters
  double rmse_init_best = 0.0;   // at the incumbent after the random draws
  std::vector<double> best_theta;
  double lml_at_best = 0.0;
  double objective_at_best = 0.0;
  double wall_seconds = 0.0;     // reporting only; never persisted
  std::string trace_file;        // set by callers that export the trace
  BOTrace trace;
  GPModel model;                 // final fit at best_theta
};

/// Full-range protocol: split per cfg, maximize the stabilized objective
/// over kernel parameters, fit at the best parameters, score RMSE on the
/// held-out points. cfg.window must cover the dataset's energy range.
/// The optimization objective evaluates the marginal likelihood on targets
/// converted to hartree (cm^-1-scale energies push exp(lml) below the
/// underflow floor, flattening log(L + a)); everything reported stays in
/// cm^-1.
ExperimentReport run_interpolation(const Dataset& data, const RunConfig& cfg);

/// Energy-domain extrapolation: training pool restricted to energies at or
/// below cfg.window.hi; the test set spans the full range. cfg.window.hi
/// must lie inside the dataset's energy range.
ExperimentReport run_extrapolation(const Dataset& data, const RunConfig& cfg);

/// Report as a JSON document (config echo, sizes, errors, best parameters).
/// Volatile fields like wall time are deliberately left out so reruns are
/// byte-identical.
void save_report_json(const ExperimentReport& report,
                      const std::filesystem::path& path);

/// `x1..xd,energy_true,energy_pred` rows for external plotting.
void save_predictions_csv(const GPModel& model, const Dataset& points,
                          const std::filesystem::path& path);

}  // namespace qgp
