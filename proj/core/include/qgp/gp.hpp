#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qgp/quantum_kernel.hpp"
#include "qgp/types.hpp"

namespace qgp {

/// exp(-theta * ||x - xp||^2).
double rbf_kernel(const InputVector& x, const InputVector& xp, double theta);

/// Covariance function selector: either a quantum feature-map kernel or the
/// classical RBF baseline. Exactly one side is populated.
struct KernelConfig {
  KernelKind kind = KernelKind::rbf;
  std::optional<QuantumKernelParams> quantum;
  std::optional<double> rbf_theta;

  static KernelConfig make_rbf(double theta);
  static KernelConfig make_quantum(QuantumKernelParams params);

  void validate() const;
  bool is_quantum() const { return kind != KernelKind::rbf; }

  double eval(const InputVector& x, const InputVector& xp) const;
  Eigen::MatrixXd gram(const std::vector<InputVector>& points) const;
};

/// Fitted Gaussian-process regressor. Targets are centered by their mean
/// before fitting; chol is the lower Cholesky factor of
/// K + (noise_var + jitter_used) I and alpha solves that system against the
/// centered targets.
struct GPModel {
  std::vector<InputVector> x_train;
  double y_mean = 0.0;
  KernelConfig kernel;
  double noise_var = 0.0;
  Eigen::MatrixXd chol;   // lower triangular
  Eigen::VectorXd alpha;
  double jitter_used = 0.0;  // absolute diagonal inflation beyond noise_var

  int n() const { return static_cast<int>(x_train.size()); }
  int dimension() const {
    return x_train.empty() ? 0 : static_cast<int>(x_train.front().size());
  }
};

/// Builds the Gram matrix and factorizes K + noise_var I, escalating a
/// diagonal jitter (1e-10 ... 1e-4 relative to the mean diagonal) until the
/// factorization succeeds. Throws FactorizationFailure when even the largest
/// jitter cannot produce a positive-definite matrix.
GPModel gp_fit(const std::vector<InputVector>& x,
               const std::vector<double>& y, const KernelConfig& kernel,
               double noise_var);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Posterior mean and variance at one point. Variance is clamped to >= 0.
Prediction gp_predict(const GPModel& model, const InputVector& x);

/// Batch prediction. For quantum kernels the training states are prepared
/// once and reused across all query points; results equal per-point
/// gp_predict calls.
std::vector<Prediction> gp_predict_batch(const GPModel& model,
                                         const std::vector<InputVector>& xs);

/// Log marginal likelihood of targets y under the fitted covariance,
///   -1/2 yc^T (K + sigma^2 I)^-1 yc - 1/2 log|K + sigma^2 I| - n/2 log 2pi,
/// with yc = y - y_mean, evaluated through the stored factorization.
double log_marginal_likelihood(const GPModel& model,
                               const std::vector<double>& y);

/// log(exp(lml) + a), evaluated in a form that never overflows: the raw
/// marginal likelihood exp(lml) is astronomically large or small for any
/// realistic training set, so the two softplus branches below are the only
/// usable realization. Strictly increasing in lml with floor log(a).
double stabilized_objective(double lml, double a);

/// Serializes kernel parameters, noise, jitter, target mean, training inputs
/// and weights. A reloaded model reproduces predictions bitwise.
void save_model_json(const GPModel& model, const std::filesystem::path& path);
GPModel load_model_json(const std::filesystem::path& path);

}  // namespace qgp
