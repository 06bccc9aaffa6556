#include "qgp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgp/parallel.hpp"

namespace qgp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// Relative jitter ladder tried after the bare matrix.
constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6, 1e-4};

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

}  // namespace

double rbf_kernel(const InputVector& x, const InputVector& xp, double theta) {
  if (x.size() != xp.size()) {
    throw DimensionMismatch("rbf kernel of vectors with dimensions " +
                            std::to_string(x.size()) + " and " +
                            std::to_string(xp.size()));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("rbf theta must be positive and finite");
  }
  return std::exp(-theta * (x - xp).squaredNorm());
}

KernelConfig KernelConfig::make_rbf(double theta) {
  KernelConfig cfg;
  cfg.kind = KernelKind::rbf;
  cfg.rbf_theta = theta;
  cfg.validate();
  return cfg;
}

KernelConfig KernelConfig::make_quantum(QuantumKernelParams params) {
  KernelConfig cfg;
  cfg.kind = params.entangled ? KernelKind::entangled : KernelKind::unentangled;
  cfg.quantum = std::move(params);
  cfg.validate();
  return cfg;
}

void KernelConfig::validate() const {
  if (kind == KernelKind::rbf) {
    if (!rbf_theta || quantum) {
      throw InvalidArgument("rbf kernel config must carry rbf_theta only");
    }
    if (!(*rbf_theta > 0.0) || !std::isfinite(*rbf_theta)) {
      throw InvalidArgument("rbf theta must be positive and finite");
    }
  } else {
    if (!quantum || rbf_theta) {
      throw InvalidArgument(
          "quantum kernel config must carry quantum params only");
    }
    quantum->validate();
    if (quantum->entangled != (kind == KernelKind::entangled)) {
      throw InvalidArgument("kernel kind does not match entanglement flag");
    }
  }
}

double KernelConfig::eval(const InputVector& x, const InputVector& xp) const {
  if (kind == KernelKind::rbf) {
    return rbf_kernel(x, xp, *rbf_theta);
  }
  return kernel_exact(x, xp, *quantum);
}

Eigen::MatrixXd KernelConfig::gram(
    const std::vector<InputVector>& points) const {
  if (points.empty()) {
    throw EmptyInput("gram matrix of an empty point set");
  }
  if (kind != KernelKind::rbf) {
    return gram_matrix(points, *quantum);
  }
  const auto n = points.size();
  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rbf_kernel(points[i], points[j], *rbf_theta);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

GPModel gp_fit(const std::vector<InputVector>& x,
               const std::vector<double>& y, const KernelConfig& kernel,
               double noise_var) {
  kernel.validate();
  if (x.empty()) {
    throw EmptyInput("cannot fit a GP on zero points");
  }
  if (x.size() != y.size()) {
    throw SizeMismatch("fit with " + std::to_string(x.size()) +
                       " inputs and " + std::to_string(y.size()) + " targets");
  }
  if (noise_var < 0.0) {
    throw InvalidArgument("noise variance must be non-negative");
  }

  const Eigen::MatrixXd K = kernel.gram(x);
  const double mean_diag = K.diagonal().mean();

  GPModel model;
  model.x_train = x;
  model.kernel = kernel;
  model.noise_var = noise_var;
  model.y_mean = mean_of(y);

  const auto n = static_cast<Eigen::Index>(x.size());
  bool factorized = false;
  double jitter = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0; attempt <= 4 && !factorized; ++attempt) {
    jitter = attempt == 0 ? 0.0 : kJitterLadder[attempt - 1] * mean_diag;
    Eigen::MatrixXd A = K;
    A.diagonal().array() += noise_var + jitter;
    llt.compute(A);
    factorized = llt.info() == Eigen::Success;
  }
  if (!factorized) {
    throw FactorizationFailure(
        "Gram matrix is not positive definite even with the largest jitter");
  }
  model.jitter_used = jitter;
  model.chol = llt.matrixL();

  Eigen::VectorXd centered(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    centered[i] = y[i] - model.y_mean;
  }
  model.alpha = llt.solve(centered);
  return model;
}

namespace {

Prediction predict_from_cross(const GPModel& model, const Eigen::VectorXd& k_star,
                              double k_self) {
  Prediction out;
  out.mean = model.y_mean + k_star.dot(model.alpha);
  const Eigen::VectorXd v =
      model.chol.triangularView<Eigen::Lower>().solve(k_star);
  out.variance = std::max(0.0, k_self - v.squaredNorm());
  return out;
}

}  // namespace

Prediction gp_predict(const GPModel& model, const InputVector& x) {
  if (x.size() != model.dimension()) {
    throw DimensionMismatch("query dimension " + std::to_string(x.size()) +
                            " does not match model dimension " +
                            std::to_string(model.dimension()));
  }
  const auto n = static_cast<Eigen::Index>(model.x_train.size());
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star[i] = model.kernel.eval(model.x_train[i], x);
  }
  // Both kernel families have k(x, x) = 1 by construction; using the exact
  // value keeps single and batch prediction bitwise identical.
  return predict_from_cross(model, k_star, 1.0);
}

std::vector<Prediction> gp_predict_batch(const GPModel& model,
                                         const std::vector<InputVector>& xs) {
  std::vector<Prediction> out(xs.size());
  if (xs.empty()) {
    return out;
  }
  const auto n = static_cast<Eigen::Index>(model.x_train.size());

  if (!model.kernel.is_quantum()) {
    parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t q = begin; q < end; ++q) {
        Eigen::VectorXd k_star(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          k_star[i] =
              rbf_kernel(model.x_train[i], xs[q], *model.kernel.rbf_theta);
        }
        out[q] = predict_from_cross(model, k_star, 1.0);
      }
    });
    return out;
  }

  // Quantum kernels: prepare each training state once, then score every
  // query against the cached states.
  const QuantumKernelParams& params = *model.kernel.quantum;
  std::vector<StateVector> train_states;
  train_states.reserve(model.x_train.size());
  for (const InputVector& xt : model.x_train) {
    train_states.push_back(prepare_state(xt, params));
  }
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const StateVector sq = prepare_state(xs[q], params);
      Eigen::VectorXd k_star(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        k_star[i] =
            std::clamp(std::norm(inner_product(sq, train_states[i])), 0.0, 1.0);
      }
      out[q] = predict_from_cross(model, k_star, 1.0);
    }
  });
  return out;
}

double log_marginal_likelihood(const GPModel& model,
                               const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(model.x_train.size());
  if (static_cast<Eigen::Index>(y.size()) != n) {
    throw SizeMismatch("likelihood of " + std::to_string(y.size()) +
                       " targets under a model of " + std::to_string(n) +
                       " points");
  }
  Eigen::VectorXd centered(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    centered[i] = y[i] - model.y_mean;
  }
  const auto lower = model.chol.triangularView<Eigen::Lower>();
  const Eigen::VectorXd v = lower.solve(centered);
  const double quad = v.squaredNorm();
  const double log_det = 2.0 * model.chol.diagonal().array().log().sum();
  return -0.5 * quad - 0.5 * log_det -
         0.5 * static_cast<double>(n) * std::log(kTwoPi);
}

double stabilized_objective(double lml, double a) {
  if (!(a > 0.0)) {
    throw InvalidArgument("objective offset a must be positive");
  }
  const double log_a = std::log(a);
  if (lml > log_a + 35.0) {
    // exp(lml) dominates: log(exp(lml) + a) = lml + log1p(a exp(-lml)).
    return lml + std::log1p(a * std::exp(-lml));
  }
  // a dominates or both are moderate: log(a) + log1p(exp(lml) / a).
  return log_a + std::log1p(std::exp(lml) / a);
}

}  // namespace qgp
