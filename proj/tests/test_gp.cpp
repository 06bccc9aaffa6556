#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "qgp/experiments.hpp"
#include "qgp/gp.hpp"
#include "qgp/rng.hpp"
#include "test_util.hpp"

using namespace qgp;

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// Dense-algebra reference: explicit inverse and determinant, no Cholesky.
double lml_dense(const Eigen::MatrixXd& covariance,
                 const Eigen::VectorXd& centered) {
  const double quad = centered.dot(covariance.inverse() * centered);
  const double log_det = std::log(covariance.determinant());
  return -0.5 * quad - 0.5 * log_det -
         static_cast<double>(centered.size()) * kHalfLog2Pi;
}

struct Problem {
  std::vector<InputVector> x;
  std::vector<double> y;
};

Problem synth_problem(int n, Rng& rng) {
  Problem prob;
  for (int i = 0; i < n; ++i) {
    const InputVector x = testutil::random_input(6, 0.5, 3.0, rng);
    prob.y.push_back(synth_pes(x));
    prob.x.push_back(x);
  }
  return prob;
}

}  // namespace

TEST_CASE("rbf kernel values") {
  InputVector x(3), y(3);
  x << 1.0, 2.0, 3.0;
  y = x;
  CHECK(rbf_kernel(x, y, 0.7) == 1.0);

  y << 1.0, 2.0, 4.0;  // squared distance 1
  CHECK(rbf_kernel(x, y, 0.5) ==
        doctest::Approx(0.60653065971263342).epsilon(1e-15));
  CHECK(rbf_kernel(x, y, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));

  InputVector z(2);
  z << 0.0, 0.0;
  CHECK_THROWS_AS(rbf_kernel(x, z, 1.0), DimensionMismatch);
  CHECK_THROWS_AS(rbf_kernel(x, y, 0.0), InvalidArgument);
}

TEST_CASE("kernel config carries exactly one parameterization") {
  CHECK_NOTHROW(KernelConfig::make_rbf(1.0).validate());

  QuantumKernelParams q;
  q.theta_single = {1.0, 2.0};
  q.theta_pair = 0.5;
  q.entangled = true;
  CHECK_NOTHROW(KernelConfig::make_quantum(q).validate());

  KernelConfig both = KernelConfig::make_rbf(1.0);
  both.quantum = q;
  CHECK_THROWS_AS(both.validate(), InvalidArgument);

  KernelConfig mismatched = KernelConfig::make_quantum(q);
  mismatched.kind = KernelKind::unentangled;
  CHECK_THROWS_AS(mismatched.validate(), InvalidArgument);
}

TEST_CASE("single-point fit centers the target away") {
  std::vector<InputVector> x{InputVector::Constant(2, 1.0)};
  const GPModel model = gp_fit(x, {5.0}, KernelConfig::make_rbf(1.0), 0.0);
  CHECK(model.y_mean == 5.0);
  CHECK(model.alpha[0] == 0.0);
  CHECK(model.jitter_used == 0.0);

  const Prediction pred = gp_predict(model, x[0]);
  CHECK(pred.mean == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("duplicated inputs survive through jitter") {
  std::vector<InputVector> x{InputVector::Constant(3, 1.5),
                             InputVector::Constant(3, 1.5)};
  GPModel model;
  CHECK_NOTHROW(model = gp_fit(x, {2.0, 2.0}, KernelConfig::make_rbf(2.0), 0.0));
  CHECK(model.jitter_used > 0.0);
  CHECK(std::isfinite(gp_predict(model, x[0]).mean));
}

TEST_CASE("refit is bitwise deterministic") {
  Rng rng(41);
  const Problem prob = synth_problem(30, rng);
  const KernelConfig kernel = KernelConfig::make_rbf(1.3);
  const GPModel a = gp_fit(prob.x, prob.y, kernel, 0.0);
  const GPModel b = gp_fit(prob.x, prob.y, kernel, 0.0);
  CHECK(a.alpha == b.alpha);
  CHECK(a.chol == b.chol);
  CHECK(a.y_mean == b.y_mean);
  CHECK(a.jitter_used == b.jitter_used);
}

TEST_CASE("noiseless models interpolate the training targets") {
  Rng rng(42);
  for (int rep = 0; rep < 3; ++rep) {
    const Problem prob = synth_problem(40, rng);
    const GPModel model = gp_fit(prob.x, prob.y, KernelConfig::make_rbf(2.0), 0.0);
    const double allowance = std::max(
        1e-6, 10.0 * model.jitter_used *
                  std::abs(*std::max_element(prob.y.begin(), prob.y.end())));
    for (std::size_t i = 0; i < prob.x.size(); ++i) {
      const Prediction pred = gp_predict(model, prob.x[i]);
      CHECK(std::abs(pred.mean - prob.y[i]) <=
            std::max(allowance, 1e-6 * std::abs(prob.y[i])));
      CHECK(pred.variance <= 1e-6);
    }
  }
}

TEST_CASE("quantum-kernel models interpolate too") {
  Rng rng(43);
  const Problem prob = synth_problem(25, rng);
  QuantumKernelParams q;
  q.theta_single = {0.8, 1.1, 0.9, 1.3, 1.0, 0.7};
  q.theta_pair = 2.0;
  q.entangled = true;
  const GPModel model =
      gp_fit(prob.x, prob.y, KernelConfig::make_quantum(q), 0.0);
  double y_inf = 0.0;
  for (double v : prob.y) y_inf = std::max(y_inf, std::abs(v));
  const double allowance =
      std::max(1e-6 * y_inf, 10.0 * model.jitter_used * y_inf);
  for (std::size_t i = 0; i < prob.x.size(); ++i) {
    const Prediction pred = gp_predict(model, prob.x[i]);
    CHECK(std::abs(pred.mean - prob.y[i]) <= allowance);
  }
}

TEST_CASE("prediction far from the data reverts to the target mean") {
  Rng rng(44);
  const Problem prob = synth_problem(20, rng);
  const GPModel model = gp_fit(prob.x, prob.y, KernelConfig::make_rbf(1.0), 0.0);

  InputVector far = InputVector::Constant(6, 500.0);
  const Prediction pred = gp_predict(model, far);
  CHECK(pred.mean == doctest::Approx(model.y_mean).epsilon(1e-12));
  CHECK(pred.variance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("variance stays within [0, k(x,x)]") {
  Rng rng(45);
  const Problem prob = synth_problem(30, rng);
  const GPModel model = gp_fit(prob.x, prob.y, KernelConfig::make_rbf(1.5), 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    const InputVector x = testutil::random_input(6, 0.5, 3.0, rng);
    const Prediction pred = gp_predict(model, x);
    CHECK(pred.variance >= 0.0);
    CHECK(pred.variance <= 1.0 + 1e-12);
  }
}

TEST_CASE("batch prediction equals per-point prediction bitwise") {
  Rng rng(46);
  const Problem prob = synth_problem(20, rng);

  std::vector<InputVector> queries;
  for (int i = 0; i < 15; ++i) {
    queries.push_back(testutil::random_input(6, 0.5, 3.0, rng));
  }

  QuantumKernelParams q;
  q.theta_single = {1.0, 1.2, 0.9, 1.4, 1.1, 0.8};
  q.theta_pair = 1.5;
  q.entangled = true;
  for (const KernelConfig& kernel :
       {KernelConfig::make_rbf(1.2), KernelConfig::make_quantum(q)}) {
    const GPModel model = gp_fit(prob.x, prob.y, kernel, 0.0);
    const auto batch = gp_predict_batch(model, queries);
    REQUIRE(batch.size() == queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const Prediction single = gp_predict(model, queries[i]);
      CHECK(batch[i].mean == single.mean);
      CHECK(batch[i].variance == single.variance);
    }
  }
}

TEST_CASE("cholesky factor reconstructs the covariance") {
  Rng rng(47);
  const Problem prob = synth_problem(25, rng);
  const KernelConfig kernel = KernelConfig::make_rbf(1.0);
  const GPModel model = gp_fit(prob.x, prob.y, kernel, 0.0);

  Eigen::MatrixXd expected = kernel.gram(prob.x);
  expected.diagonal().array() += model.noise_var + model.jitter_used;
  const Eigen::MatrixXd reconstructed = model.chol * model.chol.transpose();
  CHECK((reconstructed - expected).norm() / expected.norm() < 1e-8);

  Eigen::VectorXd centered(prob.y.size());
  for (std::size_t i = 0; i < prob.y.size(); ++i) {
    centered[static_cast<Eigen::Index>(i)] = prob.y[i] - model.y_mean;
  }
  const double residual = (expected * model.alpha - centered).norm();
  CHECK(residual <= 1e-8 * std::max(1.0, centered.norm()));
}

TEST_CASE("log marginal likelihood of a one-point model") {
  std::vector<InputVector> x{InputVector::Constant(2, 0.0)};
  // Fit against y = 5 so y_mean = 5; scoring y = 7 makes the centered
  // target equal 2.
  const GPModel model = gp_fit(x, {5.0}, KernelConfig::make_rbf(1.0), 0.0);
  CHECK(log_marginal_likelihood(model, {7.0}) ==
        doctest::Approx(-2.0 - kHalfLog2Pi).epsilon(1e-12));
  CHECK(log_marginal_likelihood(model, {5.0}) ==
        doctest::Approx(-kHalfLog2Pi).epsilon(1e-12));
  CHECK_THROWS_AS(log_marginal_likelihood(model, {1.0, 2.0}), SizeMismatch);
}

TEST_CASE("scaling centered targets up strictly decreases the likelihood") {
  Rng rng(48);
  std::vector<InputVector> x;
  std::vector<double> y{-40.0, -15.0, 0.0, 20.0, 35.0};  // zero mean
  for (int i = 0; i < 5; ++i) {
    x.push_back(testutil::random_input(3, 0.0, 2.0, rng));
  }
  const GPModel model = gp_fit(x, y, KernelConfig::make_rbf(0.8), 0.0);
  REQUIRE(model.y_mean == 0.0);

  double previous = log_marginal_likelihood(model, y);
  for (double scale : {2.0, 4.0, 8.0}) {
    std::vector<double> scaled;
    for (double v : y) scaled.push_back(scale * v);
    const double lml = log_marginal_likelihood(model, scaled);
    CHECK(lml < previous);
    previous = lml;
  }
}

TEST_CASE("factorized likelihood agrees with the dense-inverse reference") {
  Rng rng(49);
  for (int n : {3, 8, 14, 20}) {
    const Problem prob = synth_problem(n, rng);
    const KernelConfig kernel = KernelConfig::make_rbf(1.1);
    const GPModel model = gp_fit(prob.x, prob.y, kernel, 0.0);

    Eigen::MatrixXd covariance = kernel.gram(prob.x);
    covariance.diagonal().array() += model.noise_var + model.jitter_used;
    Eigen::VectorXd centered(n);
    for (int i = 0; i < n; ++i) {
      centered[i] = prob.y[i] - model.y_mean;
    }
    const double expected = lml_dense(covariance, centered);
    const double actual = log_marginal_likelihood(model, prob.y);
    CHECK(std::abs(actual - expected) <= 1e-8 * std::abs(expected));
  }
}

TEST_CASE("stabilized objective values") {
  CHECK(stabilized_objective(0.0, 1.0) ==
        doctest::Approx(0.69314718055994531).epsilon(1e-15));
  CHECK(stabilized_objective(-1e6, 1.0) == 0.0);  // floor log(1)
  CHECK(std::abs(stabilized_objective(500.0, 1.0) - 500.0) <= 1e-9);
  CHECK(std::isfinite(stabilized_objective(1e6, 1.0)));
  CHECK(std::isfinite(stabilized_objective(-1e6, 1.0)));
  CHECK(stabilized_objective(-1e6, 2.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(stabilized_objective(0.0, 0.0), InvalidArgument);
}

TEST_CASE("stabilized objective is monotone with an exact floor") {
  for (double a : {0.1, 1.0, 10.0}) {
    // Globally non-decreasing; exp(lml) underflows against log(a) far below
    // the floor, so strictness only holds where the increment is
    // representable.
    double previous = stabilized_objective(-1e6, a);
    for (double lml = -1000.0; lml <= 1000.0; lml += 10.0) {
      const double value = stabilized_objective(lml, a);
      CHECK(value >= previous);
      CHECK(value >= std::log(a));
      previous = value;
    }
    previous = stabilized_objective(-30.0, a);
    for (double lml = -29.0; lml <= 700.0; lml += 1.0) {
      const double value = stabilized_objective(lml, a);
      CHECK(value > previous);
      previous = value;
    }
  }
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(gp_fit({}, {}, KernelConfig::make_rbf(1.0), 0.0), EmptyInput);

  std::vector<InputVector> x{InputVector::Constant(2, 1.0)};
  CHECK_THROWS_AS(gp_fit(x, {1.0, 2.0}, KernelConfig::make_rbf(1.0), 0.0),
                  SizeMismatch);
  CHECK_THROWS_AS(gp_fit(x, {1.0}, KernelConfig::make_rbf(1.0), -0.5),
                  InvalidArgument);

  const GPModel model = gp_fit(x, {1.0}, KernelConfig::make_rbf(1.0), 0.0);
  CHECK_THROWS_AS(gp_predict(model, InputVector::Constant(3, 0.0)),
                  DimensionMismatch);
}

TEST_CASE("model persistence reproduces predictions bitwise") {
  Rng rng(50);
  const Problem prob = synth_problem(20, rng);

  QuantumKernelParams q;
  q.theta_single = {0.9, 1.7, 1.2, 0.6, 1.4, 1.0};
  q.theta_pair = 2.3;
  q.entangled = true;
  const auto path =
      std::filesystem::temp_directory_path() / "qgp_test_model.json";

  for (const KernelConfig& kernel :
       {KernelConfig::make_rbf(0.37), KernelConfig::make_quantum(q)}) {
    const GPModel model = gp_fit(prob.x, prob.y, kernel, 0.0);
    save_model_json(model, path);
    const GPModel loaded = load_model_json(path);

    CHECK(loaded.y_mean == model.y_mean);
    CHECK(loaded.noise_var == model.noise_var);
    CHECK(loaded.jitter_used == model.jitter_used);
    CHECK(loaded.alpha == model.alpha);
    CHECK(loaded.chol == model.chol);

    for (int rep = 0; rep < 10; ++rep) {
      const InputVector xq = testutil::random_input(6, 0.5, 3.0, rng);
      const Prediction a = gp_predict(model, xq);
      const Prediction b = gp_predict(loaded, xq);
      CHECK(a.mean == b.mean);
      CHECK(a.variance == b.variance);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("model loader rejects malformed files") {
  const auto path =
      std::filesystem::temp_directory_path() / "qgp_test_bad_model.json";
  {
    std::ofstream out(path);
    out << "{\"format\": \"other\"}";
  }
  CHECK_THROWS_AS(load_model_json(path), ParseError);
  {
    std::ofstream out(path);
    out << "not json";
  }
  CHECK_THROWS_AS(load_model_json(path), ParseError);
  CHECK_THROWS_AS(load_model_json("/nonexistent/model.json"), IoError);
  std::filesystem::remove(path);
}
