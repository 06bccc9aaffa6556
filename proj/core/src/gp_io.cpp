#include <fstream>

#include <json.hpp>

#include "qgp/gp.hpp"

namespace qgp {

namespace {

using nlohmann::json;

json kernel_to_json(const KernelConfig& kernel) {
  json j;
  j["kind"] = to_string(kernel.kind);
  if (kernel.kind == KernelKind::rbf) {
    j["theta"] = *kernel.rbf_theta;
  } else {
    const QuantumKernelParams& q = *kernel.quantum;
    j["theta_single"] = q.theta_single;
    j["theta_pair"] = q.theta_pair;
    j["abs_pair_diff"] = q.abs_pair_diff;
  }
  return j;
}

KernelConfig kernel_from_json(const json& j) {
  const KernelKind kind = kernel_kind_from_string(j.at("kind"));
  if (kind == KernelKind::rbf) {
    return KernelConfig::make_rbf(j.at("theta").get<double>());
  }
  QuantumKernelParams q;
  q.theta_single = j.at("theta_single").get<std::vector<double>>();
  q.theta_pair = j.at("theta_pair").get<double>();
  q.entangled = kind == KernelKind::entangled;
  q.abs_pair_diff = j.value("abs_pair_diff", false);
  return KernelConfig::make_quantum(std::move(q));
}

}  // namespace

void save_model_json(const GPModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = "qgp-model";
  j["version"] = 1;
  j["kernel"] = kernel_to_json(model.kernel);
  j["noise_var"] = model.noise_var;
  j["jitter_used"] = model.jitter_used;
  j["y_mean"] = model.y_mean;
  j["dimension"] = model.dimension();

  json x_rows = json::array();
  for (const InputVector& x : model.x_train) {
    x_rows.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  }
  j["x_train"] = std::move(x_rows);
  j["alpha"] =
      std::vector<double>(model.alpha.data(), model.alpha.data() + model.alpha.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

GPModel load_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open model file " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("model file " + path.string() + ": " + e.what());
  }

  try {
    if (j.at("format") != "qgp-model") {
      throw ParseError("not a qgp model file: " + path.string());
    }
    GPModel model;
    model.kernel = kernel_from_json(j.at("kernel"));
    model.noise_var = j.at("noise_var").get<double>();
    model.jitter_used = j.at("jitter_used").get<double>();
    model.y_mean = j.at("y_mean").get<double>();
    const int dim = j.at("dimension").get<int>();

    for (const auto& row : j.at("x_train")) {
      const auto values = row.get<std::vector<double>>();
      if (static_cast<int>(values.size()) != dim) {
        throw ParseError("training row dimension mismatch in " + path.string());
      }
      model.x_train.push_back(
          Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()));
    }
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    if (alpha.size() != model.x_train.size()) {
      throw ParseError("alpha length mismatch in " + path.string());
    }
    model.alpha =
        Eigen::Map<const Eigen::VectorXd>(alpha.data(), alpha.size());

    // Re-factorize with the stored jitter. The inputs and kernel parameters
    // round-trip exactly, so this reproduces the fit-time factor bitwise.
    Eigen::MatrixXd A = model.kernel.gram(model.x_train);
    A.diagonal().array() += model.noise_var + model.jitter_used;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      throw FactorizationFailure("reloaded Gram matrix is not positive definite");
    }
    model.chol = llt.matrixL();
    return model;
  } catch (const json::exception& e) {
    throw ParseError("model file " + path.string() + ": " + e.what());
  }
}

}  // namespace qgp
