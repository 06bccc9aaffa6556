#include "qgp/quantum_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgp/parallel.hpp"

namespace qgp {

void QuantumKernelParams::validate() const {
  if (theta_single.empty()) {
    throw InvalidArgument("quantum kernel needs at least one qubit scale");
  }
  for (double t : theta_single) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw InvalidArgument("single-qubit scales must be positive and finite");
    }
  }
  if (entangled && (!(theta_pair > 0.0) || !std::isfinite(theta_pair))) {
    throw InvalidArgument("pair scale must be positive and finite");
  }
}

PhaseSet encode_phases(const InputVector& x, const QuantumKernelParams& p) {
  p.validate();
  const int m = p.num_qubits();
  if (x.size() != m) {
    throw DimensionMismatch("input of dimension " + std::to_string(x.size()) +
                            " for a " + std::to_string(m) + "-qubit kernel");
  }

  PhaseSet phases;
  phases.single.resize(m);
  for (int i = 0; i < m; ++i) {
    phases.single[i] = x[i] / p.theta_single[i];
  }
  phases.pair.assign(pair_count(m), 0.0);
  if (p.entangled) {
    std::size_t k = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j, ++k) {
        double diff = x[i] - x[j];
        if (p.abs_pair_diff) {
          diff = std::abs(diff);
        }
        phases.pair[k] = std::exp(-diff / p.theta_pair);
      }
    }
  }
  return phases;
}

StateVector prepare_state(const InputVector& x, const QuantumKernelParams& p) {
  const PhaseSet phases = encode_phases(x, p);
  StateVector s = zero_state(p.num_qubits());
  apply_hadamard_layer(s);
  apply_diagonal_phases(s, phases);
  apply_hadamard_layer(s);
  apply_diagonal_phases(s, phases);
  return s;
}

double kernel_exact(const InputVector& x, const InputVector& xp,
                    const QuantumKernelParams& p) {
  const StateVector sx = prepare_state(x, p);
  const StateVector sxp = prepare_state(xp, p);
  const double value = std::norm(inner_product(sxp, sx));
  return std::clamp(value, 0.0, 1.0);
}

double kernel_shots(const InputVector& x, const InputVector& xp,
                    const QuantumKernelParams& p, std::int64_t shots,
                    Rng& rng) {
  if (shots < 1) {
    throw InvalidArgument("shot count must be positive");
  }
  // U^dagger(xp) U(x) |0^m>: undo the two layers of U(xp) in reverse order.
  StateVector s = prepare_state(x, p);
  const PhaseSet undo = encode_phases(xp, p).negated();
  apply_diagonal_phases(s, undo);
  apply_hadamard_layer(s);
  apply_diagonal_phases(s, undo);
  apply_hadamard_layer(s);

  std::vector<double> cumulative = basis_probabilities(s);
  for (std::size_t k = 1; k < cumulative.size(); ++k) {
    cumulative[k] += cumulative[k - 1];
  }
  const double total = cumulative.back();

  std::int64_t zeros = 0;
  for (std::int64_t shot = 0; shot < shots; ++shot) {
    const double u = rng.uniform01() * total;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t outcome =
        std::min(static_cast<std::size_t>(it - cumulative.begin()),
                 cumulative.size() - 1);
    if (outcome == 0) {
      ++zeros;
    }
  }
  return static_cast<double>(zeros) / static_cast<double>(shots);
}

Eigen::MatrixXd gram_matrix(const std::vector<InputVector>& points,
                            const QuantumKernelParams& p) {
  if (points.empty()) {
    throw EmptyInput("gram matrix of an empty point set");
  }
  const auto n = points.size();

  std::vector<StateVector> states;
  states.reserve(n);
  for (const InputVector& x : points) {
    states.push_back(prepare_state(x, p));
  }

  Eigen::MatrixXd K(n, n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      K(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v =
            std::clamp(std::norm(inner_product(states[j], states[i])), 0.0, 1.0);
        K(i, j) = v;
        K(j, i) = v;
      }
    }
  });
  return K;
}

Eigen::MatrixXd gram_matrix_shots(const std::vector<InputVector>& points,
                                  const QuantumKernelParams& p,
                                  std::int64_t shots, Rng& rng) {
  if (points.empty()) {
    throw EmptyInput("gram matrix of an empty point set");
  }
  const auto n = points.size();
  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_shots(points[i], points[j], p, shots, rng);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  K = ((K + K.transpose()) / 2.0).eval();
  K.diagonal().setOnes();
  return K;
}

}  // namespace qgp
