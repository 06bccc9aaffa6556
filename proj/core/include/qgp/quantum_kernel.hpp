#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "qgp/rng.hpp"
#include "qgp/statevector.hpp"
#include "qgp/types.hpp"

namespace qgp {

/// Circuit parameters of the feature map. One qubit per input dimension;
/// each qubit carries its own single-rotation scale theta_single[i], and all
/// pair rotations share the one scale theta_pair.
struct QuantumKernelParams {
  std::vector<double> theta_single;
  double theta_pair = 1.0;  // ignored when entangled == false
  bool entangled = true;
  // Use |x_i - x_j| instead of (x_i - x_j) in the pair-phase argument.
  bool abs_pair_diff = false;

  int num_qubits() const { return static_cast<int>(theta_single.size()); }
  void validate() const;
};

/// Data-to-phase encoding: single[i] = x_i / theta_single[i] and, when
/// entangled, pair[ij] = exp(-(x_i - x_j) / theta_pair) for i < j; all pair
/// phases are zero for unentangled circuits.
PhaseSet encode_phases(const InputVector& x, const QuantumKernelParams& p);

/// Prepares the feature-map state: a Hadamard layer and the diagonal phase
/// layer of encode_phases, applied twice, on |0^m>.
StateVector prepare_state(const InputVector& x, const QuantumKernelParams& p);

/// Squared fidelity |<psi(xp)|psi(x)>|^2, clamped to [0, 1] against roundoff.
double kernel_exact(const InputVector& x, const InputVector& xp,
                    const QuantumKernelParams& p);

/// Finite-shot estimate: samples `shots` measurement outcomes of the state
/// U^dagger(xp) U(x) |0^m> and returns the observed frequency of the
/// all-zeros outcome. Unbiased estimator of kernel_exact.
double kernel_shots(const InputVector& x, const InputVector& xp,
                    const QuantumKernelParams& p, std::int64_t shots,
                    Rng& rng);

/// n x n kernel matrix. Each state is prepared once; each unordered pair is
/// evaluated once; the diagonal is exactly 1.
Eigen::MatrixXd gram_matrix(const std::vector<InputVector>& points,
                            const QuantumKernelParams& p);

/// Shot-based Gram matrix: off-diagonal entries estimated with kernel_shots,
/// then symmetrized and the diagonal forced to 1.
Eigen::MatrixXd gram_matrix_shots(const std::vector<InputVector>& points,
                                  const QuantumKernelParams& p,
                                  std::int64_t shots, Rng& rng);

}  // namespace qgp
