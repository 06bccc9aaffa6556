#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qgp/errors.hpp"

namespace qgp {

/// Exact simulation bound: a 2^20 amplitude vector is the largest register
/// this library will allocate.
inline constexpr int kMaxQubits = 20;

/// Angles of one diagonal layer: one rotation per qubit plus one per qubit
/// pair. Pairs are stored lexicographically, (0,1), (0,2), ..., (m-2,m-1).
struct PhaseSet {
  std::vector<double> single;
  std::vector<double> pair;

  PhaseSet negated() const;
  void validate(int num_qubits) const;
};

std::size_t pair_count(int num_qubits);
std::size_t pair_index(int i, int j, int num_qubits);

/// Full amplitude vector of an m-qubit register. Qubit i maps to bit i of
/// the basis index (little endian), so |q_{m-1} ... q_1 q_0> lives at index
/// sum_i q_i 2^i.
class StateVector {
 public:
  static StateVector zero(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }

  std::complex<double>& amp(std::size_t index) { return amps_[index]; }
  const std::complex<double>& amp(std::size_t index) const {
    return amps_[index];
  }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

  double norm_sq() const;

 private:
  explicit StateVector(int num_qubits);

  int num_qubits_ = 0;
  std::vector<std::complex<double>> amps_;
};

/// |0...0> on m qubits. Throws TooManyQubits above kMaxQubits.
StateVector zero_state(int num_qubits);

/// Applies one Hadamard to every qubit, in place.
void apply_hadamard_layer(StateVector& s);

/// Multiplies each basis amplitude by exp(-i phase(b)) with
///   phase(b) = sum_i p.single[i] z_i(b) + sum_{i<j} p.pair[ij] z_i(b) z_j(b)
/// and z_i(b) = +1 when bit i of b is 0, -1 when it is 1. This is the fused
/// form of a layer of single- and two-qubit Z rotations, which all commute.
void apply_diagonal_phases(StateVector& s, const PhaseSet& p);

/// <a|b> = sum_k conj(a_k) b_k.
std::complex<double> inner_product(const StateVector& a, const StateVector& b);

/// |amplitude|^2 per basis index.
std::vector<double> basis_probabilities(const StateVector& s);

}  // namespace qgp
