#include "qgp/statevector.hpp"

#include <cmath>
#include <string>

namespace qgp {

PhaseSet PhaseSet::negated() const {
  PhaseSet out = *this;
  for (double& v : out.single) v = -v;
  for (double& v : out.pair) v = -v;
  return out;
}

void PhaseSet::validate(int num_qubits) const {
  if (single.size() != static_cast<std::size_t>(num_qubits) ||
      pair.size() != pair_count(num_qubits)) {
    throw SizeMismatch("phase set sized for " +
                       std::to_string(single.size()) + " qubits / " +
                       std::to_string(pair.size()) + " pairs, expected " +
                       std::to_string(num_qubits) + " / " +
                       std::to_string(pair_count(num_qubits)));
  }
  for (double v : single) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite single phase");
  }
  for (double v : pair) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite pair phase");
  }
}

std::size_t pair_count(int num_qubits) {
  return static_cast<std::size_t>(num_qubits) * (num_qubits - 1) / 2;
}

std::size_t pair_index(int i, int j, int num_qubits) {
  // Lexicographic: (0,1), (0,2), ..., (0,m-1), (1,2), ...
  const std::size_t m = static_cast<std::size_t>(num_qubits);
  const std::size_t a = static_cast<std::size_t>(i);
  const std::size_t b = static_cast<std::size_t>(j);
  return a * (2 * m - a - 1) / 2 + (b - a - 1);
}

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {}

StateVector StateVector::zero(int num_qubits) {
  if (num_qubits < 1) {
    throw InvalidArgument("register needs at least one qubit");
  }
  if (num_qubits > kMaxQubits) {
    throw TooManyQubits("register of " + std::to_string(num_qubits) +
                        " qubits exceeds the exact-simulation bound of " +
                        std::to_string(kMaxQubits));
  }
  StateVector s(num_qubits);
  s.amps_[0] = 1.0;
  return s;
}

double StateVector::norm_sq() const {
  double total = 0.0;
  for (const auto& a : amps_) {
    total += std::norm(a);
  }
  return total;
}

StateVector zero_state(int num_qubits) { return StateVector::zero(num_qubits); }

void apply_hadamard_layer(StateVector& s) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  auto& amps = s.amplitudes();
  const std::size_t n = amps.size();
  for (int q = 0; q < s.num_qubits(); ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < n; ++base) {
      if (base & bit) continue;
      const std::complex<double> a0 = amps[base];
      const std::complex<double> a1 = amps[base | bit];
      amps[base] = (a0 + a1) * inv_sqrt2;
      amps[base | bit] = (a0 - a1) * inv_sqrt2;
    }
  }
}

void apply_diagonal_phases(StateVector& s, const PhaseSet& p) {
  const int m = s.num_qubits();
  p.validate(m);

  const std::size_t n = s.size();
  double z[kMaxQubits];
  for (std::size_t b = 0; b < n; ++b) {
    double phase = 0.0;
    for (int i = 0; i < m; ++i) {
      z[i] = (b >> i) & 1 ? -1.0 : 1.0;
      phase += p.single[i] * z[i];
    }
    std::size_t k = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j, ++k) {
        phase += p.pair[k] * z[i] * z[j];
      }
    }
    s.amp(b) *= std::polar(1.0, -phase);
  }
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw SizeMismatch("inner product of " + std::to_string(a.num_qubits()) +
                       "- and " + std::to_string(b.num_qubits()) +
                       "-qubit states");
  }
  std::complex<double> total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    total += std::conj(a.amp(k)) * b.amp(k);
  }
  return total;
}

std::vector<double> basis_probabilities(const StateVector& s) {
  std::vector<double> probs(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    probs[k] = std::norm(s.amp(k));
  }
  return probs;
}

}  // namespace qgp
