#include <doctest.h>

#include <cmath>
#include <complex>

#include "dense_oracle.hpp"
#include "qgp/rng.hpp"
#include "qgp/statevector.hpp"
#include "test_util.hpp"

using namespace qgp;
using Complex = std::complex<double>;

namespace {

constexpr double kTol = 1e-12;

StateVector random_state(int m, Rng& rng) {
  StateVector s = zero_state(m);
  double norm = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    s.amp(k) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    norm += std::norm(s.amp(k));
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (std::size_t k = 0; k < s.size(); ++k) {
    s.amp(k) *= scale;
  }
  return s;
}

PhaseSet random_phases(int m, Rng& rng) {
  PhaseSet p;
  p.single.resize(m);
  p.pair.resize(pair_count(m));
  for (double& v : p.single) v = rng.uniform(-3.0, 3.0);
  for (double& v : p.pair) v = rng.uniform(-3.0, 3.0);
  return p;
}

}  // namespace

TEST_CASE("zero state puts all amplitude on the all-zeros index") {
  const StateVector s1 = zero_state(1);
  CHECK(s1.size() == 2);
  CHECK(s1.amp(0) == Complex(1.0, 0.0));
  CHECK(s1.amp(1) == Complex(0.0, 0.0));

  const StateVector s2 = zero_state(2);
  CHECK(s2.size() == 4);
  CHECK(s2.amp(0) == Complex(1.0, 0.0));
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(s2.amp(k) == Complex(0.0, 0.0));
  }

  const StateVector s6 = zero_state(6);
  CHECK(s6.size() == 64);
  CHECK(s6.amp(0) == Complex(1.0, 0.0));
  CHECK(s6.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("qubit count bounds") {
  CHECK_THROWS_AS(zero_state(21), TooManyQubits);
  CHECK_THROWS_AS(zero_state(0), InvalidArgument);
  CHECK_NOTHROW(zero_state(kMaxQubits));
}

TEST_CASE("hadamard layer spreads the zero state uniformly") {
  StateVector s = zero_state(1);
  apply_hadamard_layer(s);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amp(0) - Complex(inv_sqrt2, 0)) < kTol);
  CHECK(std::abs(s.amp(1) - Complex(inv_sqrt2, 0)) < kTol);

  StateVector s2 = zero_state(2);
  apply_hadamard_layer(s2);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(s2.amp(k) - Complex(0.5, 0)) < kTol);
  }
}

TEST_CASE("hadamard layer is involutive") {
  Rng rng(11);
  for (int m : {1, 2, 3, 5}) {
    StateVector s = random_state(m, rng);
    const StateVector before = s;
    apply_hadamard_layer(s);
    apply_hadamard_layer(s);
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(std::abs(s.amp(k) - before.amp(k)) < kTol);
    }
  }
}

TEST_CASE("pair phase on |00> multiplies by e^{-i phi}") {
  const double phi = 0.8;
  StateVector s = zero_state(2);
  PhaseSet p;
  p.single = {0.0, 0.0};
  p.pair = {phi};
  apply_diagonal_phases(s, p);
  const Complex expected = std::exp(Complex(0.0, -phi));
  CHECK(std::abs(s.amp(0) - expected) < kTol);
}

TEST_CASE("zero phases leave the state unchanged") {
  Rng rng(12);
  StateVector s = random_state(3, rng);
  const StateVector before = s;
  PhaseSet p;
  p.single = {0.0, 0.0, 0.0};
  p.pair = {0.0, 0.0, 0.0};
  apply_diagonal_phases(s, p);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s.amp(k) == before.amp(k));
  }
}

TEST_CASE("pair phases commute under reordering") {
  Rng rng(13);
  const int m = 4;
  StateVector a = random_state(m, rng);
  StateVector b = a;

  PhaseSet all = random_phases(m, rng);
  // Split the pair terms into two groups and apply them in both orders.
  PhaseSet first, second;
  first.single = all.single;
  first.pair.assign(pair_count(m), 0.0);
  second.single.assign(m, 0.0);
  second.pair.assign(pair_count(m), 0.0);
  for (std::size_t k = 0; k < all.pair.size(); ++k) {
    (k % 2 == 0 ? first : second).pair[k] = all.pair[k];
  }

  apply_diagonal_phases(a, first);
  apply_diagonal_phases(a, second);
  apply_diagonal_phases(b, second);
  apply_diagonal_phases(b, first);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(a.amp(k) - b.amp(k)) < kTol);
  }
}

TEST_CASE("diagonal phases match the dense gate-matrix oracle") {
  Rng rng(14);
  for (int m = 1; m <= 4; ++m) {
    for (int rep = 0; rep < 10; ++rep) {
      StateVector s = random_state(m, rng);
      const PhaseSet p = random_phases(m, rng);
      const Eigen::VectorXcd expected =
          oracle::apply_diagonal(p, s.amplitudes(), m);
      apply_diagonal_phases(s, p);
      for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(std::abs(s.amp(k) - expected[static_cast<Eigen::Index>(k)]) <
              kTol);
      }
    }
  }
}

TEST_CASE("operations preserve the norm") {
  Rng rng(15);
  for (int m : {1, 3, 6}) {
    StateVector s = random_state(m, rng);
    apply_hadamard_layer(s);
    CHECK(std::abs(s.norm_sq() - 1.0) < kTol);
    apply_diagonal_phases(s, random_phases(m, rng));
    CHECK(std::abs(s.norm_sq() - 1.0) < kTol);
  }
}

TEST_CASE("phase set negation undoes the layer") {
  Rng rng(16);
  StateVector s = random_state(3, rng);
  const StateVector before = s;
  const PhaseSet p = random_phases(3, rng);
  apply_diagonal_phases(s, p);
  apply_diagonal_phases(s, p.negated());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(std::abs(s.amp(k) - before.amp(k)) < kTol);
  }
}

TEST_CASE("inner product basics") {
  Rng rng(17);
  const StateVector a = random_state(3, rng);
  CHECK(std::abs(inner_product(a, a) - Complex(1.0, 0.0)) < kTol);

  StateVector zero = zero_state(1);
  StateVector one = zero_state(1);
  one.amp(0) = 0.0;
  one.amp(1) = 1.0;
  CHECK(std::abs(inner_product(zero, one)) < kTol);

  const StateVector b = random_state(3, rng);
  CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < kTol);

  const StateVector c = random_state(2, rng);
  CHECK_THROWS_AS(inner_product(a, c), SizeMismatch);
}

TEST_CASE("phase set validation") {
  StateVector s = zero_state(3);
  PhaseSet wrong;
  wrong.single = {0.1, 0.2};
  wrong.pair = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(apply_diagonal_phases(s, wrong), SizeMismatch);

  PhaseSet nonfinite;
  nonfinite.single = {0.1, 0.2, std::nan("")};
  nonfinite.pair = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(apply_diagonal_phases(s, nonfinite), InvalidArgument);
}

TEST_CASE("pair indexing is lexicographic") {
  CHECK(pair_count(1) == 0);
  CHECK(pair_count(2) == 1);
  CHECK(pair_count(6) == 15);
  CHECK(pair_index(0, 1, 6) == 0);
  CHECK(pair_index(0, 5, 6) == 4);
  CHECK(pair_index(1, 2, 6) == 5);
  CHECK(pair_index(4, 5, 6) == 14);
}
