#include <doctest.h>

#include <numbers>
#include <random>

#include "../oracle.hpp"
#include "qss/linalg.hpp"

using namespace qss;

namespace {

ComplexMatrix random_matrix(std::mt19937& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_density(std::mt19937& rng, Eigen::Index dim) {
  const ComplexMatrix a = random_matrix(rng, dim);
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("tensor product matches the oracle") {
  std::mt19937 rng(7);
  const auto a = random_matrix(rng, 2);
  const auto b = random_matrix(rng, 4);
  CHECK(max_abs_diff(tensor(a, b), oracle::kron(a, b)) < 1e-14);
  CHECK(tensor({a, b, a}).rows() == 16);
}

TEST_CASE("embed agrees with kron of single-qubit factors") {
  std::mt19937 rng(11);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto op = random_matrix(rng, 2);
      CHECK(max_abs_diff(embed(op, {q}, n), oracle::on(op, q, n)) < 1e-14);
    }
  }
}

TEST_CASE("embed handles non-adjacent and reversed targets") {
  const auto cx = gates::cnot(0, 1, 2);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t t = 0; t < n; ++t) {
        if (c == t) continue;
        CHECK(max_abs_diff(embed(cx, {c, t}, n), oracle::cnot(c, t, n)) < 1e-14);
        CHECK(max_abs_diff(gates::cnot(c, t, n), oracle::cnot(c, t, n)) < 1e-14);
      }
    }
  }
}

TEST_CASE("embed rejects bad targets") {
  CHECK_THROWS_AS(embed(gates::pauli_x(), {3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(gates::cnot(0, 1, 2), {1, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(gates::pauli_x(), {0, 1}, 3), std::invalid_argument);
}

TEST_CASE("partial trace matches direct summation, keep order respected") {
  std::mt19937 rng(3);
  const DensityMatrix rho(random_density(rng, 16));
  for (const std::vector<std::size_t>& keep :
       {std::vector<std::size_t>{0}, {3}, {1, 2}, {2, 1}, {3, 0, 2}, {0, 1, 2, 3}}) {
    const auto mine = partial_trace(rho, keep);
    CHECK(max_abs_diff(mine.matrix(), oracle::ptrace(rho.matrix(), keep, 4)) < 1e-14);
    CHECK(mine.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("partial trace of a product state returns the factors") {
  std::mt19937 rng(5);
  const ComplexMatrix a = random_density(rng, 2);
  const ComplexMatrix b = random_density(rng, 4);
  const DensityMatrix ab(tensor(a, b));
  CHECK(max_abs_diff(partial_trace(ab, {0}).matrix(), a) < 1e-14);
  CHECK(max_abs_diff(partial_trace(ab, {1, 2}).matrix(), b) < 1e-14);
}

TEST_CASE("pure state validation") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState{v}, std::invalid_argument);
  ComplexVector w(3);
  w << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(PureState{w}, std::invalid_argument);
  CHECK(PureState::basis(3, 5).amplitude(5) == Complex(1.0));
  CHECK_THROWS_AS(PureState::basis(2, 4), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(3, 3) / 3.0}, std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix{ComplexMatrix::Identity(2, 2)}, std::invalid_argument);  // trace 2
  const DensityMatrix zero(ComplexMatrix::Zero(2, 2));
  CHECK(zero.trace() == 0.0);
  CHECK_THROWS_AS(zero.normalized(), std::domain_error);
}

TEST_CASE("density matrix helpers") {
  const auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(mixed.is_positive_semidefinite());
  CHECK(max_eigenvalue(mixed) == doctest::Approx(0.25));
  const auto ev = eigenvalues(PureState::basis(1, 1).density().matrix());
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] <= ev[1]);
  CHECK(ev[1] == doctest::Approx(1.0));

  ComplexMatrix not_psd = ComplexMatrix::Zero(2, 2);
  not_psd(0, 0) = 1.2;
  not_psd(1, 1) = -0.2;
  CHECK_FALSE(DensityMatrix(not_psd).is_positive_semidefinite());

  const auto flipped = PureState::basis(1, 0).density().transform(gates::pauli_x());
  CHECK(std::abs(flipped.matrix()(1, 1) - 1.0) < 1e-15);
}

TEST_CASE("gates are unitary") {
  CHECK(is_unitary(gates::hadamard()));
  CHECK(is_unitary(gates::pauli_y()));
  CHECK(is_unitary(gates::cnot(2, 0, 3)));
  for (double t : {0.0, 0.4, 2.0, 3.1}) {
    CHECK(is_unitary(su2(t, 1.1 * t, 0.3 - t)));
  }
  CHECK(max_abs_diff(su2(0, 0, 0), gates::identity()) < 1e-15);
  CHECK(max_abs_diff(su2(std::numbers::pi, 0, std::numbers::pi), gates::pauli_x()) < 1e-15);
}

TEST_CASE("register dimension helper") {
  CHECK(qubits_for_dimension(8) == 3);
  CHECK_THROWS_AS(qubits_for_dimension(6), std::invalid_argument);
}
