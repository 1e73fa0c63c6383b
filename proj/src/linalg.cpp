#include "qss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace qss {
namespace {

// Bit of `qubit` in `label` for a register of `num_qubits` (qubit 0 is MSB).
inline std::size_t bit_of(std::size_t label, std::size_t qubit, std::size_t num_qubits) {
  return (label >> (num_qubits - 1 - qubit)) & 1U;
}

void check_targets(std::span<const std::size_t> targets, std::size_t num_qubits) {
  if (num_qubits > kMaxQubits) {
    throw std::invalid_argument("register of " + std::to_string(num_qubits) +
                                " qubits exceeds the supported maximum");
  }
  std::vector<bool> seen(num_qubits, false);
  for (auto t : targets) {
    if (t >= num_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(t) + " out of range for " +
                                  std::to_string(num_qubits) + " qubits");
    }
    if (seen[t]) {
      throw std::invalid_argument("duplicate qubit index " + std::to_string(t));
    }
    seen[t] = true;
  }
}

// Gather the bits at `qubits` of `label` into a compact index, first qubit MSB.
std::size_t gather(std::size_t label, std::span<const std::size_t> qubits, std::size_t num_qubits) {
  std::size_t out = 0;
  for (auto q : qubits) {
    out = (out << 1) | bit_of(label, q, num_qubits);
  }
  return out;
}

// Mask of the bits of `label` that belong to qubits outside `qubits`.
std::size_t complement_mask(std::span<const std::size_t> qubits, std::size_t num_qubits) {
  std::size_t mask = (std::size_t{1} << num_qubits) - 1;
  for (auto q : qubits) {
    mask &= ~(std::size_t{1} << (num_qubits - 1 - q));
  }
  return mask;
}

}  // namespace

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix shape mismatch");
  }
  if (a.size() == 0) {
    return 0.0;
  }
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  return max_abs_diff(a, b) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() &&
         max_abs_diff(m.adjoint() * m, ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

std::size_t qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) {
    ++n;
  }
  return n;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) {
    return ComplexMatrix::Identity(1, 1);
  }
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) {
    out = tensor(out, *it);
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> targets,
                    std::size_t num_qubits) {
  check_targets(targets, num_qubits);
  const auto sub_dim = std::size_t{1} << targets.size();
  if (static_cast<std::size_t>(op.rows()) != sub_dim || static_cast<std::size_t>(op.cols()) != sub_dim) {
    throw std::invalid_argument("operator of size " + std::to_string(op.rows()) + "x" +
                                std::to_string(op.cols()) + " does not act on " +
                                std::to_string(targets.size()) + " qubit(s)");
  }
  const auto dim = std::size_t{1} << num_qubits;
  const auto rest = complement_mask(targets, num_qubits);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    const auto sr = gather(r, targets, num_qubits);
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & rest) != (c & rest)) {
        continue;
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          op(static_cast<Eigen::Index>(sr), static_cast<Eigen::Index>(gather(c, targets, num_qubits)));
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::initializer_list<std::size_t> targets,
                    std::size_t num_qubits) {
  return embed(op, std::span<const std::size_t>(targets.begin(), targets.size()), num_qubits);
}

namespace gates {

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  const double h = 1.0 / std::sqrt(2.0);
  m << h, h, h, -h;
  return m;
}

ComplexMatrix projector(std::size_t dim, std::size_t index) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return m;
}

ComplexMatrix cnot(std::size_t control, std::size_t target, std::size_t num_qubits) {
  ComplexMatrix local = ComplexMatrix::Zero(4, 4);
  local(0, 0) = 1.0;
  local(1, 1) = 1.0;
  local(2, 3) = 1.0;
  local(3, 2) = 1.0;
  return embed(local, {control, target}, num_qubits);
}

}  // namespace gates

ComplexMatrix su2(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  ComplexMatrix u(2, 2);
  u << c, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s, std::polar(1.0, phi + lambda) * c;
  return u;
}

// ---------------------------------------------------------------- PureState

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  num_qubits_ = qubits_for_dimension(static_cast<std::size_t>(amplitudes_.size()));
  if (num_qubits_ > kMaxQubits) {
    throw std::invalid_argument("state exceeds the supported register size");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kTolerance) {
    throw std::invalid_argument("state vector squared norm " + std::to_string(norm2) + " is not 1");
  }
}

PureState PureState::basis(std::size_t num_qubits, std::size_t label) {
  const auto dim = std::size_t{1} << num_qubits;
  if (label >= dim) {
    throw std::invalid_argument("basis label out of range");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(label)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::apply(const ComplexMatrix& unitary) const {
  if (unitary.rows() != amplitudes_.size() || unitary.cols() != amplitudes_.size()) {
    throw std::invalid_argument("operator dimension does not match state");
  }
  return PureState(unitary * amplitudes_);
}

PureState PureState::tensor(const PureState& other) const {
  ComplexVector out(amplitudes_.size() * other.amplitudes_.size());
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    out.segment(i * other.amplitudes_.size(), other.amplitudes_.size()) =
        amplitudes_(i) * other.amplitudes_;
  }
  return PureState(std::move(out));
}

DensityMatrix PureState::density() const {
  return DensityMatrix(amplitudes_ * amplitudes_.adjoint());
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  num_qubits_ = qubits_for_dimension(static_cast<std::size_t>(matrix_.rows()));
  if (num_qubits_ > kMaxQubits) {
    throw std::invalid_argument("density matrix exceeds the supported register size");
  }
  if (!is_hermitian(matrix_)) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  trace_ = matrix_.trace().real();
  if (trace_ < -kTolerance || trace_ > 1.0 + kTolerance) {
    throw std::invalid_argument("density matrix trace " + std::to_string(trace_) +
                                " outside [0, 1]");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t num_qubits) {
  const auto dim = std::size_t{1} << num_qubits;
  return DensityMatrix(gates::identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::normalized() const {
  if (trace_ <= 0.0) {
    throw std::domain_error("cannot normalize a zero-trace state");
  }
  return DensityMatrix(matrix_ / trace_);
}

bool DensityMatrix::is_positive_semidefinite(double tol) const {
  const auto ev = eigenvalues(matrix_);
  return ev.empty() || ev.front() >= -tol;
}

DensityMatrix DensityMatrix::transform(const ComplexMatrix& op) const {
  if (op.rows() != matrix_.rows() || op.cols() != matrix_.cols()) {
    throw std::invalid_argument("operator dimension does not match state");
  }
  ComplexMatrix out = op * matrix_ * op.adjoint();
  // Restore exact Hermiticity lost to roundoff.
  out = (out + out.adjoint()).eval() * 0.5;
  return DensityMatrix(std::move(out));
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  return DensityMatrix(qss::tensor(matrix_, other.matrix_));
}

// -------------------------------------------------------------- reductions

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto n = rho.num_qubits();
  check_targets(keep, n);
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
      traced.push_back(q);
    }
  }
  const auto keep_dim = std::size_t{1} << keep.size();
  const auto dim = rho.dimension();
  const auto rest = complement_mask(keep, n);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(keep_dim),
                                          static_cast<Eigen::Index>(keep_dim));
  const auto& m = rho.matrix();
  for (std::size_t r = 0; r < dim; ++r) {
    const auto kr = gather(r, keep, n);
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & rest) != (c & rest)) {
        continue;
      }
      out(static_cast<Eigen::Index>(kr), static_cast<Eigen::Index>(gather(c, keep, n))) +=
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  out = (out + out.adjoint()).eval() * 0.5;
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

std::vector<double> eigenvalues(const ComplexMatrix& hermitian) {
  if (!is_hermitian(hermitian)) {
    throw std::invalid_argument("eigenvalues: matrix is not Hermitian");
  }
  if (hermitian.size() == 0) {
    return {};
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};  // ascending
}

double max_eigenvalue(const ComplexMatrix& hermitian) {
  const auto ev = eigenvalues(hermitian);
  if (ev.empty()) {
    throw std::invalid_argument("max_eigenvalue: empty matrix");
  }
  return ev.back();
}

double max_eigenvalue(const DensityMatrix& rho) { return max_eigenvalue(rho.matrix()); }

}  // namespace qss
