#pragma once

// Dense complex linear algebra for small qubit registers.
//
// Qubit ordering: register index 0 is the most-significant bit of a basis
// label, so for three qubits |q0 q1 q2> has label 4*q0 + 2*q1 + q2.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qss {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Absolute tolerance for equality and invariant checks.
inline constexpr double kTolerance = 1e-10;
/// Tolerance for linear-algebra residuals (completeness, unitarity).
inline constexpr double kResidualTolerance = 1e-12;
inline constexpr std::size_t kMaxQubits = 8;

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kTolerance);
bool is_hermitian(const ComplexMatrix& m, double tol = kTolerance);
bool is_unitary(const ComplexMatrix& m, double tol = kTolerance);

/// Number of qubits n with 2^n == dim; throws std::invalid_argument otherwise.
std::size_t qubits_for_dimension(std::size_t dim);

/// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors);

/// Lift `op` (acting on `targets`, first target most significant) to the full
/// register of `num_qubits`, identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> targets,
                    std::size_t num_qubits);
ComplexMatrix embed(const ComplexMatrix& op, std::initializer_list<std::size_t> targets,
                    std::size_t num_qubits);

/// Single-qubit gate matrices.
namespace gates {
ComplexMatrix identity(std::size_t dim = 2);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
ComplexMatrix projector(std::size_t dim, std::size_t index);
/// CNOT on a register of `num_qubits`.
ComplexMatrix cnot(std::size_t control, std::size_t target, std::size_t num_qubits);
}  // namespace gates

/// U(theta, phi, lambda) =
///   [[cos(theta/2), -e^{i lambda} sin(theta/2)],
///    [e^{i phi} sin(theta/2), e^{i(phi+lambda)} cos(theta/2)]]
/// Covers SU(2) up to global phase.
ComplexMatrix su2(double theta, double phi, double lambda);

class DensityMatrix;

/// Normalized state vector of a register.
class PureState {
 public:
  /// Throws std::invalid_argument unless the length is a power of two and the
  /// squared norm is 1 within tolerance.
  explicit PureState(ComplexVector amplitudes);

  static PureState basis(std::size_t num_qubits, std::size_t label);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t label) const { return amplitudes_(static_cast<Eigen::Index>(label)); }

  PureState apply(const ComplexMatrix& unitary) const;
  PureState tensor(const PureState& other) const;
  DensityMatrix density() const;

 private:
  std::size_t num_qubits_;
  ComplexVector amplitudes_;
};

/// Hermitian state of a register. Sub-normalized states (trace < 1) are
/// permitted; they arise after selective operations and carry the branch
/// probability as their trace.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument on non-square/non-power-of-two shapes,
  /// non-Hermitian input, or trace outside [0, 1 + tolerance].
  explicit DensityMatrix(ComplexMatrix matrix);

  static DensityMatrix maximally_mixed(std::size_t num_qubits);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double trace() const { return trace_; }

  /// Copy scaled to unit trace; throws std::domain_error for trace 0.
  DensityMatrix normalized() const;
  /// Smallest eigenvalue >= -tol.
  bool is_positive_semidefinite(double tol = kTolerance) const;

  DensityMatrix transform(const ComplexMatrix& op) const;
  DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  std::size_t num_qubits_;
  ComplexMatrix matrix_;
  double trace_;
};

/// Reduced state on `keep` (in the given order). Trace is preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep);

/// Largest eigenvalue of a Hermitian matrix; throws std::invalid_argument
/// otherwise.
double max_eigenvalue(const ComplexMatrix& hermitian);
double max_eigenvalue(const DensityMatrix& rho);
std::vector<double> eigenvalues(const ComplexMatrix& hermitian);

}  // namespace qss
