#pragma once

// Numeric maximization used to cross-check closed-form optima.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "qss/channels.hpp"
#include "qss/linalg.hpp"
#include "qss/protocol.hpp"

namespace qss::optimizer {

struct ScalarObjective {
  std::function<double(double)> function;
  double lo = 0.0;
  double hi = 1.0;
  double tolerance = 1e-12;  // final bracket width
};

struct ScalarMaximum {
  double argmax;
  double value;
};

/// 64-point coarse grid, then golden-section refinement of the bracket around
/// the best grid point. Throws std::invalid_argument for a degenerate domain
/// or non-positive tolerance; exceptions from the objective propagate.
ScalarMaximum maximize_scalar(const ScalarObjective& objective, std::size_t grid_points = 64);

/// A secret paired with the state Bob holds for it before correction.
struct SecretSample {
  Secret secret;
  DensityMatrix state;  // normalized, 1 qubit
  double weight;
};

/// Average fidelity sum_i w_i <psi_i| U rho_i U^dagger |psi_i> for a
/// secret-independent U. Weights sum to at most 1.
struct UnitaryObjective {
  std::vector<SecretSample> samples;

  double evaluate(const ComplexMatrix& unitary) const;
  double total_weight() const;
};

struct CorrectionResult {
  ComplexMatrix unitary;
  std::array<double, 3> angles;  // su2(theta, phi, lambda)
  double average_fidelity;
};

struct CorrectionSearch {
  std::size_t grid = 16;      // per angle
  double grid_offset = 0.0;   // fraction of a grid step, for restarts
  double tolerance = 1e-10;   // refinement step at which the search stops
};

/// Best U over a coarse SU(2) angle grid followed by coordinatewise
/// golden-section refinement.
CorrectionResult optimize_correction(const UnitaryObjective& objective, const CorrectionSearch& search = {});

/// Conditional states of one outcome branch for a family of secrets: k on
/// the Gauss-Legendre nodes of [0,1] and `phases` equally spaced relative
/// phases (uniform on the Bloch sphere). With phases = 1 only real secrets
/// are used.
UnitaryObjective branch_objective(const ProtocolConfig& cfg, int alice, const std::vector<Sign>& collaborators,
                                  std::size_t phases = 8);

/// Same family, fidelity of the fixed Table-I correction for that branch.
double table_fidelity(const UnitaryObjective& objective, int alice, const std::vector<Sign>& collaborators);

}  // namespace qss::optimizer
