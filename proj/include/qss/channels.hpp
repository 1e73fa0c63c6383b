#pragma once

// Phase- and amplitude-damping channels, and the weak / reverse measurement
// operators used for decoherence suppression.

#include <cstddef>
#include <string_view>
#include <vector>

#include "qss/linalg.hpp"

namespace qss {

enum class ChannelKind { PhaseDamping, AmplitudeDamping };

std::string_view to_string(ChannelKind kind);

struct KrausChannel {
  ChannelKind kind;
  double strength;
  std::vector<ComplexMatrix> operators;  // each 2x2
};

/// K0 = sqrt(1-q) I, K1 = sqrt(q)|0><0|, K2 = sqrt(q)|1><1|.
KrausChannel pdc(double q);
/// K0 = |0><0| + sqrt(1-p)|1><1|, K1 = sqrt(p)|0><1|.
KrausChannel adc(double p);
KrausChannel make_channel(ChannelKind kind, double strength);

/// Max-norm of sum_i K_i^dagger K_i - I.
double validate_cptp(const KrausChannel& channel);

/// sum_i E_i rho E_i^dagger with E_i the i-th Kraus operator on `qubit`.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, std::size_t qubit);

enum class WeakKind {
  ForwardNull,   // diag(1, sqrt(1-s)), detector did not click
  ForwardClick,  // diag(0, sqrt(s)), detector clicked (irreversible)
  Reverse,       // diag(sqrt(1-r), 1)
};

struct WeakMeasurementOp {
  WeakKind kind;
  double strength;
  ComplexMatrix matrix;
};

WeakMeasurementOp weak_op(WeakKind kind, double strength);

struct SelectiveOutcome {
  DensityMatrix state;  // unnormalized E rho E^dagger
  double probability;   // its trace
};

/// Post-select on `op` acting on `qubit`. The state is not renormalized; if
/// the input is already sub-normalized the trace is the cumulative branch
/// probability.
SelectiveOutcome apply_selective(const DensityMatrix& rho, const WeakMeasurementOp& op,
                                 std::size_t qubit);

}  // namespace qss
