#include "qss/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "qss/errors.hpp"

namespace qss {
namespace {

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::PhaseDamping:
      return "pdc";
    case ChannelKind::AmplitudeDamping:
      return "adc";
  }
  return "unknown";
}

KrausChannel pdc(double q) {
  require_in_range("pdc strength q", q);
  return {ChannelKind::PhaseDamping,
          q,
          {std::sqrt(1.0 - q) * gates::identity(2), diag2(std::sqrt(q), 0.0), diag2(0.0, std::sqrt(q))}};
}

KrausChannel adc(double p) {
  require_in_range("adc strength p", p);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(p);
  return {ChannelKind::AmplitudeDamping, p, {diag2(1.0, std::sqrt(1.0 - p)), k1}};
}

KrausChannel make_channel(ChannelKind kind, double strength) {
  return kind == ChannelKind::PhaseDamping ? pdc(strength) : adc(strength);
}

double validate_cptp(const KrausChannel& channel) {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (const auto& k : channel.operators) {
    sum += k.adjoint() * k;
  }
  return max_abs_diff(sum, gates::identity(2));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, std::size_t qubit) {
  const auto n = rho.num_qubits();
  ComplexMatrix out = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : channel.operators) {
    const auto e = embed(k, {qubit}, n);
    out += e * rho.matrix() * e.adjoint();
  }
  out = (out + out.adjoint()).eval() * 0.5;
  return DensityMatrix(std::move(out));
}

WeakMeasurementOp weak_op(WeakKind kind, double strength) {
  require_in_range("measurement strength", strength);
  switch (kind) {
    case WeakKind::ForwardNull:
      return {kind, strength, diag2(1.0, std::sqrt(1.0 - strength))};
    case WeakKind::ForwardClick:
      return {kind, strength, diag2(0.0, std::sqrt(strength))};
    case WeakKind::Reverse:
      return {kind, strength, diag2(std::sqrt(1.0 - strength), 1.0)};
  }
  throw std::invalid_argument("unknown weak measurement kind");
}

SelectiveOutcome apply_selective(const DensityMatrix& rho, const WeakMeasurementOp& op,
                                 std::size_t qubit) {
  auto state = rho.transform(embed(op.matrix, {qubit}, rho.num_qubits()));
  const double prob = state.trace();
  return {std::move(state), prob};
}

}  // namespace qss
