#pragma once

// Sequential (n,n)-threshold quantum secret sharing.
//
// Register layout for n receivers (n + 1 qubits):
//   index 0        secret qubit after the XOR, held by the first collaborator
//   index 1        the dealer's (Alice's) retained qubit
//   index 2..n-1   remaining collaborators
//   index n        the reconstructing receiver (Bob)
// For n = 2 this is Charlie / Alice / Bob.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qss/channels.hpp"
#include "qss/linalg.hpp"

namespace qss {

struct Secret {
  Complex alpha;
  Complex beta;

  /// Throws std::invalid_argument unless |alpha|^2 + |beta|^2 = 1.
  Secret(Complex alpha, Complex beta);
  /// alpha = sqrt(k), beta = sqrt(1-k) e^{i phase}.
  static Secret from_k(double k, double phase = 0.0);

  double k() const { return std::norm(alpha); }
  ComplexVector ket() const;
  PureState state() const;
};

enum class Basis { Computational, Hadamard };

struct MeasurementRecord {
  int outcome;  // 0/1, or +/- encoded as 0/1 for the Hadamard basis
  double probability;
  DensityMatrix state;  // unnormalized post-measurement state
};

/// One record per outcome; probabilities sum to trace(rho).
std::vector<MeasurementRecord> measure_projective(const DensityMatrix& rho, std::size_t qubit,
                                                  Basis basis);

enum class Sign { Plus, Minus };
enum class Pauli { I, Z, X, MinusIY };

char to_char(Sign s);
std::string_view to_string(Pauli p);
ComplexMatrix pauli_matrix(Pauli p);

/// Correction keyed by Alice's outcome and the parity of '-' outcomes.
Pauli correction_label(int alice, std::span<const Sign> collaborators);
ComplexMatrix correction(int alice, std::span<const Sign> collaborators);

namespace roles {
inline constexpr std::size_t kAlice = 1;
inline std::size_t register_size(std::size_t parties) { return parties + 1; }
inline std::size_t bob(std::size_t parties) { return parties; }
std::vector<std::size_t> collaborators(std::size_t parties);
std::vector<std::size_t> transmitted(std::size_t parties);
}  // namespace roles

/// GHZ state on n qubits, built as chained XOR from |+> (x) |0>^(n-1).
PureState make_resource(std::size_t parties);
/// Prepend the secret qubit and XOR it onto the first resource qubit.
PureState encode_secret(const Secret& secret, const PureState& resource);
DensityMatrix encode_secret(const Secret& secret, const DensityMatrix& resource);

struct ChannelSpec {
  ChannelKind kind;
  std::vector<double> strengths;  // one value (broadcast) or one per qubit

  double strength_for(std::size_t position) const;
};

struct WmrqmSpec {
  double forward;  // s
  double reverse;  // r
};

struct ProtocolConfig {
  std::size_t parties = 2;
  std::optional<ChannelSpec> channel;
  std::optional<WmrqmSpec> wmrqm;
  /// Noise on collaborator qubits travelling back to the dealer.
  std::optional<ChannelSpec> return_trip;
  std::size_t iterations = 1;
  std::vector<Secret> secrets;
  /// Branches with probability at or below this are reported as skipped.
  double zero_probability = 1e-14;

  /// Throws ConfigError. Checks everything except secrets/iterations.
  void validate_settings() const;
  /// validate_settings() plus secrets.size() == iterations.
  void validate() const;
};

/// Weak measurement, channel and reverse measurement on every transmitted
/// qubit. The result is unnormalized when WMRQM is enabled.
DensityMatrix distribute(const ProtocolConfig& cfg, const DensityMatrix& encoded);
/// encode + distribute using a fresh resource.
DensityMatrix shared_state(const ProtocolConfig& cfg, const Secret& secret);

struct Branch {
  int alice;
  std::vector<Sign> collaborators;
  double probability;
  DensityMatrix state;  // full register, unnormalized

  DensityMatrix bob_state(std::size_t parties) const;
};

/// All 2^n outcome branches of Alice's Z and the collaborators' X
/// measurements, Alice's outcome major.
std::vector<Branch> enumerate_branches(const DensityMatrix& shared, std::size_t parties);

/// Non-selective state after the local measurements and before any
/// classical announcement.
DensityMatrix pre_announcement_state(const DensityMatrix& shared, std::size_t parties);

struct IterationReport {
  std::size_t iteration_index = 0;
  int alice_outcome = 0;
  std::vector<Sign> collaborator_outcomes;
  Pauli correction_applied = Pauli::I;
  std::optional<DensityMatrix> reconstructed_state;  // normalized, 1 qubit
  double fidelity = 0.0;                             // NaN when skipped
  double branch_probability = 0.0;

  bool skipped() const { return !reconstructed_state.has_value(); }
  std::string outcome_label() const;
};

std::vector<IterationReport> reconstruct(const ProtocolConfig& cfg, const Secret& secret,
                                         const DensityMatrix& shared, std::size_t iteration_index);

/// Single iteration from a fresh resource.
std::vector<IterationReport> run_iteration(const ProtocolConfig& cfg, const Secret& secret);

struct Aggregate {
  double success_probability;  // sum of branch probabilities
  double fidelity;             // probability-weighted, conditioned on success
  std::size_t skipped_branches;
};

Aggregate aggregate(std::span<const IterationReport> reports);

/// Chain of iterations recycling the collaborators' returned qubits.
class SequentialSession {
 public:
  explicit SequentialSession(std::size_t parties);

  /// Reset the returned qubits (Z measurement + conditional X), add a fresh
  /// |+>, rebuild the resource by chained XOR, share `next` under `cfg`.
  std::vector<IterationReport> recycle_and_rerun(const Secret& next, const ProtocolConfig& cfg);

  std::size_t completed_iterations() const { return completed_; }
  /// Collaborator qubits as they arrive back at the dealer.
  const DensityMatrix& returned_qubits() const { return returned_; }
  /// Resource used by the most recent iteration.
  const std::optional<DensityMatrix>& last_resource() const { return last_resource_; }

 private:
  std::size_t parties_;
  std::size_t completed_ = 0;
  DensityMatrix returned_;
  std::optional<DensityMatrix> last_resource_;
};

/// Resource built from returned qubits: reset, fresh |+>, chained XOR.
DensityMatrix rebuild_resource(const DensityMatrix& returned);

/// Runs every configured secret in order through one session.
std::vector<std::vector<IterationReport>> run_sequence(const ProtocolConfig& cfg);

}  // namespace qss
