#include "qss/protocol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qss/analysis.hpp"
#include "qss/errors.hpp"

namespace qss {

// ------------------------------------------------------------------ Secret

Secret::Secret(Complex a, Complex b) : alpha(a), beta(b) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > kTolerance) {
    throw std::invalid_argument("secret amplitudes are not normalized: |alpha|^2 + |beta|^2 = " +
                                std::to_string(norm2));
  }
}

Secret Secret::from_k(double k, double phase) {
  require_in_range("secret k", k);
  return Secret(Complex(std::sqrt(k), 0.0), std::polar(std::sqrt(1.0 - k), phase));
}

ComplexVector Secret::ket() const {
  ComplexVector v(2);
  v << alpha, beta;
  return v;
}

PureState Secret::state() const { return PureState(ket()); }

// ------------------------------------------------------------- measurement

std::vector<MeasurementRecord> measure_projective(const DensityMatrix& rho, std::size_t qubit,
                                                  Basis basis) {
  std::vector<MeasurementRecord> out;
  for (int outcome = 0; outcome < 2; ++outcome) {
    ComplexMatrix proj = gates::projector(2, static_cast<std::size_t>(outcome));
    if (basis == Basis::Hadamard) {
      const auto h = gates::hadamard();
      proj = h * proj * h;
    }
    auto post = rho.transform(embed(proj, {qubit}, rho.num_qubits()));
    const double prob = post.trace();
    out.push_back({outcome, prob, std::move(post)});
  }
  return out;
}

// -------------------------------------------------------------- corrections

char to_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

std::string_view to_string(Pauli p) {
  switch (p) {
    case Pauli::I:
      return "I";
    case Pauli::Z:
      return "Z";
    case Pauli::X:
      return "X";
    case Pauli::MinusIY:
      return "-iY";
  }
  return "?";
}

ComplexMatrix pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::I:
      return gates::identity(2);
    case Pauli::Z:
      return gates::pauli_z();
    case Pauli::X:
      return gates::pauli_x();
    case Pauli::MinusIY:
      return Complex(0.0, -1.0) * gates::pauli_y();
  }
  throw std::invalid_argument("unknown Pauli label");
}

Pauli correction_label(int alice, std::span<const Sign> collaborators) {
  bool odd = false;
  for (auto s : collaborators) {
    odd ^= (s == Sign::Minus);
  }
  if (alice == 0) {
    return odd ? Pauli::Z : Pauli::I;
  }
  return odd ? Pauli::MinusIY : Pauli::X;
}

ComplexMatrix correction(int alice, std::span<const Sign> collaborators) {
  return pauli_matrix(correction_label(alice, collaborators));
}

namespace roles {

std::vector<std::size_t> collaborators(std::size_t parties) {
  std::vector<std::size_t> out{0};
  for (std::size_t i = 2; i < parties; ++i) {
    out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> transmitted(std::size_t parties) {
  auto out = collaborators(parties);
  out.push_back(bob(parties));
  return out;
}

}  // namespace roles

// ---------------------------------------------------------------- encoding

namespace {

void check_parties(std::size_t parties) {
  if (parties < 2) {
    throw std::invalid_argument("at least two receivers are required");
  }
  if (roles::register_size(parties) > kMaxQubits) {
    throw std::invalid_argument("too many receivers for the supported register size");
  }
}

ComplexMatrix chained_xor(std::size_t num_qubits) {
  ComplexMatrix u = gates::identity(std::size_t{1} << num_qubits);
  for (std::size_t i = 0; i + 1 < num_qubits; ++i) {
    u = gates::cnot(i, i + 1, num_qubits) * u;
  }
  return u;
}

PureState plus_state() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return PureState(std::move(v));
}

}  // namespace

PureState make_resource(std::size_t parties) {
  check_parties(parties);
  auto start = plus_state();
  for (std::size_t i = 1; i < parties; ++i) {
    start = start.tensor(PureState::basis(1, 0));
  }
  return start.apply(chained_xor(parties));
}

PureState encode_secret(const Secret& secret, const PureState& resource) {
  if (resource.num_qubits() < 2) {
    throw std::invalid_argument("resource must have at least two qubits");
  }
  const auto n = resource.num_qubits() + 1;
  return secret.state().tensor(resource).apply(gates::cnot(0, 1, n));
}

DensityMatrix encode_secret(const Secret& secret, const DensityMatrix& resource) {
  if (resource.num_qubits() < 2) {
    throw std::invalid_argument("resource must have at least two qubits");
  }
  const auto n = resource.num_qubits() + 1;
  return secret.state().density().tensor(resource).transform(gates::cnot(0, 1, n));
}

// ------------------------------------------------------------ configuration

double ChannelSpec::strength_for(std::size_t position) const {
  if (strengths.size() == 1) {
    return strengths.front();
  }
  return strengths.at(position);
}

void ProtocolConfig::validate_settings() const {
  if (parties < 2) {
    throw ConfigError("parties must be >= 2");
  }
  if (roles::register_size(parties) > kMaxQubits) {
    throw ConfigError("parties must be <= " + std::to_string(kMaxQubits - 1));
  }
  auto check_strength = [](const std::string& what, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(what + " = " + std::to_string(v) + " outside [0, 1]");
    }
  };
  auto check_channel = [&](const std::optional<ChannelSpec>& ch, std::size_t expected,
                           const std::string& what) {
    if (!ch) {
      return;
    }
    if (ch->strengths.size() != 1 && ch->strengths.size() != expected) {
      throw ConfigError(what + " needs 1 or " + std::to_string(expected) + " strengths");
    }
    for (double v : ch->strengths) {
      check_strength(what + " strength", v);
    }
  };
  check_channel(channel, roles::transmitted(parties).size(), "channel");
  check_channel(return_trip, roles::collaborators(parties).size(), "return_trip");
  if (wmrqm) {
    check_strength("weak measurement strength", wmrqm->forward);
    check_strength("reverse measurement strength", wmrqm->reverse);
  }
  if (!(zero_probability >= 0.0)) {
    throw ConfigError("zero_probability must be non-negative");
  }
}

void ProtocolConfig::validate() const {
  validate_settings();
  if (iterations == 0) {
    throw ConfigError("iterations must be >= 1");
  }
  if (secrets.size() != iterations) {
    throw ConfigError("expected " + std::to_string(iterations) + " secrets, got " +
                      std::to_string(secrets.size()));
  }
}

// ------------------------------------------------------------ distribution

DensityMatrix distribute(const ProtocolConfig& cfg, const DensityMatrix& encoded) {
  const auto targets = roles::transmitted(cfg.parties);
  if (encoded.num_qubits() != roles::register_size(cfg.parties)) {
    throw std::invalid_argument("encoded state does not match the number of parties");
  }
  DensityMatrix rho = encoded;
  if (cfg.wmrqm) {
    const auto m0 = weak_op(WeakKind::ForwardNull, cfg.wmrqm->forward);
    for (auto t : targets) {
      rho = apply_selective(rho, m0, t).state;
    }
  }
  if (cfg.channel) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      rho = apply_channel(rho, make_channel(cfg.channel->kind, cfg.channel->strength_for(i)), targets[i]);
    }
  }
  if (cfg.wmrqm) {
    const auto n0 = weak_op(WeakKind::Reverse, cfg.wmrqm->reverse);
    for (auto t : targets) {
      rho = apply_selective(rho, n0, t).state;
    }
  }
  return rho;
}

DensityMatrix shared_state(const ProtocolConfig& cfg, const Secret& secret) {
  cfg.validate_settings();
  return distribute(cfg, encode_secret(secret, make_resource(cfg.parties)).density());
}

DensityMatrix Branch::bob_state(std::size_t parties) const {
  return partial_trace(state, {roles::bob(parties)});
}

std::vector<Branch> enumerate_branches(const DensityMatrix& shared, std::size_t parties) {
  check_parties(parties);
  if (shared.num_qubits() != roles::register_size(parties)) {
    throw std::invalid_argument("shared state does not match the number of parties");
  }
  std::vector<Branch> branches;
  for (auto& rec : measure_projective(shared, roles::kAlice, Basis::Computational)) {
    branches.push_back({rec.outcome, {}, rec.probability, std::move(rec.state)});
  }
  for (auto q : roles::collaborators(parties)) {
    std::vector<Branch> next;
    next.reserve(branches.size() * 2);
    for (const auto& b : branches) {
      for (auto& rec : measure_projective(b.state, q, Basis::Hadamard)) {
        auto signs = b.collaborators;
        signs.push_back(rec.outcome == 0 ? Sign::Plus : Sign::Minus);
        next.push_back({b.alice, std::move(signs), rec.probability, std::move(rec.state)});
      }
    }
    branches = std::move(next);
  }
  return branches;
}

DensityMatrix pre_announcement_state(const DensityMatrix& shared, std::size_t parties) {
  ComplexMatrix sum = ComplexMatrix::Zero(shared.matrix().rows(), shared.matrix().cols());
  for (const auto& b : enumerate_branches(shared, parties)) {
    sum += b.state.matrix();
  }
  return DensityMatrix(std::move(sum));
}

// ---------------------------------------------------------- reconstruction

std::string IterationReport::outcome_label() const {
  std::string out = std::to_string(alice_outcome);
  for (auto s : collaborator_outcomes) {
    out += to_char(s);
  }
  return out;
}

std::vector<IterationReport> reconstruct(const ProtocolConfig& cfg, const Secret& secret,
                                         const DensityMatrix& shared, std::size_t iteration_index) {
  std::vector<IterationReport> reports;
  for (auto& b : enumerate_branches(shared, cfg.parties)) {
    IterationReport rep;
    rep.iteration_index = iteration_index;
    rep.alice_outcome = b.alice;
    rep.collaborator_outcomes = b.collaborators;
    rep.correction_applied = correction_label(b.alice, b.collaborators);
    rep.branch_probability = std::max(0.0, b.probability);
    if (b.probability > cfg.zero_probability) {
      auto bob = b.bob_state(cfg.parties).transform(pauli_matrix(rep.correction_applied)).normalized();
      rep.fidelity = analysis::fidelity(secret, bob);
      rep.reconstructed_state = std::move(bob);
    } else {
      rep.fidelity = std::numeric_limits<double>::quiet_NaN();
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<IterationReport> run_iteration(const ProtocolConfig& cfg, const Secret& secret) {
  return reconstruct(cfg, secret, shared_state(cfg, secret), 0);
}

Aggregate aggregate(std::span<const IterationReport> reports) {
  double total = 0.0;
  double weighted = 0.0;
  double kept = 0.0;
  std::size_t skipped = 0;
  for (const auto& r : reports) {
    total += r.branch_probability;
    if (r.skipped()) {
      ++skipped;
      continue;
    }
    weighted += r.branch_probability * r.fidelity;
    kept += r.branch_probability;
  }
  const double fid = kept > 0.0 ? weighted / kept : std::numeric_limits<double>::quiet_NaN();
  return {total, fid, skipped};
}

// ---------------------------------------------------------------- recycling

DensityMatrix rebuild_resource(const DensityMatrix& returned) {
  const auto m = returned.num_qubits();
  DensityMatrix reset = returned;
  for (std::size_t q = 0; q < m; ++q) {
    auto records = measure_projective(reset, q, Basis::Computational);
    ComplexMatrix flipped = records[0].state.matrix() +
                            records[1].state.transform(embed(gates::pauli_x(), {q}, m)).matrix();
    reset = DensityMatrix(std::move(flipped));
  }
  auto start = plus_state().density().tensor(reset);
  return start.transform(chained_xor(m + 1));
}

namespace {
DensityMatrix fresh_returned_qubits(std::size_t parties) {
  check_parties(parties);
  return PureState::basis(parties - 1, 0).density();
}
}  // namespace

SequentialSession::SequentialSession(std::size_t parties)
    : parties_(parties), returned_(fresh_returned_qubits(parties)) {}

std::vector<IterationReport> SequentialSession::recycle_and_rerun(const Secret& next,
                                                                  const ProtocolConfig& cfg) {
  if (cfg.parties != parties_) {
    throw ConfigError("session was created for a different number of parties");
  }
  cfg.validate_settings();
  auto resource = rebuild_resource(returned_);
  auto shared = distribute(cfg, encode_secret(next, resource));
  auto reports = reconstruct(cfg, next, shared, completed_);

  // Collaborators send their measured qubits back; the dealer does not know
  // the branch, so she receives the mixture over surviving branches.
  const auto collab = roles::collaborators(parties_);
  const auto dim = std::size_t{1} << collab.size();
  ComplexMatrix back = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  double mass = 0.0;
  for (const auto& b : enumerate_branches(shared, parties_)) {
    back += partial_trace(b.state, collab).matrix();
    mass += b.probability;
  }
  if (mass > cfg.zero_probability) {
    returned_ = DensityMatrix(back / mass);
  } else {
    // Nothing survived post-selection; the dealer starts from fresh qubits.
    returned_ = PureState::basis(collab.size(), 0).density();
  }
  if (cfg.return_trip) {
    for (std::size_t i = 0; i < collab.size(); ++i) {
      returned_ = apply_channel(
          returned_, make_channel(cfg.return_trip->kind, cfg.return_trip->strength_for(i)), i);
    }
  }
  last_resource_ = std::move(resource);
  ++completed_;
  return reports;
}

std::vector<std::vector<IterationReport>> run_sequence(const ProtocolConfig& cfg) {
  cfg.validate();
  SequentialSession session(cfg.parties);
  std::vector<std::vector<IterationReport>> out;
  for (const auto& secret : cfg.secrets) {
    out.push_back(session.recycle_and_rerun(secret, cfg));
  }
  return out;
}

}  // namespace qss
