#include "qss/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qss/quadrature.hpp"

namespace qss::optimizer {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio

// Golden-section maximization on [a, b]; returns the best point seen,
// including the bracket ends.
ScalarMaximum golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  ScalarMaximum best{a, f(a)};
  const double fb = f(b);
  if (fb > best.value) {
    best = {b, fb};
  }
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 400 && (b - a) > tol; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, f(mid)}}) {
    if (v > best.value) {
      best = {x, v};
    }
  }
  return best;
}

struct CompiledObjective {
  std::vector<Eigen::Matrix2cd> states;
  std::vector<Eigen::Vector2cd> kets;
  std::vector<double> weights;

  explicit CompiledObjective(const UnitaryObjective& obj) {
    for (const auto& s : obj.samples) {
      states.emplace_back(s.state.matrix());
      kets.emplace_back(s.secret.ket());
      weights.push_back(s.weight);
    }
  }

  double operator()(const Eigen::Matrix2cd& u) const {
    const Eigen::Matrix2cd ud = u.adjoint();
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const Eigen::Vector2cd v = ud * kets[i];
      total += weights[i] * v.dot(states[i] * v).real();
    }
    return total;
  }
};

Eigen::Matrix2cd su2_fixed(const std::array<double, 3>& a) { return su2(a[0], a[1], a[2]); }

}  // namespace

ScalarMaximum maximize_scalar(const ScalarObjective& objective, std::size_t grid_points) {
  if (!(objective.hi > objective.lo)) {
    throw std::invalid_argument("maximize_scalar: degenerate domain");
  }
  if (!(objective.tolerance > 0.0)) {
    throw std::invalid_argument("maximize_scalar: tolerance must be positive");
  }
  grid_points = std::max<std::size_t>(grid_points, 3);
  const double step = (objective.hi - objective.lo) / static_cast<double>(grid_points - 1);
  std::size_t best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? objective.hi : objective.lo + step * static_cast<double>(i);
    const double v = objective.function(x);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = objective.lo + step * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  const double b = best_i + 1 >= grid_points ? objective.hi : objective.lo + step * static_cast<double>(best_i + 1);
  return golden_section(objective.function, a, std::min(b, objective.hi), objective.tolerance);
}

double UnitaryObjective::evaluate(const ComplexMatrix& unitary) const {
  return CompiledObjective(*this)(Eigen::Matrix2cd(unitary));
}

double UnitaryObjective::total_weight() const {
  double w = 0.0;
  for (const auto& s : samples) {
    w += s.weight;
  }
  return w;
}

CorrectionResult optimize_correction(const UnitaryObjective& objective, const CorrectionSearch& search) {
  const CompiledObjective f(objective);
  const std::size_t g = std::max<std::size_t>(search.grid, 2);
  const double pi = std::numbers::pi;

  std::array<double, 3> best{0.0, 0.0, 0.0};
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g; ++i) {
    const double theta = pi * (static_cast<double>(i) + search.grid_offset) / static_cast<double>(g - 1);
    for (std::size_t j = 0; j < g; ++j) {
      const double phi = 2.0 * pi * (static_cast<double>(j) + search.grid_offset) / static_cast<double>(g);
      for (std::size_t l = 0; l < g; ++l) {
        const double lambda = 2.0 * pi * (static_cast<double>(l) + search.grid_offset) / static_cast<double>(g);
        const std::array<double, 3> a{theta, phi, lambda};
        const double v = f(su2_fixed(a));
        if (v > best_v) {
          best_v = v;
          best = a;
        }
      }
    }
  }

  // Coordinatewise refinement with a shrinking bracket.
  double h = 2.0 * pi / static_cast<double>(g);
  for (int round = 0; round < 400 && h > search.tolerance; ++round) {
    const double before = best_v;
    for (std::size_t c = 0; c < 3; ++c) {
      auto along = [&](double x) {
        auto a = best;
        a[c] = x;
        return f(su2_fixed(a));
      };
      const auto m = golden_section(along, best[c] - h, best[c] + h, std::max(search.tolerance, h * 1e-3));
      if (m.value > best_v) {
        best_v = m.value;
        best[c] = m.argmax;
      }
    }
    if (best_v - before < 1e-13) {
      h *= 0.5;
    }
  }
  return {su2(best[0], best[1], best[2]), best, best_v};
}

UnitaryObjective branch_objective(const ProtocolConfig& cfg, int alice, const std::vector<Sign>& collaborators,
                                  std::size_t phases) {
  phases = std::max<std::size_t>(phases, 1);
  UnitaryObjective obj;
  for (const auto& node : quadrature::unit_interval_nodes()) {
    for (std::size_t j = 0; j < phases; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(phases);
      const auto secret = Secret::from_k(node.x, phase);
      for (const auto& b : enumerate_branches(shared_state(cfg, secret), cfg.parties)) {
        if (b.alice != alice || b.collaborators != collaborators || b.probability <= cfg.zero_probability) {
          continue;
        }
        obj.samples.push_back({secret, b.bob_state(cfg.parties).normalized(),
                               node.weight / static_cast<double>(phases)});
      }
    }
  }
  return obj;
}

double table_fidelity(const UnitaryObjective& objective, int alice, const std::vector<Sign>& collaborators) {
  return objective.evaluate(correction(alice, collaborators));
}

}  // namespace qss::optimizer
