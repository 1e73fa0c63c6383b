#pragma once

// Closed-form fidelities, success probabilities and optimal reverse strengths
// for secret sharing through damping channels, with quadrature averages.
//
// Notation in comments: k = |alpha|^2 of the secret, q / p the phase / amplitude
// damping strengths, s the forward weak-measurement strength, r the reverse
// strength; xb = 1 - x.

#include <vector>

#include "qss/linalg.hpp"

namespace qss {

struct Secret;

namespace analysis {

/// <psi|rho|psi> for a normalized single-qubit rho.
double fidelity(const Secret& secret, const DensityMatrix& rho);

// --- phase damping ---------------------------------------------------------

/// k^2 + 2(1-q)^2 k(1-k) + (1-k)^2
double f_pd(double k, double q);
/// 1 - 2q/3 + q^2/3
double avg_f_pd(double q);

// --- amplitude damping -----------------------------------------------------

/// Alice outcome 0: k + (1-p)(1-k)
double f_ad(double k, double p);
/// Alice outcome 1 (after sigma_x): 1 - p k
double f_ad_outcome1(double k, double p);
/// 1 - p/2
double avg_f_ad(double p);

// --- weak measurement and reversal under amplitude damping -----------------

/// Trace after the forward null measurement on both transmitted qubits:
/// (1/2)(1 + sb)(1 - kb s).
double sp1(double k, double s);
/// Overall success probability (1/2)(k rb - kb d sb)(2 - (1+p) r + d s), d = pr - 1.
double sp2(double k, double s, double r, double p);
/// Part of sp2 with Alice outcome 1: (1/2) sb rb (1 - p r). Independent of k.
double case2_success_probability(double s, double r, double p);
/// Part of sp2 with Alice outcome 0.
double case1_success_probability(double k, double s, double r, double p);

/// Fidelity for Alice outcome 0. Throws DomainError where the denominator
/// k rb^2 + kb sb^2 d^2 vanishes.
double f0_ww(double k, double s, double r, double p);
/// Fidelity for Alice outcome 1: (p(k + r - k r) - 1)/(p r - 1). Throws at p r = 1.
double f1_ww(double k, double r, double p);
/// (p + p r - 2)/(2 p r - 2). Throws at p r = 1.
double avg_f1(double p, double r);
/// Success-weighted combination of f0_ww and f1_ww.
double wmrqm_combined_fidelity(double k, double s, double r, double p);

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

/// 0<p<1, 0<s<1 and k in (lo, mid) or (mid, 1), with
/// lo = (-p+ps)/(-2-2p+2ps), mid = (-1+s)/(-4+2s).
bool in_optimality_region(double k, double s, double p);
/// The allowed k-intervals for (s, p). Accepts s = 0 as the limit of the
/// strict condition.
std::vector<Interval> optimality_intervals(double s, double p);

/// Reverse strength maximizing f0_ww. Throws DomainError outside the region.
double r_opt(double k, double s, double p);

/// Normalizing measure used when averaging over the allowed k-range.
enum class KMeasure {
  Unit,          // integral over the allowed range, dk on [0,1]
  RegionLength,  // same integral divided by the range length
};

/// Average of f0_ww at r_opt over the allowed k-range (adaptive quadrature).
/// Requires 0 < p < 1, 0 <= s < 1.
double avg_f_opt0(double p, double s, KMeasure measure = KMeasure::Unit);
/// The printed closed form for the average optimal fidelity, with
/// u = sqrt(1 - p^2 sb^2), v = 1 + p - p s. Kept for comparison; it does not
/// agree with avg_f_opt0 under either measure.
double avg_f_opt0_printed(double p, double s);
/// Average of sp2 at r_opt over the allowed k-range.
double avg_success_probability(double p, double s, KMeasure measure = KMeasure::Unit);

namespace detail {
/// The r_opt expression without the region check.
double r_opt_expression(double k, double s, double p);
}  // namespace detail

}  // namespace analysis
}  // namespace qss
