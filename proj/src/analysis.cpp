#include "qss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/quadrature.hpp"

namespace qss::analysis {
namespace {

std::string point(std::initializer_list<std::pair<const char*, double>> args) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& [name, v] : args) {
    os << (first ? "" : ", ") << name << '=' << v;
    first = false;
  }
  os << ')';
  return os.str();
}

void require_open_unit(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError(std::string(name) + " = " + std::to_string(v) + " outside (0, 1)");
  }
}

}  // namespace

double fidelity(const Secret& secret, const DensityMatrix& rho) {
  if (rho.num_qubits() != 1) {
    throw std::invalid_argument("fidelity needs a single-qubit state");
  }
  if (std::abs(rho.trace() - 1.0) > kTolerance) {
    throw std::invalid_argument("fidelity needs a normalized state, trace = " +
                                std::to_string(rho.trace()));
  }
  const auto psi = secret.ket();
  const double f = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

double f_pd(double k, double q) {
  require_in_range("k", k);
  require_in_range("q", q);
  const double c = (1.0 - q) * (1.0 - q);
  return k * k + 2.0 * c * k * (1.0 - k) + (1.0 - k) * (1.0 - k);
}

double avg_f_pd(double q) {
  require_in_range("q", q);
  return 1.0 - 2.0 * q / 3.0 + q * q / 3.0;
}

double f_ad(double k, double p) {
  require_in_range("k", k);
  require_in_range("p", p);
  return k + (1.0 - p) * (1.0 - k);
}

double f_ad_outcome1(double k, double p) {
  require_in_range("k", k);
  require_in_range("p", p);
  return 1.0 - p * k;
}

double avg_f_ad(double p) {
  require_in_range("p", p);
  return 1.0 - p / 2.0;
}

double sp1(double k, double s) {
  require_in_range("k", k);
  require_in_range("s", s);
  return 0.5 * (2.0 - s) * (1.0 - (1.0 - k) * s);
}

double sp2(double k, double s, double r, double p) {
  require_in_range("k", k);
  require_in_range("s", s);
  require_in_range("r", r);
  require_in_range("p", p);
  const double d = p * r - 1.0;
  return 0.5 * (k * (1.0 - r) - (1.0 - k) * d * (1.0 - s)) * (2.0 - (1.0 + p) * r + d * s);
}

double case2_success_probability(double s, double r, double p) {
  require_in_range("s", s);
  require_in_range("r", r);
  require_in_range("p", p);
  return 0.5 * (1.0 - s) * (1.0 - r) * (1.0 - p * r);
}

double case1_success_probability(double k, double s, double r, double p) {
  return sp2(k, s, r, p) - case2_success_probability(s, r, p);
}

double f0_ww(double k, double s, double r, double p) {
  require_in_range("k", k);
  require_in_range("s", s);
  require_in_range("r", r);
  require_in_range("p", p);
  const double kb = 1.0 - k;
  const double sb = 1.0 - s;
  const double rb = 1.0 - r;
  const double pb = 1.0 - p;
  const double d = p * r - 1.0;
  const double den = k * rb * rb + kb * sb * sb * d * d;
  if (den <= 0.0) {
    throw DomainError("f0_ww undefined at " + point({{"k", k}, {"s", s}, {"r", r}, {"p", p}}));
  }
  const double num = k * k * rb * rb - kb * kb * sb * sb * pb * d +
                     k * kb * sb * rb * (2.0 - (1.0 + s) * p - sb * p * p * r);
  return num / den;
}

double f1_ww(double k, double r, double p) {
  require_in_range("k", k);
  require_in_range("r", r);
  require_in_range("p", p);
  const double d = p * r - 1.0;
  if (d == 0.0) {
    throw DomainError("f1_ww singular at p r = 1");
  }
  return (p * (k + r - k * r) - 1.0) / d;
}

double avg_f1(double p, double r) {
  require_in_range("p", p);
  require_in_range("r", r);
  const double d = p * r - 1.0;
  if (d == 0.0) {
    throw DomainError("avg_f1 singular at p r = 1");
  }
  return (p + p * r - 2.0) / (2.0 * d);
}

double wmrqm_combined_fidelity(double k, double s, double r, double p) {
  const double w0 = case1_success_probability(k, s, r, p);
  const double w1 = case2_success_probability(s, r, p);
  double num = 0.0;
  double den = 0.0;
  if (w0 > 0.0) {
    num += w0 * f0_ww(k, s, r, p);
    den += w0;
  }
  if (w1 > 0.0) {
    num += w1 * f1_ww(k, r, p);
    den += w1;
  }
  if (den <= 0.0) {
    throw DomainError("no surviving branch at " + point({{"k", k}, {"s", s}, {"r", r}, {"p", p}}));
  }
  return num / den;
}

// --------------------------------------------------------------- optimality

namespace {
double lower_bound(double s, double p) { return (-p + p * s) / (-2.0 - 2.0 * p + 2.0 * p * s); }
double split_point(double s) { return (-1.0 + s) / (-4.0 + 2.0 * s); }
}  // namespace

bool in_optimality_region(double k, double s, double p) {
  if (!(p > 0.0 && p < 1.0 && s > 0.0 && s < 1.0)) {
    return false;
  }
  const double lo = lower_bound(s, p);
  const double mid = split_point(s);
  return (lo < k && k < mid) || (mid < k && k < 1.0);
}

std::vector<Interval> optimality_intervals(double s, double p) {
  require_open_unit("p", p);
  if (!(s >= 0.0 && s < 1.0)) {
    throw DomainError("s = " + std::to_string(s) + " outside [0, 1)");
  }
  const double lo = lower_bound(s, p);
  const double mid = split_point(s);
  std::vector<Interval> out;
  if (lo < mid) {
    out.push_back({lo, mid});
  }
  out.push_back({std::max(lo, mid), 1.0});
  return out;
}

namespace detail {
double r_opt_expression(double k, double s, double p) {
  const double sb = 1.0 - s;
  const double pb = 1.0 - p;
  const double f = p + 2.0 * k * (1.0 - p * sb) - p * s;
  const double inner = -(k * pb * pb * sb * sb) / ((k * (p * p * sb * sb - 1.0) - p * p * sb * sb) * f * f);
  return -std::sqrt(inner) + (1.0 + (2.0 * k - 1.0) * s) / f;
}
}  // namespace detail

double r_opt(double k, double s, double p) {
  if (!in_optimality_region(k, s, p)) {
    throw DomainError("r_opt requested outside the optimality region at " +
                      point({{"k", k}, {"s", s}, {"p", p}}));
  }
  return detail::r_opt_expression(k, s, p);
}

namespace {

template <typename F>
double average_over_region(double p, double s, KMeasure measure, F&& integrand) {
  const auto intervals = optimality_intervals(s, p);
  double total = 0.0;
  double length = 0.0;
  for (const auto& iv : intervals) {
    total += quadrature::adaptive(integrand, iv.lo, iv.hi, 1e-11);
    length += iv.length();
  }
  return measure == KMeasure::Unit ? total : total / length;
}

}  // namespace

double avg_f_opt0(double p, double s, KMeasure measure) {
  return average_over_region(p, s, measure, [&](double k) {
    const double r = std::clamp(detail::r_opt_expression(k, s, p), 0.0, 1.0);
    return f0_ww(k, s, r, p);
  });
}

double avg_success_probability(double p, double s, KMeasure measure) {
  return average_over_region(p, s, measure, [&](double k) {
    const double r = std::clamp(detail::r_opt_expression(k, s, p), 0.0, 1.0);
    return sp2(k, s, r, p);
  });
}

double avg_f_opt0_printed(double p, double s) {
  require_open_unit("p", p);
  if (!(s >= 0.0 && s < 1.0)) {
    throw DomainError("s = " + std::to_string(s) + " outside [0, 1)");
  }
  const double a = p * (1.0 - s);  // p sb
  const double u = std::sqrt(1.0 - a * a);
  const double v = 1.0 + p - p * s;
  const double w = std::sqrt(2.0 / v - 1.0);
  const double first = (8.0 - a * (a + 2.0) * (4.0 - 3.0 * a)) * u;
  const double second =
      2.0 * a * a * v * v *
      (std::log(a * (1.0 - u + a * (1.0 + u - 2.0 * w) + 2.0 * a * a * w)) -
       std::log((2.0 - a * a - 2.0 * u) * v));
  const double out = (first + second) / (8.0 * u * v * v);
  if (!std::isfinite(out)) {
    throw DomainError("printed average optimal fidelity undefined at " + point({{"p", p}, {"s", s}}));
  }
  return out;
}

}  // namespace qss::analysis
