#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qss::cli {

enum class GridSize { Coarse, Fine };

/// Closed forms under test. Swappable so a perturbed formula can be shown
/// to fail.
struct FormulaSet {
  std::function<double(double, double)> f_pd;
  std::function<double(double, double)> f_ad;
  std::function<double(double, double)> f_ad_outcome1;
  std::function<double(double)> avg_f_pd;
  std::function<double(double)> avg_f_ad;
  std::function<double(double, double)> sp1;
  std::function<double(double, double, double, double)> sp2;
  std::function<double(double, double, double)> case2_success_probability;
  std::function<double(double, double, double, double)> f0_ww;
  std::function<double(double, double, double)> f1_ww;
  std::function<double(double, double)> avg_f1;
  std::function<double(double, double, double)> r_opt;

  static FormulaSet standard();
};

struct ValidationRow {
  std::string name;
  std::string grid;
  std::size_t points = 0;
  std::size_t skipped = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool gating = true;
  std::string worst_point;

  bool passed() const { return !gating || max_residual <= tolerance; }
};

std::vector<ValidationRow> run_validation(GridSize grid, const FormulaSet& formulas = FormulaSet::standard());

bool all_passed(const std::vector<ValidationRow>& rows);

void print_validation(const std::vector<ValidationRow>& rows, std::ostream& out);

}  // namespace qss::cli
