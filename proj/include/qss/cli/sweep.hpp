#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qss/cli/config.hpp"

namespace qss::cli {

struct Axis {
  std::string name;
  double min;
  double max;
  std::size_t steps;

  double at(std::size_t i) const;
};

struct SweepSpec {
  std::string quantity;
  std::vector<Axis> axes;  // outer axis first
  std::vector<std::pair<std::string, std::string>> fixed;
  std::optional<std::string> output;
};

/// Keys: `quantity`, `axis1`/`axis2` as "name, min, max, steps", `output`,
/// and one `name = value` per remaining parameter. fig1..fig5 supply
/// default axes.
SweepSpec sweep_spec_from(const KeyValueFile& file);

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::size_t warnings = 0;
  std::vector<std::string> messages;  // first few warnings, for stderr
};

/// Evaluates every grid point on up to `workers` threads. Rows come out in
/// grid order regardless of completion order. Out-of-domain points and
/// values outside [-slack, 1 + slack] become nan and count as warnings.
SweepTable run_sweep(const SweepSpec& spec, std::size_t workers = 1, double slack = 1e-12);

/// Header, rows in %.12g, then `# warnings: N`. LF line endings.
void write_csv(const SweepTable& table, std::ostream& out);

std::vector<std::string> sweep_quantities();

}  // namespace qss::cli
