#include "qss/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "qss/analysis.hpp"
#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/quadrature.hpp"

namespace qss::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Point {
  std::map<std::string, double> values;
  bool r_optimal = false;
  std::string channel;

  bool has(const std::string& name) const { return values.count(name) > 0 || (name == "r" && r_optimal); }
  double operator[](const std::string& name) const { return values.at(name); }

  double reverse(double k, double s, double p) const {
    return r_optimal ? analysis::r_opt(k, s, p) : values.at("r");
  }
};

using Evaluator = std::function<std::vector<double>(const Point&)>;

struct Quantity {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> columns;
  Evaluator eval;
  std::vector<Axis> default_axes;
};

double sim_fidelity(const Point& x) {
  ProtocolConfig c;
  c.parties = x.has("parties") ? static_cast<std::size_t>(x["parties"]) : 2;
  const bool adc = x.channel == "adc";
  if (x.channel != "none") {
    c.channel = ChannelSpec{adc ? ChannelKind::AmplitudeDamping : ChannelKind::PhaseDamping, {x["strength"]}};
  }
  const bool weak = x.has("s") || x.has("r");
  if (weak && !(x.has("s") && x.has("r"))) {
    throw ConfigError("sim_fidelity with weak measurement needs both s and r");
  }
  auto one = [&](double k) {
    ProtocolConfig ck = c;
    if (weak) {
      const double strength = c.channel ? c.channel->strength_for(0) : 0.0;
      ck.wmrqm = WmrqmSpec{x["s"], x.reverse(k, x["s"], strength)};
    }
    const double phase = x.has("phase") ? x["phase"] : 0.0;
    const auto agg = aggregate(run_iteration(ck, Secret::from_k(k, phase)));
    if (std::isnan(agg.fidelity)) {
      throw DomainError("no surviving branch at k = " + format_real(k));
    }
    return agg.fidelity;
  };
  if (x.has("k")) {
    return one(x["k"]);
  }
  double total = 0.0;
  for (const auto& node : quadrature::unit_interval_nodes()) {
    total += node.weight * one(node.x);
  }
  return total;
}

const std::map<std::string, Quantity>& quantities() {
  using namespace analysis;
  static const std::map<std::string, Quantity> table = [] {
    std::map<std::string, Quantity> t;
    const Axis q101{"q", 0.0, 1.0, 101};
    const Axis p101{"p", 0.0, 1.0, 101};
    const Axis p_open{"p", 0.01, 0.99, 50};
    const Axis s_grid{"s", 0.0, 0.98, 50};

    t["avg_f_pd"] = {{"q"}, {}, {"avg_f_pd"}, [](const Point& x) { return std::vector{avg_f_pd(x["q"])}; }, {}};
    t["avg_f_ad"] = {{"p"}, {}, {"avg_f_ad"}, [](const Point& x) { return std::vector{avg_f_ad(x["p"])}; }, {}};
    t["avg_f_opt0"] = {{"p", "s"}, {}, {"avg_f_opt0"},
                       [](const Point& x) { return std::vector{avg_f_opt0(x["p"], x["s"])}; }, {}};
    t["avg_f_opt0_printed"] = {{"p", "s"}, {}, {"avg_f_opt0_printed"},
                               [](const Point& x) { return std::vector{avg_f_opt0_printed(x["p"], x["s"])}; }, {}};
    t["prob_succ"] = {{"p", "s"}, {}, {"prob_succ"},
                      [](const Point& x) { return std::vector{avg_success_probability(x["p"], x["s"])}; }, {}};
    t["avg_f1"] = {{"p", "r"}, {}, {"avg_f1"}, [](const Point& x) { return std::vector{avg_f1(x["p"], x["r"])}; }, {}};
    t["sp2"] = {{"k", "s", "r", "p"}, {}, {"sp2"},
                [](const Point& x) {
                  const double k = x["k"], s = x["s"], p = x["p"];
                  return std::vector{sp2(k, s, x.reverse(k, s, p), p)};
                },
                {}};
    t["f0_ww"] = {{"k", "s", "r", "p"}, {}, {"f0_ww"},
                  [](const Point& x) {
                    const double k = x["k"], s = x["s"], p = x["p"];
                    return std::vector{f0_ww(k, s, x.reverse(k, s, p), p)};
                  },
                  {}};
    t["f1_ww"] = {{"k", "r", "p"}, {}, {"f1_ww"},
                  [](const Point& x) { return std::vector{f1_ww(x["k"], x["r"], x["p"])}; }, {}};
    t["f_pd"] = {{"k", "q"}, {}, {"f_pd"}, [](const Point& x) { return std::vector{f_pd(x["k"], x["q"])}; }, {}};
    t["f_ad"] = {{"k", "p"}, {}, {"f_ad"}, [](const Point& x) { return std::vector{f_ad(x["k"], x["p"])}; }, {}};
    t["sim_fidelity"] = {{"channel", "strength"}, {"k", "phase", "parties", "s", "r"}, {"sim_fidelity"},
                         [](const Point& x) { return std::vector{sim_fidelity(x)}; }, {}};

    t["fig1"] = {{"q"}, {}, {"avg_f_pd"}, [](const Point& x) { return std::vector{avg_f_pd(x["q"])}; }, {q101}};
    t["fig2"] = {{"p"}, {}, {"avg_f_ad"}, [](const Point& x) { return std::vector{avg_f_ad(x["p"])}; }, {p101}};
    t["fig3"] = {{"p", "s"}, {}, {"avg_f_opt0", "avg_f_ad"},
                 [](const Point& x) {
                   return std::vector{avg_f_opt0(x["p"], x["s"]), avg_f_ad(x["p"])};
                 },
                 {p_open, s_grid}};
    t["fig4"] = {{"p", "s"}, {}, {"prob_succ"},
                 [](const Point& x) { return std::vector{avg_success_probability(x["p"], x["s"])}; },
                 {p_open, s_grid}};
    t["fig5"] = {{"p", "r"}, {}, {"avg_f1", "avg_f_ad", "optimal_line"},
                 [](const Point& x) {
                   // Flat top surface: outcome-1 fidelity at r = 1.
                   return std::vector{avg_f1(x["p"], x["r"]), avg_f_ad(x["p"]), avg_f1(x["p"], 1.0)};
                 },
                 {Axis{"p", 0.0, 0.99, 100}, Axis{"r", 0.0, 1.0, 101}}};
    return t;
  }();
  return table;
}

bool unit_parameter(const std::string& name) {
  return name == "k" || name == "q" || name == "p" || name == "s" || name == "r" || name == "strength";
}

Axis parse_axis(const std::string& key, const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 4) {
    throw ParseError("'" + key + "': expected 'name, min, max, steps'");
  }
  return {parts[0], parse_real(parts[1], key), parse_real(parts[2], key), parse_count(parts[3], key)};
}

}  // namespace

double Axis::at(std::size_t i) const {
  if (i + 1 == steps) {
    return max;
  }
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::vector<std::string> sweep_quantities() {
  std::vector<std::string> out;
  for (const auto& [name, q] : quantities()) {
    out.push_back(name);
  }
  return out;
}

SweepSpec sweep_spec_from(const KeyValueFile& file) {
  SweepSpec spec;
  const auto quantity = file.get("quantity");
  if (!quantity) {
    throw ConfigError("sweep spec needs 'quantity'");
  }
  const auto it = quantities().find(*quantity);
  if (it == quantities().end()) {
    throw ConfigError("unknown quantity '" + *quantity + "'");
  }
  const auto& q = it->second;
  spec.quantity = *quantity;
  spec.output = file.get("output");

  for (const char* key : {"axis1", "axis2"}) {
    if (auto a = file.get(key)) {
      spec.axes.push_back(parse_axis(key, *a));
    }
  }
  if (file.has("axis2") && !file.has("axis1")) {
    throw ConfigError("axis2 given without axis1");
  }
  if (spec.axes.empty()) {
    spec.axes = q.default_axes;
  }
  if (spec.axes.empty()) {
    throw ConfigError("quantity '" + spec.quantity + "' needs at least axis1");
  }

  auto allowed = [&](const std::string& name) {
    return std::find(q.required.begin(), q.required.end(), name) != q.required.end() ||
           std::find(q.optional.begin(), q.optional.end(), name) != q.optional.end();
  };
  for (const auto& a : spec.axes) {
    if (!allowed(a.name) || a.name == "channel") {
      throw ConfigError("'" + a.name + "' cannot be an axis of " + spec.quantity);
    }
    if (a.steps < 2) {
      throw ConfigError("axis '" + a.name + "' needs at least 2 steps");
    }
    if (unit_parameter(a.name) && !(a.min >= 0.0 && a.max <= 1.0 && a.min <= a.max)) {
      throw ConfigError("axis '" + a.name + "' must lie within [0, 1]");
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
    throw ConfigError("both axes sweep '" + spec.axes[0].name + "'");
  }

  for (const auto& [key, value] : file.entries()) {
    if (key == "quantity" || key == "output" || key == "axis1" || key == "axis2") {
      continue;
    }
    if (!allowed(key)) {
      throw ConfigError("'" + key + "' is not a parameter of " + spec.quantity);
    }
    if (std::any_of(spec.axes.begin(), spec.axes.end(), [&](const Axis& a) { return a.name == key; })) {
      throw ConfigError("'" + key + "' is both an axis and fixed");
    }
    spec.fixed.emplace_back(key, value);
  }
  for (const auto& name : q.required) {
    const bool bound = std::any_of(spec.axes.begin(), spec.axes.end(), [&](const Axis& a) { return a.name == name; }) ||
                       std::any_of(spec.fixed.begin(), spec.fixed.end(), [&](const auto& f) { return f.first == name; });
    if (!bound) {
      throw ConfigError("parameter '" + name + "' of " + spec.quantity + " is unbound");
    }
  }
  return spec;
}

SweepTable run_sweep(const SweepSpec& spec, std::size_t workers, double slack) {
  const auto& q = quantities().at(spec.quantity);

  Point base;
  for (const auto& [key, value] : spec.fixed) {
    if (key == "channel") {
      if (value != "pdc" && value != "adc" && value != "none") {
        throw ConfigError("channel must be pdc, adc or none");
      }
      base.channel = value;
    } else if (key == "r" && value == "opt") {
      base.r_optimal = true;
    } else if (key == "parties") {
      const auto n = parse_count(value, key);
      if (n < 2 || n > kMaxQubits - 1) {
        throw ConfigError("parties must be in [2, " + std::to_string(kMaxQubits - 1) + "]");
      }
      base.values[key] = static_cast<double>(n);
    } else {
      const double v = parse_real(value, key);
      if (unit_parameter(key) && !(v >= 0.0 && v <= 1.0)) {
        throw ConfigError("'" + key + "' must lie within [0, 1]");
      }
      base.values[key] = v;
    }
  }

  std::size_t total = 1;
  for (const auto& a : spec.axes) {
    total *= a.steps;
  }

  SweepTable table;
  for (const auto& a : spec.axes) {
    table.columns.push_back(a.name);
  }
  table.columns.insert(table.columns.end(), q.columns.begin(), q.columns.end());
  table.rows.assign(total, {});

  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      Point x = base;
      std::vector<double> row;
      std::size_t rem = i;
      for (std::size_t a = spec.axes.size(); a-- > 0;) {
        const auto& axis = spec.axes[a];
        x.values[axis.name] = axis.at(rem % axis.steps);
        rem /= axis.steps;
      }
      for (const auto& axis : spec.axes) {
        row.push_back(x.values[axis.name]);
      }
      try {
        const auto v = q.eval(x);
        row.insert(row.end(), v.begin(), v.end());
      } catch (const std::domain_error& e) {
        row.resize(spec.axes.size() + q.columns.size(), kNaN);
        errors[i] = e.what();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = total;
        return;
      }
      table.rows[i] = std::move(row);
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(total, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  auto warn = [&](std::string msg) {
    ++table.warnings;
    if (table.messages.size() < 20) {
      table.messages.push_back(std::move(msg));
    }
  };
  for (std::size_t i = 0; i < total; ++i) {
    auto& row = table.rows[i];
    std::string where;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      where += (a ? ", " : "") + spec.axes[a].name + "=" + format_real(row[a]);
    }
    for (std::size_t c = spec.axes.size(); c < row.size(); ++c) {
      if (std::isnan(row[c])) {
        warn(table.columns[c] + " undefined at (" + where + ")" + (errors[i].empty() ? "" : ": " + errors[i]));
      } else if (!(row[c] >= -slack && row[c] <= 1.0 + slack)) {
        warn(table.columns[c] + " = " + format_real(row[c]) + " outside [0, 1] at (" + where + ")");
        row[c] = kNaN;
      }
    }
  }
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_real(row[c]);
    }
    out << '\n';
  }
  out << "# warnings: " << table.warnings << '\n';
}

}  // namespace qss::cli
