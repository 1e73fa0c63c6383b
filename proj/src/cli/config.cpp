#include "qss/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "qss/errors.hpp"

namespace qss::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, std::string_view source) {
  KeyValueFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": empty key");
    }
    if (out.has(key)) {
      throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    out.entries_.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  return parse(in, path.string());
}

bool KeyValueFile::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) {
      return v;
    }
  }
  return std::nullopt;
}

std::string KeyValueFile::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

void KeyValueFile::reject_unknown(const std::vector<std::string_view>& known) const {
  for (const auto& [k, v] : entries_) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
}

double parse_real(std::string_view text, std::string_view key) {
  const auto s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("'" + std::string(key) + "': not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view key) {
  const auto s = trim(text);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError("'" + std::string(key) + "': not a non-negative integer: '" + s + "'");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

bool parse_switch(std::string_view text, std::string_view key) {
  const auto s = lower(trim(text));
  if (s == "on" || s == "true" || s == "yes" || s == "1") {
    return true;
  }
  if (s == "off" || s == "false" || s == "no" || s == "0") {
    return false;
  }
  throw ParseError("'" + std::string(key) + "': expected on/off, got '" + s + "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in{std::string(text)};
  while (std::getline(in, cur, ',')) {
    out.push_back(trim(cur));
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    out.push_back(parse_real(item, key));
  }
  if (out.empty()) {
    throw ParseError("'" + std::string(key) + "': empty list");
  }
  return out;
}

std::string format_real(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_real(double value) {
  if (!std::isfinite(value)) {
    return value;
  }
  return std::strtod(format_real(value).c_str(), nullptr);
}

std::optional<double> tolerance_override_from_env() {
  const char* raw = std::getenv("QSS_SIM_TOLERANCE_OVERRIDE");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  const double v = parse_real(raw, "QSS_SIM_TOLERANCE_OVERRIDE");
  if (!(v >= 0.0)) {
    throw ParseError("QSS_SIM_TOLERANCE_OVERRIDE must be non-negative");
  }
  return v;
}

namespace {

std::optional<ChannelKind> parse_channel_kind(std::string_view text, std::string_view key) {
  const auto s = lower(trim(text));
  if (s == "none" || s == "off") {
    return std::nullopt;
  }
  if (s == "pdc" || s == "phase_damping") {
    return ChannelKind::PhaseDamping;
  }
  if (s == "adc" || s == "amplitude_damping") {
    return ChannelKind::AmplitudeDamping;
  }
  throw ParseError("'" + std::string(key) + "': expected none, pdc or adc, got '" + s + "'");
}

std::vector<double> broadcast(std::vector<double> values, std::size_t n, std::string_view key) {
  if (values.size() == 1) {
    return std::vector<double>(n, values.front());
  }
  if (values.size() != n) {
    throw ConfigError("'" + std::string(key) + "' needs 1 or " + std::to_string(n) + " values, got " +
                      std::to_string(values.size()));
  }
  return values;
}

}  // namespace

RunConfig run_config_from(const KeyValueFile& file) {
  file.reject_unknown({"parties", "iterations", "secret_k", "secret_phase", "average_over_k", "channel",
                       "strength", "iteration_strengths", "wmrqm", "weak_strength", "reverse_strength",
                       "return_trip", "return_trip_strength", "zero_probability"});
  RunConfig cfg;
  auto& pc = cfg.protocol;
  pc.parties = parse_count(file.get_or("parties", "2"), "parties");
  pc.iterations = parse_count(file.get_or("iterations", "1"), "iterations");
  if (pc.iterations == 0) {
    throw ConfigError("iterations must be >= 1");
  }
  cfg.average_over_k = parse_switch(file.get_or("average_over_k", "off"), "average_over_k");

  if (!cfg.average_over_k) {
    const auto k = file.get("secret_k");
    if (!k) {
      throw ConfigError("secret_k is required unless average_over_k = on");
    }
    cfg.secret_k = broadcast(parse_real_list(*k, "secret_k"), pc.iterations, "secret_k");
    cfg.secret_phase = broadcast(parse_real_list(file.get_or("secret_phase", "0"), "secret_phase"),
                                 pc.iterations, "secret_phase");
    for (double k_value : cfg.secret_k) {
      if (!(k_value >= 0.0 && k_value <= 1.0)) {
        throw ConfigError("secret_k = " + format_real(k_value) + " outside [0, 1]");
      }
    }
    for (std::size_t i = 0; i < pc.iterations; ++i) {
      pc.secrets.push_back(Secret::from_k(cfg.secret_k[i], cfg.secret_phase[i]));
    }
  } else if (file.has("secret_k") || file.has("secret_phase")) {
    throw ConfigError("secret_k/secret_phase cannot be combined with average_over_k = on");
  }

  if (auto kind = parse_channel_kind(file.get_or("channel", "none"), "channel")) {
    const auto s = file.get("strength");
    const auto per_iter = file.get("iteration_strengths");
    if (!s && !per_iter) {
      throw ConfigError("a channel needs 'strength' or 'iteration_strengths'");
    }
    pc.channel = ChannelSpec{*kind, s ? parse_real_list(*s, "strength") : std::vector<double>{0.0}};
    if (per_iter) {
      if (s) {
        throw ConfigError("'strength' and 'iteration_strengths' are mutually exclusive");
      }
      cfg.iteration_strengths = broadcast(parse_real_list(*per_iter, "iteration_strengths"), pc.iterations,
                                          "iteration_strengths");
      for (double v : cfg.iteration_strengths) {
        if (!(v >= 0.0 && v <= 1.0)) {
          throw ConfigError("iteration strength " + format_real(v) + " outside [0, 1]");
        }
      }
    }
  } else if (file.has("strength") || file.has("iteration_strengths")) {
    throw ConfigError("'strength' given but channel = none");
  }

  if (parse_switch(file.get_or("wmrqm", "off"), "wmrqm")) {
    const auto s = file.get("weak_strength");
    const auto r = file.get("reverse_strength");
    if (!s || !r) {
      throw ConfigError("wmrqm = on needs weak_strength and reverse_strength");
    }
    WmrqmSpec w{parse_real(*s, "weak_strength"), 0.0};
    if (lower(trim(*r)) == "opt") {
      cfg.reverse_optimal = true;
      if (cfg.average_over_k) {
        throw ConfigError("reverse_strength = opt needs explicit secrets (average_over_k = off)");
      }
      if (!pc.channel || pc.channel->kind != ChannelKind::AmplitudeDamping || pc.parties != 2 ||
          pc.channel->strengths.size() != 1) {
        throw ConfigError("reverse_strength = opt is defined for the three-party protocol under adc");
      }
    } else {
      w.reverse = parse_real(*r, "reverse_strength");
    }
    pc.wmrqm = w;
  } else if (file.has("weak_strength") || file.has("reverse_strength")) {
    throw ConfigError("weak/reverse strength given but wmrqm = off");
  }

  if (auto kind = parse_channel_kind(file.get_or("return_trip", "none"), "return_trip")) {
    pc.return_trip = ChannelSpec{*kind, parse_real_list(file.get_or("return_trip_strength", "0"),
                                                        "return_trip_strength")};
  }
  if (auto z = file.get("zero_probability")) {
    pc.zero_probability = parse_real(*z, "zero_probability");
  }
  pc.validate_settings();
  if (!cfg.average_over_k) {
    pc.validate();
  }
  return cfg;
}

}  // namespace qss::cli
