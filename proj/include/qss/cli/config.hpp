#pragma once

// Flat `key = value` text files used for run configs and sweep specs.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qss/protocol.hpp"

namespace qss::cli {

/// Malformed input text (exit code 2).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitParse = 2,
  kExitConfig = 3,
  kExitDomain = 4,
};

class KeyValueFile {
 public:
  /// One `key = value` per line; `#` starts a comment; blank lines ignored.
  /// Duplicate keys and lines without '=' are parse errors.
  static KeyValueFile parse(std::istream& in, std::string_view source = "<input>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Throws ConfigError naming the first key not in `known`.
  void reject_unknown(const std::vector<std::string_view>& known) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

double parse_real(std::string_view text, std::string_view key);
std::size_t parse_count(std::string_view text, std::string_view key);
bool parse_switch(std::string_view text, std::string_view key);
std::vector<std::string> split_list(std::string_view text);
std::vector<double> parse_real_list(std::string_view text, std::string_view key);

/// 12 significant digits; lowercase nan/inf.
std::string format_real(double value);
/// `value` rounded to 12 significant digits.
double round_real(double value);

/// QSS_SIM_TOLERANCE_OVERRIDE, if set. Throws ParseError if malformed.
std::optional<double> tolerance_override_from_env();

struct RunConfig {
  ProtocolConfig protocol;
  /// Per-iteration channel strength overriding `protocol.channel`.
  std::vector<double> iteration_strengths;
  bool average_over_k = false;
  bool reverse_optimal = false;  // reverse strength = r_opt(k, s, p)
  std::vector<double> secret_k;
  std::vector<double> secret_phase;
};

/// Throws ParseError for malformed values and ConfigError for constraint
/// violations.
RunConfig run_config_from(const KeyValueFile& file);

}  // namespace qss::cli
