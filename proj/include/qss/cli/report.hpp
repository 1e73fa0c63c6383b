#pragma once

#include <json.hpp>
#include <optional>

#include "qss/cli/config.hpp"

namespace qss::cli {

using Json = nlohmann::ordered_json;

/// Number rounded to 12 significant digits; non-finite values become null.
Json json_real(double value);

/// Runs every configured iteration through one sequential session (one
/// session per k node when averaging) and builds the report.
/// `zero_probability` overrides the config threshold when set.
Json run_report(const RunConfig& cfg, std::optional<double> zero_probability = std::nullopt);

}  // namespace qss::cli
