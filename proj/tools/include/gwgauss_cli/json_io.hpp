#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gwgauss/gaussian.hpp"

namespace gwgauss::cli {

inline constexpr const char* kSchema = "gw-gauss/1";

/// {"mass": m, "covariance": [[...]]} or {"mass": m, "spectrum": [...]}; mass
/// defaults to 1. Throws gwgauss::Error(InvalidArgument) on malformed input
/// and the usual validation errors from the measure constructors.
[[nodiscard]] GaussianMeasure measure_from_json(const nlohmann::json& doc);
[[nodiscard]] GaussianMeasure read_measure(const std::string& path);

/// Serialises with sorted keys and every double printed with 17 significant
/// digits, so output round-trips and is byte-stable.
void write_json(std::ostream& os, const nlohmann::json& doc, int indent = 2);
[[nodiscard]] std::string dump_json(const nlohmann::json& doc, int indent = 2);

}  // namespace gwgauss::cli
