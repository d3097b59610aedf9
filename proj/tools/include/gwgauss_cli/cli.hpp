#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gwgauss::cli {

enum class Command { Igw, Uigw, Barycenter, Verify };

struct RunConfig {
    Command command = Command::Igw;
    double epsilon = 0.0;
    std::optional<double> tau;
    std::optional<std::vector<double>> weights;
    std::optional<std::size_t> target_dim;
    std::string output_path;  ///< empty: standard output
    std::uint64_t seed = 0;
    std::string suite = "all";
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kValidation = 2;
inline constexpr int kEpsilonCondition = 3;
inline constexpr int kNotConverged = 4;
}  // namespace exit_code

/// Names accepted by --suite.
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Builds the result document. Throws gwgauss::Error on invalid input.
[[nodiscard]] nlohmann::json execute(const RunConfig& config, const std::vector<std::string>& inputs);

/// Runs one command end to end: writes the JSON document to the configured
/// output and maps failures to exit codes with a message on err.
int run(const RunConfig& config, const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err);

/// Parses "0.5,0.5" style lists. Throws gwgauss::Error(InvalidArgument).
[[nodiscard]] std::vector<double> parse_csv(const std::string& text);

}  // namespace gwgauss::cli
