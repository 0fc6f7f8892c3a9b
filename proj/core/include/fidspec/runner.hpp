/* Copyright 2026 The fidspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** @file runner.hpp
 *  @brief Scenario configuration (JSON), dispatch to the model sweeps and
 *  the CSV + metadata.json output bundle behind the `fidspec` tool.
 */

#ifndef FIDSPEC_RUNNER_HPP
#define FIDSPEC_RUNNER_HPP

#include "fidspec/bcs_thermal.hpp"
#include "fidspec/impurity_bdg.hpp"
#include "fidspec/xx_chain.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fidspec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitComputeError = 3;

/// Parse or validation failure; what() starts with the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string &message)
        : std::runtime_error(key_path + ": " + message), key_path_(std::move(key_path)) {}
    const std::string &key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

enum class Model { xx, impurity, bcs };

std::string_view model_name(Model m);

struct ImpurityScenario {
    enum class Mode { j_scan, spatial_map };
    Mode mode = Mode::j_scan;
    impurity::LatticeParams lattice;
    impurity::JScanSpec jscan;
    impurity::SpatialMapSpec spatial;
};

struct BcsScenario {
    bcs::BCSParams a;
    bcs::BCSParams b;
};

struct ScenarioConfig {
    Model model = Model::xx;
    std::filesystem::path output_dir = "fidspec-output";
    int moments_max = 5;
    xx::SweepSpec xx;
    ImpurityScenario impurity;
    BcsScenario bcs;
    std::string resolved_json;  ///< normalized config echoed into metadata.json
};

/// Parses and fully validates a JSON scenario. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path &path);

struct OutputFile {
    std::string name;
    std::size_t rows = 0;
    std::size_t columns = 0;
};

struct RunReport {
    std::filesystem::path output_dir;
    std::vector<OutputFile> files;
    double wall_seconds = 0.0;
};

/// Computes the scenario and writes its CSV files plus metadata.json into
/// config.output_dir. Model failures propagate as exceptions; nothing is
/// written before the computation has finished.
RunReport run_scenario(const ScenarioConfig &config);

/// Entry point of `fidspec <model> --config <path> [--out <dir>]`.
/// Returns kExitOk, kExitConfigError or kExitComputeError and reports
/// failures on `err`.
int run_command(std::string_view model, const std::filesystem::path &config_path,
                const std::optional<std::filesystem::path> &out_dir, std::ostream &err);

std::string_view tool_version();

}  // namespace fidspec

#endif  // FIDSPEC_RUNNER_HPP
