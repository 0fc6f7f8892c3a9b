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

// fidspec <xx|impurity|bcs> --config <path> [--out <dir>]

#include "fidspec/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>

int main(int argc, char **argv) {
    CLI::App app{"Fidelity-operator spectra of free-fermion model states"};
    app.set_version_flag("--version", std::string(fidspec::tool_version()));
    app.require_subcommand(1);

    std::string config;
    std::string out;
    const std::pair<const char *, const char *> commands[] = {
        {"xx", "XX chain: entanglement, fidelity or susceptibility sweep"},
        {"impurity", "magnetic impurity in a 2-D BdG superconductor"},
        {"bcs", "thermal BCS states over the Brillouin zone"}};
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "scenario JSON file")->required();
        sub->add_option("--out", out, "output directory (overrides output_dir)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? fidspec::kExitOk : fidspec::kExitConfigError;
    }

    const auto *chosen = app.get_subcommands().front();
    std::optional<std::filesystem::path> out_dir;
    if (!out.empty()) out_dir = out;
    return fidspec::run_command(chosen->get_name(), config, out_dir, std::cerr);
}
