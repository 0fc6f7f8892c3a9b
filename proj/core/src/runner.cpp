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

#include "fidspec/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace fidspec {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

#ifndef FIDSPEC_VERSION
#define FIDSPEC_VERSION "0.0.0"
#endif

// Reads one JSON object, tracks which keys were consumed and reports
// failures with their full key path.
class Section {
public:
    Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const std::string &name) const {
        if (name.empty()) return path_;
        return path_.empty() ? name : path_ + "." + name;
    }

    bool has(const std::string &name) const { return node_.contains(name); }

    const json &raw(const std::string &name) {
        used_.insert(name);
        return node_.at(name);
    }

    double number(const std::string &name, std::optional<double> fallback = std::nullopt) {
        if (!has(name)) {
            if (fallback) return *fallback;
            throw ConfigError(key(name), "missing required number");
        }
        const json &v = raw(name);
        if (!v.is_number()) throw ConfigError(key(name), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(key(name), "must be finite");
        return x;
    }

    int integer(const std::string &name, std::optional<int> fallback = std::nullopt) {
        if (!has(name)) {
            if (fallback) return *fallback;
            throw ConfigError(key(name), "missing required integer");
        }
        const json &v = raw(name);
        if (!v.is_number_integer()) throw ConfigError(key(name), "expected an integer");
        return v.get<int>();
    }

    std::string text(const std::string &name, std::optional<std::string> fallback = std::nullopt) {
        if (!has(name)) {
            if (fallback) return *fallback;
            throw ConfigError(key(name), "missing required string");
        }
        const json &v = raw(name);
        if (!v.is_string()) throw ConfigError(key(name), "expected a string");
        return v.get<std::string>();
    }

    /// A number, a list of numbers, or {"start", "stop", "step"} (inclusive).
    std::vector<double> grid(const std::string &name) {
        if (!has(name)) throw ConfigError(key(name), "missing required grid");
        const json &v = raw(name);
        const std::string k = key(name);
        if (v.is_number()) return {v.get<double>()};
        if (v.is_array()) {
            std::vector<double> out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number()) {
                    throw ConfigError(k + "[" + std::to_string(i) + "]", "expected a number");
                }
                out.push_back(v[i].get<double>());
            }
            if (out.empty()) throw ConfigError(k, "grid is empty");
            return out;
        }
        if (v.is_object()) {
            Section range(v, k);
            const double start = range.number("start");
            const double stop = range.number("stop");
            const double step = range.number("step");
            range.finish();
            if (!(step > 0.0)) throw ConfigError(k + ".step", "must be positive");
            if (stop < start) throw ConfigError(k + ".stop", "must not be below start");
            const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
            if (count > 1000000) throw ConfigError(k, "grid has more than 10^6 points");
            std::vector<double> out;
            for (long i = 0; i < count; ++i) {
                // round away the representation noise of start + i*step
                const double x = start + static_cast<double>(i) * step;
                out.push_back(std::stod(format_value(x)));
            }
            return out;
        }
        throw ConfigError(k, "expected a number, a list or a {start, stop, step} range");
    }

    std::vector<int> integers(const std::string &name) {
        if (!has(name)) throw ConfigError(key(name), "missing required integer or list");
        const json &v = raw(name);
        if (v.is_number_integer()) return {v.get<int>()};
        if (!v.is_array() || v.empty()) throw ConfigError(key(name), "expected an integer or a list");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer()) {
                throw ConfigError(key(name) + "[" + std::to_string(i) + "]", "expected an integer");
            }
            out.push_back(v[i].get<int>());
        }
        return out;
    }

    void finish() const {
        for (const auto &item : node_.items()) {
            if (!used_.count(item.key())) throw ConfigError(key(item.key()), "unknown key");
        }
    }

private:
    const json &node_;
    std::string path_;
    std::set<std::string> used_;
};

// Module validation failures become config errors on the section.
template <typename F>
void validate_section(const std::string &path, F &&check) {
    try {
        check();
    } catch (const ContractError &e) {
        throw ConfigError(path, e.what());
    }
}

void parse_xx(Section &s, ScenarioConfig &cfg) {
    auto &spec = cfg.xx;
    const std::string mode = s.text("mode");
    spec.moments_max = cfg.moments_max;
    spec.L = s.integers("L");
    if (mode == "entanglement") {
        spec.kind = xx::SweepKind::entanglement;
        spec.h_grid = s.grid("h_grid");
    } else if (mode == "fidelity") {
        spec.kind = xx::SweepKind::fidelity;
        if (s.has("h1") || s.has("h2")) {
            const auto h1 = s.grid("h1");
            const auto h2 = s.grid("h2");
            for (double a : h1) {
                for (double b : h2) spec.pairs.emplace_back(a, b);
            }
        } else {
            spec.h_grid = s.grid("h_grid");
            spec.delta_h = s.number("delta_h", kDefaultDeltaH);
            if (!(spec.delta_h > 0.0)) throw ConfigError(s.key("delta_h"), "must be positive");
            for (double h : spec.h_grid) spec.pairs.emplace_back(h, h - spec.delta_h);
        }
    } else if (mode == "susceptibility") {
        spec.kind = xx::SweepKind::susceptibility;
        spec.h_grid = s.grid("h_grid");
        spec.delta_h = s.number("delta_h", kDefaultDeltaH);
    } else {
        throw ConfigError(s.key("mode"),
                          "expected one of entanglement, fidelity, susceptibility");
    }
    s.finish();
    validate_section(s.key(""), [&] { xx::validate(spec); });
}

impurity::Site parse_site(Section &s, const std::string &name, const impurity::LatticeParams &p) {
    if (!s.has(name)) return impurity::impurity_site(p);
    const json &v = s.raw(name);
    if (v.is_string()) {
        const auto label = v.get<std::string>();
        if (label == "impurity" || label == "center") return impurity::impurity_site(p);
        if (label == "corner") return impurity::corner_site(p);
        throw ConfigError(s.key(name), "expected \"impurity\", \"corner\" or [x, y]");
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
        return {v[0].get<int>(), v[1].get<int>()};
    }
    throw ConfigError(s.key(name), "expected \"impurity\", \"corner\" or [x, y]");
}

void parse_impurity(Section &s, ScenarioConfig &cfg) {
    auto &sc = cfg.impurity;
    auto &p = sc.lattice;
    const std::string mode = s.text("mode", std::string("j_scan"));
    p.nx = s.integer("nx", p.nx);
    p.ny = s.integer("ny", p.ny);
    p.t = s.number("t", p.t);
    p.eps_f = s.number("eps_f", p.eps_f);
    p.v_pair = s.number("v_pair", p.v_pair);
    p.tolerance = s.number("tolerance", p.tolerance);
    p.max_iterations = s.integer("max_iterations", p.max_iterations);
    p.mixing = s.number("mixing", p.mixing);
    validate_section(s.key(""), [&] {
        impurity::validate(p);
        impurity::impurity_site(p);
    });
    if (mode == "j_scan") {
        sc.mode = ImpurityScenario::Mode::j_scan;
        sc.jscan.J_grid = s.grid("J_grid");
        sc.jscan.delta_J = s.number("delta_J", 0.05);
        sc.jscan.site = parse_site(s, "site", p);
        s.finish();
        validate_section(s.key(""), [&] { impurity::validate(p, sc.jscan); });
    } else if (mode == "spatial_map") {
        sc.mode = ImpurityScenario::Mode::spatial_map;
        sc.spatial.J_grid = s.grid("J_grid");
        sc.spatial.anchor = parse_site(s, "site", p);
        s.finish();
        validate_section(s.key(""), [&] { impurity::validate(p, sc.spatial); });
    } else {
        throw ConfigError(s.key("mode"), "expected j_scan or spatial_map");
    }
}

void parse_bcs_gap(Section &s, const std::string &name, bcs::BCSParams &p) {
    if (!s.has(name)) throw ConfigError(s.key(name), "missing required gap (number or \"self-consistent\")");
    const json &v = s.raw(name);
    if (v.is_number()) {
        p.delta = v.get<double>();
        if (!(p.delta >= 0.0)) throw ConfigError(s.key(name), "gap must be non-negative");
        return;
    }
    if (v.is_string() && v.get<std::string>() == "self-consistent") {
        p.self_consistent = true;
        return;
    }
    throw ConfigError(s.key(name), "expected a number or \"self-consistent\"");
}

void parse_bcs(Section &s, ScenarioConfig &cfg) {
    auto &a = cfg.bcs.a;
    auto &b = cfg.bcs.b;
    a.T = s.number("T_a");
    b.T = s.number("T_b");
    parse_bcs_gap(s, "delta_a", a);
    parse_bcs_gap(s, "delta_b", b);
    a.mu = b.mu = s.number("mu", -1.0);
    a.grid_n = b.grid_n = s.integer("grid_n", 64);
    if (a.self_consistent || b.self_consistent) {
        a.v = b.v = s.number("v");
        a.cutoff = b.cutoff = s.number("cutoff");
    }
    s.finish();
    if (!(a.T > 0.0)) throw ConfigError(s.key("T_a"), "temperature must be positive");
    if (!(b.T > 0.0)) throw ConfigError(s.key("T_b"), "temperature must be positive");
    if (a.grid_n < 2) throw ConfigError(s.key("grid_n"), "must be >= 2");
    validate_section(s.key(""), [&] {
        bcs::validate(a);
        bcs::validate(b);
    });
}

std::size_t count_saturated(const Table &t) {
    std::size_t n = 0;
    for (std::size_t c = 0; c < t.columns().size(); ++c) {
        if (t.columns()[c].rfind("lambda_", 0) != 0) continue;
        for (const auto &row : t.rows()) {
            if (row[c] <= kLambdaFloor) ++n;
        }
    }
    return n;
}

}  // namespace

std::string_view model_name(Model m) {
    switch (m) {
    case Model::xx: return "xx";
    case Model::impurity: return "impurity";
    case Model::bcs: return "bcs";
    }
    return "?";
}

std::string_view tool_version() { return FIDSPEC_VERSION; }

ScenarioConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    Section top(root, "");
    ScenarioConfig cfg;
    const std::string model = top.text("model");
    if (model == "xx") {
        cfg.model = Model::xx;
    } else if (model == "impurity") {
        cfg.model = Model::impurity;
    } else if (model == "bcs") {
        cfg.model = Model::bcs;
    } else {
        throw ConfigError("model", "expected xx, impurity or bcs, got \"" + model + "\"");
    }
    if (top.has("output_dir")) cfg.output_dir = top.text("output_dir");
    cfg.moments_max = top.integer("moments_max", 5);
    if (cfg.moments_max < 1 || cfg.moments_max > kMaxMoment) {
        throw ConfigError("moments_max", "must lie in [1, 16]");
    }

    const std::string section_name{model_name(cfg.model)};
    if (!top.has(section_name)) throw ConfigError(section_name, "missing model section");
    Section section(top.raw(section_name), section_name);
    switch (cfg.model) {
    case Model::xx: parse_xx(section, cfg); break;
    case Model::impurity: parse_impurity(section, cfg); break;
    case Model::bcs: parse_bcs(section, cfg); break;
    }
    top.finish();

    json resolved = root;
    resolved["output_dir"] = cfg.output_dir.string();
    resolved["moments_max"] = cfg.moments_max;
    cfg.resolved_json = resolved.dump();
    return cfg;
}

ScenarioConfig load_config(const fs::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("<file>", "cannot read " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

RunReport run_scenario(const ScenarioConfig &config) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, Table>> outputs;
    json meta;
    meta["tool"] = "fidspec";
    meta["version"] = std::string(tool_version());
    meta["model"] = std::string(model_name(config.model));
    meta["config"] = json::parse(config.resolved_json);

    switch (config.model) {
    case Model::xx: {
        static constexpr const char *names[] = {"xx_entanglement_spectrum.csv",
                                                "xx_fidelity_spectrum.csv",
                                                "xx_susceptibility.csv"};
        auto table = xx::xx_sweep(config.xx);
        meta["saturated_log_entries"] = count_saturated(table);
        meta["log_floor"] = kLambdaFloor;
        outputs.emplace_back(names[static_cast<int>(config.xx.kind)], std::move(table));
        break;
    }
    case Model::impurity: {
        const auto &sc = config.impurity;
        meta["gap_field"] = "self-consistent per coupling";
        if (sc.mode == ImpurityScenario::Mode::j_scan) {
            auto result = impurity::impurity_jscan(sc.lattice, sc.jscan);
            json checks = json::array();
            for (const auto &[J, diff] : result.cold_start_checks) {
                checks.push_back({{"J", J}, {"max_abs_delta_difference", diff}});
            }
            meta["cold_start_checks"] = checks;
            outputs.emplace_back("impurity_jscan.csv", std::move(result.table));
        } else {
            outputs.emplace_back("impurity_spatial_map.csv",
                                 impurity::impurity_spatial_map(sc.lattice, sc.spatial));
        }
        break;
    }
    case Model::bcs: {
        auto map = bcs::brillouin_map(config.bcs.a, config.bcs.b);
        meta["gap_a"] = {{"delta", map.gap_a.delta}, {"normal_phase", map.gap_a.normal_phase}};
        meta["gap_b"] = {{"delta", map.gap_b.delta}, {"normal_phase", map.gap_b.normal_phase}};
        meta["log_total_fidelity"] = map.log_fidelity;
        meta["closed_form_comparator"] = {
            {"evaluated_points", map.comparator.evaluated},
            {"max_deviation_sqrt_eta_over_sqrt_D", map.comparator.max_deviation_sqrt},
            {"max_deviation_eta_over_sqrt_D", map.comparator.max_deviation_plain},
            {"max_deviation_spin", map.comparator.max_deviation_spin}};
        outputs.emplace_back("bcs_map.csv", std::move(map.table));
        break;
    }
    }

    RunReport report;
    report.output_dir = config.output_dir;
    fs::create_directories(config.output_dir);
    json files = json::array();
    for (const auto &[name, table] : outputs) {
        emit_csv(table, config.output_dir / name);
        report.files.push_back({name, table.size(), table.columns().size()});
        files.push_back({{"file", name}, {"rows", table.size()}, {"columns", table.columns()}});
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    meta["outputs"] = files;
    meta["wall_time_seconds"] = report.wall_seconds;

    std::ofstream m(config.output_dir / "metadata.json", std::ios::binary | std::ios::trunc);
    m << meta.dump(2) << '\n';
    if (!m) throw std::runtime_error("failed writing metadata.json");
    return report;
}

int run_command(std::string_view model, const fs::path &config_path,
                const std::optional<fs::path> &out_dir, std::ostream &err) {
    ScenarioConfig cfg;
    try {
        cfg = load_config(config_path);
        if (model_name(cfg.model) != model) {
            throw ConfigError("model", "config is for model \"" +
                                           std::string(model_name(cfg.model)) +
                                           "\" but the command was \"" + std::string(model) +
                                           "\"");
        }
        if (out_dir) {
            cfg.output_dir = *out_dir;
            auto resolved = json::parse(cfg.resolved_json);
            resolved["output_dir"] = cfg.output_dir.string();
            cfg.resolved_json = resolved.dump();
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    try {
        run_scenario(cfg);
    } catch (const std::exception &e) {
        err << "computation error: " << e.what() << '\n';
        return kExitComputeError;
    }
    return kExitOk;
}

}  // namespace fidspec
