// Copyright 2026 The nlotele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlotele/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "nlotele/errors.hpp"

namespace nlotele {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double parse_double(std::string_view text, std::string_view what) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a number");
    }
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a non-negative integer");
    }
    return value;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string InputSpec::describe() const {
    switch (kind) {
        case Kind::Uniform:
            return "uniform";
        case Kind::Random:
            return "random:" + std::to_string(count) + ":" + std::to_string(base_seed);
        case Kind::File:
            return "file:" + path;
    }
    return "?";
}

InputSpec parse_input_spec(std::string_view text) {
    InputSpec spec;
    if (text == "uniform") {
        return spec;
    }
    if (text.starts_with("file:")) {
        spec.kind = InputSpec::Kind::File;
        spec.path = std::string(text.substr(5));
        if (spec.path.empty()) {
            throw ConfigError("--input file: needs a path");
        }
        return spec;
    }
    if (text.starts_with("random:")) {
        auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw ConfigError("--input random expects random:N:SEED");
        }
        spec.kind = InputSpec::Kind::Random;
        spec.count = parse_u64(parts[1], "--input random count");
        spec.base_seed = parse_u64(parts[2], "--input random seed");
        if (spec.count == 0) {
            throw ConfigError("--input random count must be positive");
        }
        return spec;
    }
    throw ConfigError("--input: expected uniform, random:N:SEED or file:PATH, got '" + std::string(text) + "'");
}

NoiseTargets parse_noise_targets(std::string_view text) {
    if (text == "a1,a2") {
        return NoiseTargets::A1A2;
    }
    if (text == "a2") {
        return NoiseTargets::A2;
    }
    throw ConfigError("--noise-targets: expected a1,a2 or a2, got '" + std::string(text) + "'");
}

std::string_view to_string(NoiseTargets targets) {
    return targets == NoiseTargets::A1A2 ? "a1,a2" : "a2";
}

SweepConfig::SweepConfig() : p_grid(parse_p_grid("0:1:0.1")) {
}

std::vector<double> parse_p_grid(std::string_view text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw ConfigError("--p-grid expects start:end:step");
    }
    double start = parse_double(parts[0], "--p-grid start");
    double end = parse_double(parts[1], "--p-grid end");
    double step = parse_double(parts[2], "--p-grid step");
    if (start < 0.0 || end > 1.0 || start > end) {
        throw ConfigError("--p-grid: need 0 <= start <= end <= 1");
    }
    if (start == end) {
        return {start};
    }
    if (!(step > 0.0)) {
        throw ConfigError("--p-grid: step must be positive");
    }
    double intervals = (end - start) / step;
    double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-9) {
        throw ConfigError("--p-grid: step does not divide the range");
    }
    auto n = static_cast<std::size_t>(rounded);
    std::vector<double> grid(n + 1);
    for (std::size_t k = 0; k <= n; k++) {
        grid[k] = start + (end - start) * static_cast<double>(k) / static_cast<double>(n);
    }
    grid.back() = end;
    return grid;
}

std::vector<std::size_t> parse_dims(std::string_view text) {
    std::vector<std::size_t> dims;
    for (auto part : split(text, ',')) {
        auto d = parse_u64(part, "--dims");
        if (d < 2) {
            throw ConfigError("--dims: every dimension must be at least 2");
        }
        dims.push_back(static_cast<std::size_t>(d));
    }
    return dims;
}

std::vector<PointMean> mean_by_point(const SweepResult &result) {
    std::vector<PointMean> out;
    for (const auto &row : result.rows) {
        if (out.empty() || out.back().d != row.d || out.back().p != row.p) {
            out.push_back({row.d, row.p, 0, 0});
        }
        out.back().mean_avg_fidelity += row.avg_fidelity;
        out.back().instances++;
    }
    for (auto &pt : out) {
        pt.mean_avg_fidelity /= static_cast<double>(pt.instances);
    }
    return out;
}

SweepResult run_sweep(const SweepConfig &config) {
    std::vector<std::size_t> dims = config.dims;
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
    std::vector<double> grid = config.p_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    if (dims.empty() || grid.empty()) {
        throw ConfigError("sweep: dims and p-grid must be non-empty");
    }
    for (auto d : dims) {
        if (d < 2) {
            throw ConfigError("sweep: dimensions must be at least 2");
        }
        if (config.convention == CrystalConvention::QutritListing && d != 3) {
            throw ConfigError("sweep: the qutrit-listing convention only exists for d = 3");
        }
    }
    for (auto p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("sweep: p values must lie in [0, 1]");
        }
    }
    if (config.eta && !(*config.eta >= 0.0 && *config.eta <= 1.0)) {
        throw ConfigError("sweep: eta must lie in [0, 1]");
    }

    std::optional<PureState> file_state;
    if (config.input.kind == InputSpec::Kind::File) {
        file_state = load_state_file(config.input.path);
        for (auto d : dims) {
            if (d != file_state->dim()) {
                throw ConfigError("sweep: input file has dimension " + std::to_string(file_state->dim()) +
                                  " but --dims includes " + std::to_string(d));
            }
        }
    }
    if (config.input.kind == InputSpec::Kind::Random && config.input.count == 0) {
        throw ConfigError("sweep: random input needs a positive instance count");
    }
    const std::size_t instances = config.input.kind == InputSpec::Kind::Random ? config.input.count : 1;

    struct Task {
        std::size_t d;
        double p;
        std::optional<std::uint64_t> seed;
    };
    std::vector<Task> tasks;
    for (auto d : dims) {
        for (auto p : grid) {
            for (std::size_t k = 0; k < instances; k++) {
                std::optional<std::uint64_t> seed;
                if (config.input.kind == InputSpec::Kind::Random) {
                    seed = config.input.base_seed + k;
                }
                tasks.push_back({d, p, seed});
            }
        }
    }

    SweepResult result;
    result.rows.resize(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    const auto n_tasks = static_cast<long long>(tasks.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (long long t = 0; t < n_tasks; t++) {
        const auto &task = tasks[static_cast<std::size_t>(t)];
        try {
            ProtocolConfig pc;
            pc.d = task.d;
            if (task.seed) {
                pc.input = random_pure_state(task.d, *task.seed);
            } else if (file_state) {
                pc.input = *file_state;
            } else {
                pc.input = uniform_state(task.d);
            }
            pc.convention = config.convention;
            pc.correction = config.correction;
            ChannelDescriptor channel{config.variant, task.p};
            if (config.targets == NoiseTargets::A1A2) {
                pc.noise.a1 = channel;
            }
            pc.noise.a2 = channel;
            pc.noise.mode = config.mode;

            auto started = std::chrono::steady_clock::now();
            ProtocolResult pr = run_protocol(pc);
            auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);

            SweepRow &row = result.rows[static_cast<std::size_t>(t)];
            row.d = task.d;
            row.p = task.p;
            row.noise_variant = std::string(to_string(config.variant));
            row.noise_mode = std::string(to_string(config.mode));
            row.correction_scheme = std::string(to_string(config.correction));
            row.input_spec = config.input.describe();
            row.seed = task.seed;
            row.avg_fidelity = pr.average_fidelity;
            row.min_outcome_fidelity = pr.min_outcome_fidelity;
            row.runtime_ms = config.timing ? elapsed.count() : 0.0;
            row.expected_trigger_probability = config.eta.value_or(1.0);
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return result;
}

std::string emit_csv(const SweepResult &result) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto &row : result.rows) {
        out += std::to_string(row.d);
        out += ',' + format_number(row.p);
        out += ',' + csv_field(row.noise_variant);
        out += ',' + csv_field(row.noise_mode);
        out += ',' + csv_field(row.correction_scheme);
        out += ',' + csv_field(row.input_spec);
        out += ',' + (row.seed ? std::to_string(*row.seed) : std::string());
        out += ',' + format_number(row.avg_fidelity);
        out += ',' + format_number(row.min_outcome_fidelity);
        out += ',' + format_number(row.runtime_ms);
        out += ',' + format_number(row.expected_trigger_probability);
        out += '\n';
    }
    return out;
}

std::string emit_json(const SweepResult &result) {
    auto arr = nlohmann::json::array();
    for (const auto &row : result.rows) {
        arr.push_back({
            {"d", row.d},
            {"p", row.p},
            {"noise_variant", row.noise_variant},
            {"noise_mode", row.noise_mode},
            {"correction_scheme", row.correction_scheme},
            {"input_spec", row.input_spec},
            {"seed", row.seed ? nlohmann::json(*row.seed) : nlohmann::json()},
            {"avg_fidelity", row.avg_fidelity},
            {"min_outcome_fidelity", row.min_outcome_fidelity},
            {"runtime_ms", row.runtime_ms},
            {"expected_trigger_probability", row.expected_trigger_probability},
        });
    }
    return arr.dump(2) + "\n";
}

std::string emit(const SweepResult &result, OutputFormat format) {
    return format == OutputFormat::Csv ? emit_csv(result) : emit_json(result);
}

SweepResult parse_json_result(std::string_view text) {
    SweepResult result;
    auto arr = nlohmann::json::parse(text);
    for (const auto &j : arr) {
        SweepRow row;
        row.d = j.at("d").get<std::size_t>();
        row.p = j.at("p").get<double>();
        row.noise_variant = j.at("noise_variant").get<std::string>();
        row.noise_mode = j.at("noise_mode").get<std::string>();
        row.correction_scheme = j.at("correction_scheme").get<std::string>();
        row.input_spec = j.at("input_spec").get<std::string>();
        if (!j.at("seed").is_null()) {
            row.seed = j.at("seed").get<std::uint64_t>();
        }
        row.avg_fidelity = j.at("avg_fidelity").get<double>();
        row.min_outcome_fidelity = j.at("min_outcome_fidelity").get<double>();
        row.runtime_ms = j.at("runtime_ms").get<double>();
        row.expected_trigger_probability = j.at("expected_trigger_probability").get<double>();
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_output(const SweepConfig &config, std::string_view payload) {
    if (!config.out_path) {
        std::cout << payload;
        std::cout.flush();
        if (!std::cout) {
            throw IoError("failed writing to stdout");
        }
        return;
    }
    std::ofstream out(*config.out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open output file " + *config.out_path);
    }
    out << payload;
    out.close();
    if (!out) {
        throw IoError("failed writing output file " + *config.out_path);
    }
}

namespace {

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") {
        return OutputFormat::Csv;
    }
    if (text == "json") {
        return OutputFormat::Json;
    }
    throw ConfigError("--format: expected csv or json, got '" + std::string(text) + "'");
}

const std::string &require_string(const nlohmann::json &j, const std::string &key) {
    if (!j.is_string()) {
        throw ConfigError("config: '" + key + "' must be a string");
    }
    return j.get_ref<const std::string &>();
}

}  // namespace

void apply_config_json(SweepConfig &config, const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("config: top level must be a JSON object");
    }
    bool grid_given = j.contains("p_grid");
    for (const auto &[key, value] : j.items()) {
        if (key == "dims") {
            if (value.is_string()) {
                config.dims = parse_dims(value.get<std::string>());
            } else if (value.is_array()) {
                config.dims.clear();
                for (const auto &d : value) {
                    if (!d.is_number_integer() || d.get<long long>() < 2) {
                        throw ConfigError("config: dims entries must be integers >= 2");
                    }
                    config.dims.push_back(d.get<std::size_t>());
                }
            } else {
                throw ConfigError("config: 'dims' must be an array or a comma list");
            }
        } else if (key == "p_grid") {
            if (value.is_string()) {
                config.p_grid = parse_p_grid(value.get<std::string>());
            } else if (value.is_array()) {
                config.p_grid.clear();
                for (const auto &p : value) {
                    if (!p.is_number() || p.get<double>() < 0.0 || p.get<double>() > 1.0) {
                        throw ConfigError("config: p_grid entries must be numbers in [0, 1]");
                    }
                    config.p_grid.push_back(p.get<double>());
                }
            } else {
                throw ConfigError("config: 'p_grid' must be 'start:end:step' or an array");
            }
        } else if (key == "input") {
            config.input = parse_input_spec(require_string(value, key));
        } else if (key == "noise") {
            nlohmann::json descriptor = value;
            if (descriptor.is_object() && descriptor.contains("targets")) {
                config.targets = parse_noise_targets(require_string(descriptor["targets"], "noise.targets"));
                descriptor.erase("targets");
            }
            auto parsed = parse_channel_descriptor(descriptor);
            config.variant = parsed.channel.variant;
            if (descriptor.contains("mode")) {
                config.mode = parsed.mode;
            }
            if (descriptor.contains("p") && !grid_given) {
                config.p_grid = {parsed.channel.p};
            }
        } else if (key == "noise_mode") {
            config.mode = parse_product_mode(require_string(value, key));
        } else if (key == "noise_targets") {
            config.targets = parse_noise_targets(require_string(value, key));
        } else if (key == "correction") {
            config.correction = parse_correction_scheme(require_string(value, key));
        } else if (key == "convention") {
            config.convention = parse_crystal_convention(require_string(value, key));
        } else if (key == "eta") {
            if (value.is_null()) {
                config.eta.reset();
            } else if (value.is_number()) {
                config.eta = value.get<double>();
            } else {
                throw ConfigError("config: 'eta' must be a number");
            }
        } else if (key == "out") {
            config.out_path = require_string(value, key);
        } else if (key == "format") {
            config.format = parse_format(require_string(value, key));
        } else if (key == "timing") {
            if (!value.is_boolean()) {
                throw ConfigError("config: 'timing' must be a boolean");
            }
            config.timing = value.get<bool>();
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
}

CliParse parse_cli(int argc, const char *const *argv) {
    CliParse result;
    CLI::App app{"Exact simulator for nonlinear-optics qudit teleportation: fidelity sweeps under crosstalk noise"};
    app.set_version_flag("--version", "nlo_teleport 1.0");

    std::string dims, grid, input, noise, noise_mode, noise_targets, correction, convention, out, format, config_path;
    double eta = 0;
    bool timing = false;
    app.add_option("--dims", dims, "Comma-separated dimensions (default 2,3,4,5,8)");
    app.add_option("--p-grid", grid, "Inclusive crosstalk grid start:end:step (default 0:1:0.1)");
    app.add_option("--input", input, "uniform | random:N:SEED | file:PATH (default uniform)");
    app.add_option("--noise", noise, "Crosstalk variant shift | phase | weyl (default weyl)");
    app.add_option("--noise-mode", noise_mode, "independent | correlated (default independent)");
    app.add_option("--noise-targets", noise_targets, "a1,a2 | a2 (default a1,a2)");
    app.add_option("--correction", correction, "paper-weyl | derived-exact (default derived-exact)");
    app.add_option("--convention", convention, "Crystal convention general | qutrit-listing (default general)");
    app.add_option("--eta", eta, "SFG efficiency, reported as expected_trigger_probability");
    app.add_option("--out", out, "Output path (default stdout)");
    app.add_option("--format", format, "csv | json (default csv)");
    app.add_option("--config", config_path, "JSON file with SweepConfig fields; flags override it");
    app.add_flag("--timing", timing, "Fill runtime_ms (output is then no longer byte-stable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        result.should_exit = true;
        result.exit_code = 0;
        result.message = app.help();
        return result;
    } catch (const CLI::CallForVersion &) {
        result.should_exit = true;
        result.exit_code = 0;
        result.message = "nlo_teleport 1.0\n";
        return result;
    } catch (const CLI::ParseError &e) {
        result.should_exit = true;
        result.exit_code = 2;
        result.message = std::string("error: ") + e.what() + "\n";
        return result;
    }

    try {
        SweepConfig config;
        if (app.count("--config")) {
            std::ifstream in(config_path);
            if (!in) {
                throw IoError("cannot open config file " + config_path);
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error &e) {
                throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
            }
            apply_config_json(config, j);
        }
        if (app.count("--dims")) {
            config.dims = parse_dims(dims);
        }
        if (app.count("--p-grid")) {
            config.p_grid = parse_p_grid(grid);
        }
        if (app.count("--input")) {
            config.input = parse_input_spec(input);
        }
        if (app.count("--noise")) {
            config.variant = parse_crosstalk_variant(noise);
        }
        if (app.count("--noise-mode")) {
            config.mode = parse_product_mode(noise_mode);
        }
        if (app.count("--noise-targets")) {
            config.targets = parse_noise_targets(noise_targets);
        }
        if (app.count("--correction")) {
            config.correction = parse_correction_scheme(correction);
        }
        if (app.count("--convention")) {
            config.convention = parse_crystal_convention(convention);
        }
        if (app.count("--eta")) {
            if (!(eta >= 0.0 && eta <= 1.0)) {
                throw ConfigError("--eta must lie in [0, 1]");
            }
            config.eta = eta;
        }
        if (app.count("--out")) {
            config.out_path = out;
        }
        if (app.count("--format")) {
            config.format = parse_format(format);
        }
        if (timing) {
            config.timing = true;
        }
        for (auto d : config.dims) {
            if (d >= 16) {
                result.warnings.push_back("warning: d=" + std::to_string(d) +
                                          " is simulated by exact enumeration; runtime and memory grow steeply "
                                          "with d (minutes to hours)");
            }
        }
        result.config = std::move(config);
    } catch (const IoError &e) {
        result.should_exit = true;
        result.exit_code = 3;
        result.message = std::string("error: ") + e.what() + "\n";
    } catch (const ConfigError &e) {
        result.should_exit = true;
        result.exit_code = 2;
        result.message = std::string("error: ") + e.what() + "\n";
    }
    return result;
}

}  // namespace nlotele
