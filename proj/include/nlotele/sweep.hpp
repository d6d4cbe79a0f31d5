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

#ifndef NLOTELE_SWEEP_HPP
#define NLOTELE_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlotele/teleportation.hpp"

namespace nlotele {

struct InputSpec {
    enum class Kind { Uniform, Random, File };
    Kind kind = Kind::Uniform;
    std::size_t count = 0;        // Random
    std::uint64_t base_seed = 0;  // Random; instance k uses base_seed + k
    std::string path;             // File

    std::string describe() const;
};

/// "uniform", "random:N:SEED" or "file:PATH".
InputSpec parse_input_spec(std::string_view text);

enum class NoiseTargets { A1A2, A2 };
NoiseTargets parse_noise_targets(std::string_view text);
std::string_view to_string(NoiseTargets targets);

enum class OutputFormat { Csv, Json };

struct SweepConfig {
    std::vector<std::size_t> dims{2, 3, 4, 5, 8};
    std::vector<double> p_grid;  // parse_p_grid("0:1:0.1") by default
    InputSpec input;
    CrosstalkVariant variant = CrosstalkVariant::Weyl;
    ProductMode mode = ProductMode::Independent;
    NoiseTargets targets = NoiseTargets::A1A2;
    CorrectionScheme correction = CorrectionScheme::DerivedExact;
    CrystalConvention convention = CrystalConvention::General;
    std::optional<double> eta;  // SFG efficiency; reported, never applied
    std::optional<std::string> out_path;
    OutputFormat format = OutputFormat::Csv;
    bool timing = false;  // fill runtime_ms; off keeps output byte-stable

    SweepConfig();
};

/// Inclusive "start:end:step". The step must divide the range to 1e-9 and
/// every value must lie in [0, 1].
std::vector<double> parse_p_grid(std::string_view text);
std::vector<std::size_t> parse_dims(std::string_view text);

struct SweepRow {
    std::size_t d = 0;
    double p = 0;
    std::string noise_variant;
    std::string noise_mode;
    std::string correction_scheme;
    std::string input_spec;
    std::optional<std::uint64_t> seed;
    double avg_fidelity = 0;
    double min_outcome_fidelity = 0;
    double runtime_ms = 0;
    double expected_trigger_probability = 1;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // d ascending, then p, then seed
};

/// Mean avg_fidelity per (d, p), for Random inputs with several instances.
struct PointMean {
    std::size_t d = 0;
    double p = 0;
    double mean_avg_fidelity = 0;
    std::size_t instances = 0;
};
std::vector<PointMean> mean_by_point(const SweepResult &result);

/// Validates `config` (ConfigError) and evaluates every grid point. Points run
/// in parallel; rows come back in deterministic order.
SweepResult run_sweep(const SweepConfig &config);

inline constexpr std::string_view kCsvHeader =
    "d,p,noise_variant,noise_mode,correction_scheme,input_spec,seed,avg_fidelity,min_outcome_fidelity,runtime_ms,"
    "expected_trigger_probability";

std::string emit_csv(const SweepResult &result);
std::string emit_json(const SweepResult &result);
std::string emit(const SweepResult &result, OutputFormat format);
SweepResult parse_json_result(std::string_view text);

/// Writes to config.out_path, or stdout when unset. IoError on failure.
void write_output(const SweepConfig &config, std::string_view payload);

/// Applies a JSON config object (mirroring SweepConfig fields) onto `config`.
void apply_config_json(SweepConfig &config, const nlohmann::json &j);

struct CliParse {
    SweepConfig config;
    int exit_code = 0;        // meaningful when should_exit
    bool should_exit = false; // --help, or a parse error already reported
    std::string message;      // help text or error
    std::vector<std::string> warnings;
};

/// Flags: --dims --p-grid --input --noise --noise-mode --noise-targets
/// --correction --eta --out --format --config --timing. Errors yield
/// exit_code 2 (config) or 3 (unreadable --config file).
CliParse parse_cli(int argc, const char *const *argv);

}  // namespace nlotele

#endif
