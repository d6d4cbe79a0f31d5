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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlotele/errors.hpp"
#include "nlotele/sweep.hpp"

namespace nlotele {
namespace {

namespace fs = std::filesystem;

CliParse parse(std::vector<std::string> args) {
    std::vector<const char *> argv{"nlo_teleport"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return parse_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    return fs::temp_directory_path() / ("nlotele_" + name);
}

int run_cli(const std::string &args, const fs::path &stdout_path) {
    std::string cmd = std::string(NLOTELE_CLI_PATH) + " " + args + " > " + stdout_path.string() + " 2> " +
                      stdout_path.string() + ".err";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(PGrid, InclusiveRange) {
    auto g = parse_p_grid("0:1:0.1");
    ASSERT_EQ(g.size(), 11u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_NEAR(g[3], 0.3, 1e-15);
    EXPECT_EQ(parse_p_grid("0:0:1"), std::vector<double>{0.0});
    EXPECT_EQ(parse_p_grid("0.25:0.75:0.25").size(), 3u);
}

TEST(PGrid, Rejects) {
    EXPECT_THROW(parse_p_grid("0:1"), ConfigError);
    EXPECT_THROW(parse_p_grid("0:1:0.3"), ConfigError);  // does not divide
    EXPECT_THROW(parse_p_grid("0:1:0"), ConfigError);
    EXPECT_THROW(parse_p_grid("0:1:-0.1"), ConfigError);
    EXPECT_THROW(parse_p_grid("0:1.5:0.5"), ConfigError);
    EXPECT_THROW(parse_p_grid("0.5:0.2:0.1"), ConfigError);
    EXPECT_THROW(parse_p_grid("a:1:0.1"), ConfigError);
}

TEST(Dims, ParsesAndRejects) {
    EXPECT_EQ(parse_dims("2,3,4,5"), (std::vector<std::size_t>{2, 3, 4, 5}));
    EXPECT_THROW(parse_dims("1"), ConfigError);
    EXPECT_THROW(parse_dims("2,,3"), ConfigError);
    EXPECT_THROW(parse_dims("two"), ConfigError);
}

TEST(InputSpecParse, Forms) {
    EXPECT_EQ(parse_input_spec("uniform").kind, InputSpec::Kind::Uniform);
    auto r = parse_input_spec("random:10:42");
    EXPECT_EQ(r.kind, InputSpec::Kind::Random);
    EXPECT_EQ(r.count, 10u);
    EXPECT_EQ(r.base_seed, 42u);
    EXPECT_EQ(r.describe(), "random:10:42");
    auto f = parse_input_spec("file:/tmp/x.txt");
    EXPECT_EQ(f.path, "/tmp/x.txt");
    EXPECT_THROW(parse_input_spec("random:0:1"), ConfigError);
    EXPECT_THROW(parse_input_spec("random:3"), ConfigError);
    EXPECT_THROW(parse_input_spec("file:"), ConfigError);
    EXPECT_THROW(parse_input_spec("gaussian"), ConfigError);
}

TEST(Cli, Defaults) {
    auto cli = parse({});
    ASSERT_FALSE(cli.should_exit);
    const auto &c = cli.config;
    EXPECT_EQ(c.dims, (std::vector<std::size_t>{2, 3, 4, 5, 8}));
    EXPECT_EQ(c.p_grid.size(), 11u);
    EXPECT_EQ(c.input.kind, InputSpec::Kind::Uniform);
    EXPECT_EQ(c.variant, CrosstalkVariant::Weyl);
    EXPECT_EQ(c.mode, ProductMode::Independent);
    EXPECT_EQ(c.targets, NoiseTargets::A1A2);
    EXPECT_EQ(c.correction, CorrectionScheme::DerivedExact);
    EXPECT_EQ(c.format, OutputFormat::Csv);
    EXPECT_FALSE(c.out_path.has_value());
    EXPECT_FALSE(c.eta.has_value());
    EXPECT_TRUE(cli.warnings.empty());
}

TEST(Cli, SinglePoint) {
    auto cli = parse({"--dims", "2", "--p-grid", "0:0:1", "--input", "uniform"});
    ASSERT_FALSE(cli.should_exit);
    EXPECT_EQ(cli.config.dims, std::vector<std::size_t>{2});
    EXPECT_EQ(cli.config.p_grid, std::vector<double>{0.0});
}

TEST(Cli, AllFlags) {
    auto cli = parse({"--dims", "3,4", "--p-grid", "0:0.5:0.25", "--input", "random:4:9", "--noise", "phase",
                      "--noise-mode", "correlated", "--noise-targets", "a2", "--correction", "paper-weyl", "--eta",
                      "1.5e-8", "--out", "/tmp/o.json", "--format", "json", "--timing"});
    ASSERT_FALSE(cli.should_exit) << cli.message;
    const auto &c = cli.config;
    EXPECT_EQ(c.dims, (std::vector<std::size_t>{3, 4}));
    EXPECT_EQ(c.p_grid.size(), 3u);
    EXPECT_EQ(c.input.count, 4u);
    EXPECT_EQ(c.variant, CrosstalkVariant::Phase);
    EXPECT_EQ(c.mode, ProductMode::Correlated);
    EXPECT_EQ(c.targets, NoiseTargets::A2);
    EXPECT_EQ(c.correction, CorrectionScheme::PaperWeyl);
    EXPECT_DOUBLE_EQ(*c.eta, 1.5e-8);
    EXPECT_EQ(*c.out_path, "/tmp/o.json");
    EXPECT_EQ(c.format, OutputFormat::Json);
    EXPECT_TRUE(c.timing);
}

TEST(Cli, LargeDimensionWarns) {
    auto cli = parse({"--dims", "64"});
    ASSERT_FALSE(cli.should_exit);
    ASSERT_EQ(cli.warnings.size(), 1u);
    EXPECT_NE(cli.warnings[0].find("d=64"), std::string::npos);
}

TEST(Cli, MalformedFlagsExitTwo) {
    for (auto args : std::vector<std::vector<std::string>>{{"--bogus"},
                                                           {"--dims", "1"},
                                                           {"--p-grid", "0:1:0.3"},
                                                           {"--noise", "bitflip"},
                                                           {"--noise-mode", "both"},
                                                           {"--noise-targets", "b"},
                                                           {"--correction", "none"},
                                                           {"--format", "xml"},
                                                           {"--eta", "2"},
                                                           {"--eta", "abc"},
                                                           {"extra"}}) {
        auto cli = parse(args);
        EXPECT_TRUE(cli.should_exit) << args[0];
        EXPECT_EQ(cli.exit_code, 2) << args[0];
        EXPECT_FALSE(cli.message.empty());
    }
}

TEST(Cli, HelpExitsZero) {
    auto cli = parse({"--help"});
    EXPECT_TRUE(cli.should_exit);
    EXPECT_EQ(cli.exit_code, 0);
    EXPECT_NE(cli.message.find("--p-grid"), std::string::npos);
}

TEST(Cli, ConfigFileWithOverrides) {
    auto path = scratch("config.json");
    {
        std::ofstream out(path);
        out << R"({"dims":[3],"noise":{"variant":"shift","p":0.4,"mode":"correlated","targets":"a2"},)"
            << R"("correction":"paper-weyl","eta":0.5,"format":"json"})";
    }
    auto cli = parse({"--config", path.string()});
    ASSERT_FALSE(cli.should_exit) << cli.message;
    EXPECT_EQ(cli.config.dims, std::vector<std::size_t>{3});
    EXPECT_EQ(cli.config.p_grid, std::vector<double>{0.4});
    EXPECT_EQ(cli.config.variant, CrosstalkVariant::Shift);
    EXPECT_EQ(cli.config.mode, ProductMode::Correlated);
    EXPECT_EQ(cli.config.targets, NoiseTargets::A2);
    EXPECT_EQ(cli.config.correction, CorrectionScheme::PaperWeyl);
    EXPECT_EQ(cli.config.format, OutputFormat::Json);

    auto overridden = parse({"--config", path.string(), "--dims", "2,5", "--format", "csv", "--noise", "weyl"});
    ASSERT_FALSE(overridden.should_exit);
    EXPECT_EQ(overridden.config.dims, (std::vector<std::size_t>{2, 5}));
    EXPECT_EQ(overridden.config.format, OutputFormat::Csv);
    EXPECT_EQ(overridden.config.variant, CrosstalkVariant::Weyl);
    EXPECT_EQ(overridden.config.mode, ProductMode::Correlated);
    fs::remove(path);
}

TEST(Cli, ConfigFileErrors) {
    auto missing = parse({"--config", scratch("does_not_exist.json").string()});
    EXPECT_EQ(missing.exit_code, 3);

    auto path = scratch("bad_config.json");
    {
        std::ofstream out(path);
        out << R"({"dims":[2],"colour":"blue"})";
    }
    EXPECT_EQ(parse({"--config", path.string()}).exit_code, 2);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    EXPECT_EQ(parse({"--config", path.string()}).exit_code, 2);
    fs::remove(path);
}

TEST(RunSweep, SinglePointIntercept) {
    SweepConfig c;
    c.dims = {2};
    c.p_grid = {0.0};
    auto r = run_sweep(c);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_NEAR(r.rows[0].avg_fidelity, 1.0, 1e-10);
    EXPECT_EQ(r.rows[0].expected_trigger_probability, 1.0);
    EXPECT_EQ(r.rows[0].runtime_ms, 0.0);
    EXPECT_FALSE(r.rows[0].seed.has_value());
}

TEST(RunSweep, InterceptForEveryInput) {
    SweepConfig c;
    c.dims = {2, 3, 4, 5};
    c.p_grid = {0.0};
    c.input = parse_input_spec("random:5:11");
    auto r = run_sweep(c);
    ASSERT_EQ(r.rows.size(), 20u);
    for (const auto &row : r.rows) {
        EXPECT_NEAR(row.avg_fidelity, 1.0, 1e-10);
    }
}

TEST(RunSweep, WeylMonotoneAndOrdered) {
    SweepConfig c;
    c.dims = {2, 3, 4, 5};
    auto means = mean_by_point(run_sweep(c));
    ASSERT_EQ(means.size(), 44u);
    for (std::size_t k = 0; k < means.size(); k++) {
        if (k % 11 != 0) {
            EXPECT_LE(means[k].mean_avg_fidelity, means[k - 1].mean_avg_fidelity);
        }
        if (k >= 11 && means[k].p > 0) {
            EXPECT_LE(means[k].mean_avg_fidelity, means[k - 11].mean_avg_fidelity);
        }
    }
}

TEST(RunSweep, ShiftTransparencyThroughSweep) {
    SweepConfig c;
    c.dims = {2, 3, 4};
    c.variant = CrosstalkVariant::Shift;
    for (const auto &row : run_sweep(c).rows) {
        EXPECT_NEAR(row.avg_fidelity, 1.0, 1e-10);
    }
}

TEST(RunSweep, RowOrderAndRandomInstances) {
    SweepConfig c;
    c.dims = {3, 2};
    c.p_grid = {0.5, 0.0};
    c.input = parse_input_spec("random:3:100");
    auto r = run_sweep(c);
    ASSERT_EQ(r.rows.size(), 12u);
    EXPECT_EQ(r.rows[0].d, 2u);
    EXPECT_EQ(r.rows[0].p, 0.0);
    EXPECT_EQ(*r.rows[0].seed, 100u);
    EXPECT_EQ(*r.rows[2].seed, 102u);
    EXPECT_EQ(r.rows[3].p, 0.5);
    EXPECT_EQ(r.rows[11].d, 3u);
    auto means = mean_by_point(r);
    ASSERT_EQ(means.size(), 4u);
    EXPECT_EQ(means[1].instances, 3u);
    double manual = (r.rows[3].avg_fidelity + r.rows[4].avg_fidelity + r.rows[5].avg_fidelity) / 3;
    EXPECT_NEAR(means[1].mean_avg_fidelity, manual, 1e-15);
}

TEST(RunSweep, EtaIsReportedOnly) {
    SweepConfig c;
    c.dims = {2};
    c.p_grid = {0.3};
    auto plain = run_sweep(c);
    c.eta = 1.5e-8;
    auto with_eta = run_sweep(c);
    EXPECT_EQ(with_eta.rows[0].expected_trigger_probability, 1.5e-8);
    EXPECT_EQ(with_eta.rows[0].avg_fidelity, plain.rows[0].avg_fidelity);
}

TEST(RunSweep, FileInputFixesDimension) {
    auto path = scratch("state3.txt");
    {
        std::ofstream out(path);
        out << "3\n1 0\n0 1\n0.5 0\n";
    }
    SweepConfig c;
    c.dims = {3};
    c.p_grid = {0.0, 0.2};
    c.input = parse_input_spec("file:" + path.string());
    auto r = run_sweep(c);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_NEAR(r.rows[0].avg_fidelity, 1.0, 1e-10);
    c.dims = {2, 3};
    EXPECT_THROW(run_sweep(c), ConfigError);
    fs::remove(path);
    c.dims = {3};
    EXPECT_THROW(run_sweep(c), IoError);
}

TEST(RunSweep, RejectsInvalidConfig) {
    SweepConfig c;
    c.dims = {1};
    EXPECT_THROW(run_sweep(c), ConfigError);
    c.dims = {2};
    c.p_grid = {1.5};
    EXPECT_THROW(run_sweep(c), ConfigError);
    c.p_grid = {0.5};
    c.convention = CrystalConvention::QutritListing;
    EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Emit, HeaderOnlyForEmptyResult) {
    EXPECT_EQ(emit_csv({}), std::string(kCsvHeader) + "\n");
    EXPECT_EQ(emit_json({}), "[]\n");
}

TEST(Emit, CsvFormatting) {
    SweepResult r;
    SweepRow row;
    row.d = 3;
    row.p = 0.1;
    row.noise_variant = "weyl";
    row.noise_mode = "independent";
    row.correction_scheme = "derived-exact";
    row.input_spec = "random:2:5";
    row.seed = 6;
    row.avg_fidelity = 2.0 / 3.0;
    row.min_outcome_fidelity = 0.5;
    row.expected_trigger_probability = 1.5e-8;
    r.rows.push_back(row);
    std::string csv = emit_csv(r);
    EXPECT_EQ(csv, std::string(kCsvHeader) +
                       "\n3,0.1,weyl,independent,derived-exact,random:2:5,6,0.666666666667,0.5,0,1.5e-08\n");
}

TEST(Emit, JsonRoundTrip) {
    SweepConfig c;
    c.dims = {3};
    c.p_grid = {0.3};
    c.input = parse_input_spec("random:1:77");
    auto r = run_sweep(c);
    auto back = parse_json_result(emit_json(r));
    ASSERT_EQ(back.rows.size(), 1u);
    EXPECT_EQ(back.rows[0].avg_fidelity, r.rows[0].avg_fidelity);
    EXPECT_EQ(back.rows[0].min_outcome_fidelity, r.rows[0].min_outcome_fidelity);
    EXPECT_EQ(back.rows[0].seed, r.rows[0].seed);
    EXPECT_EQ(back.rows[0].p, r.rows[0].p);
    EXPECT_EQ(back.rows[0].input_spec, r.rows[0].input_spec);
    EXPECT_EQ(emit_csv(back), emit_csv(r));

    SweepConfig u;
    u.dims = {2};
    u.p_grid = {0.0};
    auto j = nlohmann::json::parse(emit_json(run_sweep(u)));
    EXPECT_TRUE(j[0].at("seed").is_null());
}

TEST(Golden, NoiselessSweepIsByteStable) {
    SweepConfig c;
    c.dims = {2, 3, 4, 5};
    c.p_grid = {0.0};
    std::string golden = slurp(fs::path(NLOTELE_GOLDEN_DIR) / "p0_dims2-5.csv");
    ASSERT_FALSE(golden.empty());
    EXPECT_EQ(emit_csv(run_sweep(c)), golden);
    EXPECT_EQ(emit_csv(run_sweep(c)), golden);
}

TEST(Executable, WritesFileAndExitCodes) {
    auto out = scratch("cli_out.csv");
    auto log = scratch("cli_stdout.txt");
    EXPECT_EQ(run_cli("--dims 2,3,4,5 --p-grid 0:0:1 --out " + out.string(), log), 0);
    EXPECT_EQ(slurp(out), slurp(fs::path(NLOTELE_GOLDEN_DIR) / "p0_dims2-5.csv"));

    EXPECT_EQ(run_cli("--dims 2 --p-grid 0:0:1", log), 0);
    EXPECT_EQ(slurp(log).rfind(std::string(kCsvHeader), 0), 0u);

    EXPECT_EQ(run_cli("--no-such-flag", log), 2);
    EXPECT_EQ(run_cli("--dims 2 --p-grid 0:0:1 --out /nonexistent_dir/x.csv", log), 3);
    EXPECT_EQ(run_cli("--dims 3 --p-grid 0:0:1 --input file:/nonexistent_state.txt", log), 3);
    EXPECT_EQ(run_cli("--help", log), 0);
    fs::remove(out);
    fs::remove(log);
    fs::remove(log.string() + ".err");
}

}  // namespace
}  // namespace nlotele
