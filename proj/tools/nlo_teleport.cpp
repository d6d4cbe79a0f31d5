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

// Fidelity sweeps for qudit teleportation with a nonlinear-crystal Bell
// measurement. Exit codes: 0 ok, 2 bad configuration, 3 I/O failure.

#include <exception>
#include <iostream>

#include "nlotele/errors.hpp"
#include "nlotele/sweep.hpp"

int main(int argc, char **argv) {
    using namespace nlotele;

    CliParse cli = parse_cli(argc, argv);
    for (const auto &w : cli.warnings) {
        std::cerr << w << '\n';
    }
    if (cli.should_exit) {
        (cli.exit_code == 0 ? std::cout : std::cerr) << cli.message;
        return cli.exit_code;
    }

    try {
        SweepResult result = run_sweep(cli.config);
        write_output(cli.config, emit(result, cli.config.format));
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        // DimensionError / DomainError raised while validating the inputs.
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
