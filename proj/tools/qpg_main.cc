// Copyright 2026 The qpg Authors
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qpg/error.h"
#include "qpg/report.h"
#include "qpg/scenario.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

int cmd_run(const std::string &file, const std::string &out_dir, std::optional<std::uint64_t> seed, bool parallel) {
    qpg::ScenarioFile sf = qpg::load_scenario_file(file);
    qpg::RunOptions options{out_dir, seed, parallel};
    int status = 0;
    for (const auto &s : sf.scenarios) {
        try {
            qpg::ScenarioResult r = qpg::run_scenario(s, options);
            std::cout << r.id << " [" << qpg::kind_name(s.kind) << "] ok: " << r.summary << "\n";
        } catch (const qpg::Error &e) {
            if (e.code() != qpg::ErrorCode::InvariantFailure) {
                throw;
            }
            std::cout << s.id << " [" << qpg::kind_name(s.kind) << "] FAILED\n";
            std::cerr << "qpg: " << e.what() << "\n";
            status = kExitInvariant;
        }
    }
    return status;
}

int cmd_validate(const std::string &file) {
    qpg::ScenarioFile sf = qpg::load_scenario_file(file);
    for (const auto &s : sf.scenarios) {
        std::cout << s.id << " [" << qpg::kind_name(s.kind) << "] valid\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cross-Kerr quantum phase gate simulator", "qpg"};
    app.set_version_flag("--version", std::string(qpg::kToolVersion));
    app.require_subcommand(1);

    std::string file;
    std::string out_dir = "reports";
    std::optional<std::uint64_t> seed;
    bool parallel = false;

    auto *run = app.add_subcommand("run", "Run every scenario in a file and write reports");
    run->add_option("scenario-file", file, "Scenario file (JSON, comments allowed)")->required();
    run->add_option("--out", out_dir, "Report directory; each scenario writes to DIR/<id>/")->capture_default_str();
    run->add_option("--seed", seed, "Override the seed of every scenario");
    run->add_flag("--parallel", parallel, "Spread Monte Carlo trials over all hardware threads");

    auto *validate = app.add_subcommand("validate", "Parse and check a scenario file without running it");
    validate->add_option("scenario-file", file, "Scenario file")->required();

    auto *list = app.add_subcommand("list-kinds", "Print the scenario kinds this build understands");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(file, out_dir, seed, parallel);
        }
        if (validate->parsed()) {
            return cmd_validate(file);
        }
        if (list->parsed()) {
            for (auto kind : qpg::all_kinds()) {
                std::cout << qpg::kind_name(kind) << "\n";
            }
            return 0;
        }
    } catch (const qpg::Error &e) {
        std::cerr << "qpg: " << e.what() << "\n";
        return qpg::exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "qpg: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitConfig;
}
