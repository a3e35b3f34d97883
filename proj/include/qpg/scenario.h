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

// Scenario files and the experiment runner behind the `qpg` command.
//
// A scenario file is JSON with // and /* */ comments allowed. The schema is
// documented in README.md; physical inputs use SI with unit-suffixed field
// names (omega1_rad_s, t_s, volume_m3, ...).

#ifndef QPG_SCENARIO_H
#define QPG_SCENARIO_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpg/error.h"
#include "qpg/kerr_gate.h"
#include "qpg/loss.h"
#include "qpg/optics.h"
#include "qpg/state.h"

namespace qpg {

enum class ScenarioKind { GateMatrix, UniversalityScan, CnotDemo, LossScan, JitterScan, OracleCheck, RunCircuit };

std::string_view kind_name(ScenarioKind kind);
std::span<const ScenarioKind> all_kinds();

enum class SweepVariable { InteractionTime, ConditionalPhase };

struct Scenario {
    std::string id;
    ScenarioKind kind = ScenarioKind::GateMatrix;
    std::string output_stem;

    std::optional<KerrParams> kerr;
    /// Set when the coupling was given as chi3_si + volume_m3.
    std::optional<MediumSpec> medium;
    std::map<std::string, KerrParams> kerr_sets;

    std::optional<Circuit> circuit;
    std::optional<QubitRegister> input;
    std::optional<LossModel> loss;

    SweepVariable sweep_variable = SweepVariable::InteractionTime;
    std::vector<double> sweep_values;

    std::vector<double> survive_values;
    std::vector<std::size_t> pass_counts;
    std::vector<std::size_t> qubit_counts;

    std::vector<double> sigma_values;

    std::size_t oracle_draws = 100;

    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;

    /// Optional assertions; a miss is an invariant failure (exit 3).
    std::optional<bool> expect_universal;        // gate-matrix
    std::optional<double> min_acceptance_rate;  // run-circuit
};

struct ScenarioFile {
    std::string source;
    std::vector<Scenario> scenarios;
};

/// ConfigParse on malformed JSON, ConfigValidation on schema violations; both
/// messages start with "<source>: <field path>".
ScenarioFile parse_scenario_text(std::string_view text, std::string_view source);
/// As above, reading from disk (IoFailure if unreadable).
ScenarioFile load_scenario_file(const std::filesystem::path &path);

struct RunOptions {
    std::filesystem::path out_dir = "reports";
    std::optional<std::uint64_t> seed_override;
    bool parallel = false;
};

struct ScenarioResult {
    std::string id;
    /// One line for stdout.
    std::string summary;
    std::vector<std::filesystem::path> files;
};

/// Runs one scenario and writes its reports under out_dir/<id>/. Throws
/// InvariantFailure when a verification built into the kind fails (after the
/// reports are written), IoFailure on write errors.
ScenarioResult run_scenario(const Scenario &s, const RunOptions &options);

/// Exit code for a library error: 2 config, 3 invariant, 4 I/O.
int exit_code_for(ErrorCode code);

}  // namespace qpg

#endif  // QPG_SCENARIO_H
