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

// JSON and CSV serialization for states, gates and Monte Carlo statistics.
// Complex numbers are [re, im] pairs; arrays follow the basis order of
// state.h.

#ifndef QPG_REPORT_H
#define QPG_REPORT_H

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qpg/kerr_gate.h"
#include "qpg/loss.h"
#include "qpg/state.h"

namespace qpg {

inline constexpr std::string_view kToolVersion = "qpg 1.0.0";

nlohmann::json to_json(Complex c);
nlohmann::json to_json(const QubitRegister &reg);
nlohmann::json to_json(const DualRailState &state);
nlohmann::json to_json(const KerrParams &p);
nlohmann::json to_json(const GatePhases &g);
nlohmann::json to_json(const LossModel &lm);
nlohmann::json to_json(const TrialStats &stats);

QubitRegister register_from_json(const nlohmann::json &j);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// RFC 4180 CSV: CRLF line endings, fields quoted when they contain a comma,
/// quote or line break.
class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter &row(const std::vector<std::string> &fields);
    std::string str() const;

   private:
    void append(const std::vector<std::string> &fields);

    std::size_t columns_;
    std::string text_;
};

/// Header and row for one TrialStats record.
std::vector<std::string> trial_stats_csv_header(std::size_t num_qubits);
std::vector<std::string> trial_stats_csv_row(std::string_view scenario_id, const TrialStats &stats);

/// Writes `contents` to `path`, creating parent directories. IoFailure on error.
void write_text_file(const std::filesystem::path &path, std::string_view contents);

}  // namespace qpg

#endif  // QPG_REPORT_H
