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

#include "qpg/report.h"

#include <charconv>
#include <fstream>

#include "qpg/error.h"

namespace qpg {

using nlohmann::json;

json to_json(Complex c) {
    return json::array({c.real(), c.imag()});
}

json to_json(const QubitRegister &reg) {
    json out = json::array();
    for (const auto &c : reg.amplitudes()) {
        out.push_back(to_json(c));
    }
    return out;
}

json to_json(const DualRailState &state) {
    json amps = json::array();
    for (const auto &c : state.amplitudes()) {
        amps.push_back(to_json(c));
    }
    return {{"qubits", state.num_qubits()}, {"amplitudes", std::move(amps)}};
}

json to_json(const KerrParams &p) {
    return {
        {"omega1_rad_s", p.omega1}, {"omega2_rad_s", p.omega2}, {"t_s", p.t},
        {"eps_ratio", p.eps_ratio}, {"chi_eff", p.chi_eff},
    };
}

json to_json(const GatePhases &g) {
    return {{"alpha_rad", g.alpha}, {"beta_rad", g.beta}, {"gamma_rad", g.gamma}};
}

json to_json(const LossModel &lm) {
    return {
        {"survive_h", lm.survive_h},
        {"survive_v", lm.survive_v},
        {"jitter_sigma_rad", lm.jitter_sigma},
        {"detector_efficiency", lm.detector_efficiency},
    };
}

json to_json(const TrialStats &stats) {
    json hist = json::object();
    for (std::size_t k = 0; k < stats.histogram.size(); k++) {
        hist[basis_label(k, stats.num_qubits)] = stats.histogram[k];
    }
    return {
        {"trials", stats.trials},
        {"accepted", stats.accepted},
        {"acceptance_rate", stats.acceptance_rate},
        {"qubits", stats.num_qubits},
        {"conditional_outcome_histogram", std::move(hist)},
        {"rng_seed", stats.rng_seed},
    };
}

QubitRegister register_from_json(const json &j) {
    if (!j.is_array()) {
        throw Error(ErrorCode::ConfigValidation, "amplitudes must be an array of [re, im] pairs");
    }
    std::vector<Complex> amps;
    for (const auto &pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw Error(ErrorCode::ConfigValidation, "each amplitude must be a [re, im] pair of numbers");
        }
        amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return QubitRegister(std::move(amps));
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw Error(ErrorCode::IoFailure, "could not format number");
    }
    return std::string(buf, end);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    append(header);
}

CsvWriter &CsvWriter::row(const std::vector<std::string> &fields) {
    if (fields.size() != columns_) {
        throw Error(ErrorCode::DimensionMismatch, "CSV row width does not match the header");
    }
    append(fields);
    return *this;
}

std::string CsvWriter::str() const {
    return text_;
}

void CsvWriter::append(const std::vector<std::string> &fields) {
    for (std::size_t k = 0; k < fields.size(); k++) {
        if (k) {
            text_ += ',';
        }
        const std::string &f = fields[k];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            text_ += f;
            continue;
        }
        text_ += '"';
        for (char ch : f) {
            if (ch == '"') {
                text_ += '"';
            }
            text_ += ch;
        }
        text_ += '"';
    }
    text_ += "\r\n";
}

std::vector<std::string> trial_stats_csv_header(std::size_t num_qubits) {
    std::vector<std::string> header = {"scenario_id", "seed", "trials", "accepted", "acceptance_rate"};
    for (std::size_t k = 0; k < (std::size_t{1} << num_qubits); k++) {
        header.push_back("count_" + basis_label(k, num_qubits));
    }
    return header;
}

std::vector<std::string> trial_stats_csv_row(std::string_view scenario_id, const TrialStats &stats) {
    std::vector<std::string> row = {
        std::string(scenario_id),
        std::to_string(stats.rng_seed),
        std::to_string(stats.trials),
        std::to_string(stats.accepted),
        format_double(stats.acceptance_rate),
    };
    for (auto count : stats.histogram) {
        row.push_back(std::to_string(count));
    }
    return row;
}

void write_text_file(const std::filesystem::path &path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorCode::IoFailure, path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, path.string() + ": cannot open for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(ErrorCode::IoFailure, path.string() + ": write failed");
    }
}

}  // namespace qpg
