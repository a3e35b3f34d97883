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

// Drives the built `qpg` executable and checks exit codes and stdout.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"

namespace {

struct Invocation {
    int status;
    std::string out;
};

Invocation qpg(const std::string &args) {
    std::string cmd = std::string(QPG_BINARY) + " " + args + " 2>/dev/null";
    Invocation r{-1, ""};
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[512];
    while (std::fgets(buf, sizeof(buf), pipe)) {
        r.out += buf;
    }
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("qpg_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write(const std::filesystem::path &dir, const std::string &name, const std::string &text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

const char *kGate = R"({"id": "g", "kind": "gate-matrix",
    "kerr": {"omega1_rad_s": 1, "omega2_rad_s": 2, "t_s": 0.5, "chi_eff": 0.4}})";

}  // namespace

TEST(cli, list_kinds) {
    Invocation r = qpg("list-kinds");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "gate-matrix\nuniversality-scan\ncnot-demo\nloss-scan\njitter-scan\noracle-check\nrun-circuit\n");
}

TEST(cli, validate) {
    auto dir = scratch("validate");
    Invocation r = qpg("validate " + write(dir, "ok.json", kGate).string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "g [gate-matrix] valid\n");

    r = qpg("validate " + write(dir, "bad.json", R"({"id": "g", "kind": "gate-matrix"})").string());
    EXPECT_EQ(r.status, 2);

    r = qpg("validate " + write(dir, "broken.json", "{ nope").string());
    EXPECT_EQ(r.status, 2);

    r = qpg("validate " + (dir / "missing.json").string());
    EXPECT_EQ(r.status, 4);
}

TEST(cli, run_writes_reports) {
    auto dir = scratch("run");
    auto file = write(dir, "s.json", kGate);
    Invocation r = qpg("run " + file.string() + " --out " + (dir / "out").string());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("g [gate-matrix] ok: ", 0), 0u) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "g" / "g.json"));
}

TEST(cli, invariant_failure_exits_3) {
    auto dir = scratch("invariant");
    auto file = write(dir, "s.json", R"({"scenarios": [
        {"id": "a", "kind": "gate-matrix", "expect_universal": true,
         "kerr": {"omega1_rad_s": 1, "omega2_rad_s": 2, "t_s": 0}},
        {"id": "b", "kind": "oracle-check", "draws": 5, "seed": 1}]})");
    Invocation r = qpg("run " + file.string() + " --out " + (dir / "out").string());
    EXPECT_EQ(r.status, 3);
    EXPECT_NE(r.out.find("a [gate-matrix] FAILED"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("b [oracle-check] ok"), std::string::npos) << r.out;
}

TEST(cli, unwritable_output_exits_4) {
    auto dir = scratch("io");
    auto file = write(dir, "s.json", kGate);
    write(dir, "blocker", "not a directory");
    Invocation r = qpg("run " + file.string() + " --out " + (dir / "blocker").string());
    EXPECT_EQ(r.status, 4);
}

TEST(cli, usage_errors_exit_2) {
    EXPECT_EQ(qpg("").status, 2);
    EXPECT_EQ(qpg("frobnicate").status, 2);
    EXPECT_EQ(qpg("run").status, 2);
    EXPECT_EQ(qpg("run x.json --seed notanumber").status, 2);
    EXPECT_EQ(qpg("--help").status, 0);
}

TEST(cli, seed_override_and_parallel_agree) {
    auto dir = scratch("seed");
    auto file = write(dir, "s.json", R"({"id": "l", "kind": "loss-scan", "survive": [0.9], "passes": [2],
        "trials": 5000, "seed": 1})");
    EXPECT_EQ(qpg("run " + file.string() + " --seed 99 --out " + (dir / "a").string()).status, 0);
    EXPECT_EQ(qpg("run " + file.string() + " --seed 99 --parallel --out " + (dir / "b").string()).status, 0);
    std::ifstream a(dir / "a" / "l" / "l.csv");
    std::ifstream b(dir / "b" / "l" / "l.csv");
    std::string ta((std::istreambuf_iterator<char>(a)), {});
    std::string tb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, tb);
}
