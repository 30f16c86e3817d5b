/*
 Copyright 2026 The cipw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cipw/table_io.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("cipw_cli_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

int run(const std::string& args, std::string* err = nullptr) {
    const fs::path log = workdir() / "stderr.txt";
    const std::string cmd = std::string(CIPW_CLI) + " " + args + " >" + (workdir() / "stdout.txt").string() + " 2>"
                            + log.string();
    const int status = std::system(cmd.c_str());
    if (err) {
        std::ifstream in(log);
        std::stringstream s;
        s << in.rdbuf();
        *err = s.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(Cli, LearnWritesValidTable) {
    const fs::path cfg = write_config("learn.json", "{}");
    const fs::path out = workdir() / "t.bin";
    ASSERT_EQ(run("learn --config " + cfg.string() + " --resolution 2 --out " + out.string()), 0);
    const cipw::ClassifierTable t = cipw::load_table(out, cipw::ModelParams{});
    EXPECT_EQ(t.labels.size(), 16u);
    EXPECT_EQ(t.grid, cipw::GridSpec::default_box(2));
}

TEST(Cli, MissingTableIsDomainError) {
    const fs::path cfg = write_config("missing.json", R"({"agent1": {"table": "no_such_table.bin"}})");
    std::string err;
    EXPECT_EQ(run("sweep --config " + cfg.string(), &err), 1);
    EXPECT_NE(err.find("no_such_table.bin"), std::string::npos) << err;
}

TEST(Cli, DigestMismatchIsDomainError) {
    const fs::path out = workdir() / "t1.bin";
    ASSERT_EQ(run("learn --resolution 1 --out " + out.string()), 0);
    const fs::path cfg = write_config(
        "mismatch.json", R"({"model": {"rod": {"k_w": 4000}}, "agent1": {"table": "t1.bin"}, "sweep": {"N_Q": 2}})");
    std::string err;
    EXPECT_EQ(run("sweep --config " + cfg.string(), &err), 1);
    EXPECT_NE(err.find("digest"), std::string::npos) << err;
}

TEST(Cli, SimulateIsReproducible) {
    const fs::path cfg = write_config(
        "sim.json", R"({"simulate": {"initial_state": [0, 0, 0.2, 0, 1, 0, 0, 0]}, "simulation": {"t_end": 3}})");
    const fs::path a = workdir() / "a.csv", b = workdir() / "b.csv";
    ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + a.string()), 0);
    ASSERT_EQ(run("simulate --config " + cfg.string() + " --out " + b.string()), 0);
    const std::string ta = slurp(a);
    EXPECT_EQ(ta, slurp(b));
    EXPECT_EQ(ta.substr(0, ta.find('\n')), "t,x1,v1,th1,w1,x2,v2,th2,w2,T1,T2,fired1,fired2");
    EXPECT_EQ(run("simulate --seed-check --config " + cfg.string() + " --out " + a.string()), 0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("wrestle"), 2);
    EXPECT_EQ(run("sweep --jobs zero"), 2);
    EXPECT_EQ(run("learn --resolution 2"), 2);
    EXPECT_EQ(run("sweep --config /no/such/config.json"), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, BadConfigIsDomainError) {
    const fs::path cfg = write_config("bad.json", R"({"sweep": {"N_Q": -3}})");
    EXPECT_EQ(run("validate --config " + cfg.string()), 1);
    const fs::path broken = write_config("broken.json", "{ not json");
    EXPECT_EQ(run("simulate --config " + broken.string()), 1);
}

TEST(Cli, RefusesToOverwriteConfig) {
    const std::string text = R"({"simulation": {"t_end": 1}, "output": "self.json"})";
    const fs::path cfg = write_config("self.json", text);
    std::string err;
    EXPECT_EQ(run("simulate --config " + cfg.string(), &err), 1);
    EXPECT_NE(err.find("config file itself"), std::string::npos) << err;
    EXPECT_EQ(slurp(cfg), text);
}

TEST(Cli, CreatesOutputDirectory) {
    const fs::path cfg = write_config("nested.json", R"({"simulation": {"t_end": 1}, "output": "nested/out/t.csv"})");
    ASSERT_EQ(run("simulate --config " + cfg.string()), 0);
    EXPECT_TRUE(fs::exists(workdir() / "nested" / "out" / "t.csv"));
}
