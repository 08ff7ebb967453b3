/*
 * SPDX-FileCopyrightText: Copyright 2026 The aliaslab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aliaslab/cli.hpp"
#include "aliaslab/trace_set.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace aliaslab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "aliaslab");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("aliaslab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const std::string& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_F(Cli, GenIsDeterministic)
{
    const auto a = run({"gen", "--cipher", "aes-ct", "--traces", "500", "--seed", "9", "--out", path("a.mjt")});
    const auto b = run({"gen", "--cipher", "aes-ct", "--traces", "500", "--seed", "9", "--out", path("b.mjt")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(b.code, kExitOk) << b.err;
    EXPECT_EQ(slurp(path("a.mjt")), slurp(path("b.mjt")));
    EXPECT_NE(a.out.find("digest"), std::string::npos);
    const auto c = run({"gen", "--cipher", "aes-ct", "--traces", "500", "--seed", "10", "--out", path("c.mjt")});
    EXPECT_NE(slurp(path("a.mjt")), slurp(path("c.mjt")));
    EXPECT_EQ(load_traceset(path("a.mjt")).size(), 500u);
}

TEST_F(Cli, CsvExport)
{
    const auto r = run({"gen", "--cipher", "sm4-cn", "--traces", "20", "--out", path("s.mjt"), "--csv", path("s.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ifstream in(path("s.csv"));
    EXPECT_EQ(read_traceset_csv(in), load_traceset(path("s.mjt")).records);
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "aes-ct"}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "des", "--out", path("x")}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "aes-ct", "--bogus", "--out", path("x")}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "aes-ct", "--key", "abc", "--out", path("x")}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "aes-ct", "--jam-word", "64", "--out", path("x")}).code, kExitUsage);
    EXPECT_EQ(run({"gen", "--cipher", "aes-ct", "--contamination", "2", "--out", path("x")}).code, kExitUsage);
    EXPECT_FALSE(fs::exists(path("x")));
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(Cli, TruncatedInputIsRuntimeError)
{
    ASSERT_EQ(run({"gen", "--cipher", "aes-ct", "--traces", "100", "--out", path("t.mjt")}).code, kExitOk);
    const auto full = slurp(path("t.mjt"));
    {
        std::ofstream o(path("t.mjt"), std::ios::binary | std::ios::trunc);
        o << full.substr(0, full.size() - 5);
    }
    const auto r = run({"attack-aes", "--in", path("t.mjt"), "--out", path("rank.csv")});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(path("rank.csv")));
    EXPECT_EQ(run({"attack-aes", "--in", path("missing.mjt")}).code, kExitRuntime);
}

TEST_F(Cli, AesPipeline)
{
    const std::string key = "2b7e151628aed2a6abf7158809cf4f3c";
    ASSERT_EQ(run({"gen", "--cipher", "aes-ct", "--traces", "100000", "--seed", "3", "--noise-sigma", "5", "--key",
                   key, "--out", path("aes.mjt")})
                  .code,
              kExitOk);
    const auto r = run({"attack-aes", "--in", path("aes.mjt"), "--key", key, "--checkpoints", "1000,100000", "--out",
                        path("rank.csv"), "--history", path("hist.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("recovered 16/16"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("master key " + key), std::string::npos) << r.out;
    EXPECT_EQ(slurp(path("rank.csv")).rfind("byte_index,", 0), 0u);
    EXPECT_NE(slurp(path("hist.csv")).find("\n100000,"), std::string::npos);

    const auto h = run({"rank-history", "--in", path("aes.mjt"), "--key", key, "--checkpoints", "500,5000,100000",
                        "--out", path("h2.csv")});
    ASSERT_EQ(h.code, kExitOk) << h.err;
    EXPECT_NE(h.out.find("n 100000 rank-1 16/16"), std::string::npos) << h.out;
}

TEST_F(Cli, Sm4Pipeline)
{
    const std::string key = "0123456789abcdeffedcba9876543210";
    ASSERT_EQ(run({"gen", "--cipher", "sm4-cn", "--traces", "3000", "--seed", "7", "--synthetic", "--key", key,
                   "--out", path("sm4.mjt")})
                  .code,
              kExitOk);
    const auto r = run({"attack-sm4", "--in", path("sm4.mjt"), "--traces", "3000", "--out", path("r32.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("master key " + key), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(path("r32.csv")));
}

TEST_F(Cli, Sm4FailureIsReported)
{
    ASSERT_EQ(run({"gen", "--cipher", "sm4-cn", "--traces", "2000", "--word-penalty", "0", "--line-penalty", "0",
                   "--out", path("flat.mjt")})
                  .code,
              kExitOk);
    const auto r = run({"attack-sm4", "--in", path("flat.mjt"), "--traces", "2000", "--beam", "2"});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.err.find("SM4 key recovery failed"), std::string::npos);
}

TEST_F(Cli, ScanWarnsOnFlatProfile)
{
    const auto ok = run({"scan", "--cipher", "aes-ct", "--traces", "200", "--out", path("scan.csv")});
    ASSERT_EQ(ok.code, kExitOk) << ok.err;
    EXPECT_TRUE(ok.err.empty());
    EXPECT_EQ(slurp(path("scan.csv")).rfind("jam_word,mean_cycles\n", 0), 0u);
    const auto flat = run({"scan", "--cipher", "aes-ct", "--traces", "200", "--word-penalty", "0", "--line-penalty",
                           "0", "--noise-sigma", "0"});
    EXPECT_EQ(flat.code, kExitOk);
    EXPECT_NE(flat.err.find("flat profile"), std::string::npos);
}

#if !defined(ALIASLAB_HAVE_PROBE)
TEST_F(Cli, ProbeUnavailableWithoutBuildOption)
{
    const auto r = run({"probe", "--mode", "RaW"});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.err.find("probe unavailable"), std::string::npos);
}
#endif
