#include "delegate/io.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kCli = DELEGATE_CLI_PATH;
const std::string kData = DELEGATE_DATA_DIR;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return {-1, ""};
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string value_of(const std::string& text) { return delegate::json::parse(text).at("value").get<std::string>(); }

}  // namespace

TEST(Cli, PipedSingleBad) {
    auto r = run(kCli + " gen single-bad --n 2 | " + kCli + " solve-det --k 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(value_of(r.out), "1/2");
}

TEST(Cli, RandomizedDiag2) {
    auto r = run(kCli + " solve-rand -i " + kData + "/diag2.json");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(value_of(r.out), "1");
}

TEST(Cli, BelowFloorMenuFailsVerification) {
    auto r = run(kCli + " verify -i " + kData + "/cost_gap.json -m " + kData + "/below_floor_menu.json");
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run(kCli).code, 1);
    EXPECT_EQ(run(kCli + " solve-det -i " + kData + "/diag2.json").code, 1);
    EXPECT_EQ(run(kCli + " gen nonsense").code, 1);
    EXPECT_EQ(run(kCli + " solve-cont --family toy --delta 2").code, 1);
    EXPECT_EQ(run(kCli + " solve-det --k 1 -i " + kData + "/missing.json").code, 1);
}

TEST(Cli, SizeGuard) {
    EXPECT_EQ(run(kCli + " gen single-bad --n 5 | " + kCli + " oracle --k 5").code, 3);
}

TEST(Cli, RoundTripsOnEveryFamily) {
    const std::string gens[] = {"single-bad --n 3", "randomized-gap --n 4", "random --n 3 --m 2 --l 3 --seed 4",
                                "hardness --n 2 --graph path"};
    for (const auto& g : gens) {
        const std::string base = kCli + " gen " + g + " | ";
        EXPECT_EQ(run(base + kCli + " solve-det --k 2 | " + kCli + " verify").code, 0) << g;
        EXPECT_EQ(run(base + kCli + " solve-det --k 2 --direct | " + kCli + " verify").code, 0) << g;
        EXPECT_EQ(run(base + kCli + " solve-rand | " + kCli + " verify").code, 0) << g;
    }
    EXPECT_EQ(run(kCli + " gen random --n 3 --m 3 --l 3 --seed 9 | " + kCli + " solve-det --k 3 | " + kCli +
                  " robustify --delta 1/100 | " + kCli + " verify")
                  .code,
              0);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
    const std::string base = kCli + " gen random --n 3 --m 3 --l 3 --seed 21 | " + kCli + " solve-det --k 3";
    auto one = run(base + " --threads 1");
    auto four = run(base + " --threads 4");
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
}

TEST(Cli, SameSeedSameInstance) {
    auto a = run(kCli + " gen random --n 2 --m 3 --l 2 --seed 5");
    auto b = run(kCli + " gen random --n 2 --m 3 --l 2 --seed 5");
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CompareTable) {
    auto r = run(kCli + " compare -i " + kData + "/diag2.json");
    ASSERT_EQ(r.code, 0);
    auto doc = delegate::json::parse(r.out);
    EXPECT_EQ(doc["deterministic"][0]["value"], "1/2");
    EXPECT_EQ(doc["deterministic"][1]["value"], "1");
    EXPECT_EQ(doc["randomized"], "1");
}

TEST(Cli, ContinuousFamilies) {
    auto r = run(kCli + " solve-cont --family toy --delta 1/16");
    ASSERT_EQ(r.code, 0);
    auto doc = delegate::json::parse(r.out);
    EXPECT_EQ(doc["program_value"], "9/16");
    auto t = run(kCli + " solve-cont --family " + kData + "/toy_family.json --delta 1/16");
    ASSERT_EQ(t.code, 0);
    EXPECT_EQ(delegate::json::parse(t.out)["value"], doc["value"]);
}
