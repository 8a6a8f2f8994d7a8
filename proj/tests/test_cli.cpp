#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CNSELMER_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, Analyze) {
  auto r = run("analyze 57");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "ISKRA"));
  EXPECT_TRUE(contains(r.out, "NON_CONGRUENT"));
  r = run("analyze 6 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["family"], "HEEGNER");
  EXPECT_EQ(j["verdict"], "CONGRUENT");
  EXPECT_TRUE(contains(run("analyze 12").out, "not squarefree"));
}

TEST(Cli, AnalyzeErrors) {
  EXPECT_EQ(run("analyze 0").code, 2);
  EXPECT_EQ(run("analyze abc").code, 2);
  EXPECT_EQ(run("analyze 12x").code, 2);
  EXPECT_EQ(run("analyze -5").code, 2);
  EXPECT_EQ(run("--limit 100 analyze 1000").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, Census) {
  auto r = run("census selmer --x 1000000 --k 2 --class 3 --json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["ratios"]["trivial"].get<double>(), 0.5, 0.02);
  r = run("census pik --x 1000000 --mod 4 --counts 1,1 --json");
  ASSERT_EQ(r.code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["buckets"]["a=(1,1)"].get<int>(), 0);
  EXPECT_TRUE(j["theory"].contains("main_term:a=(1,1)"));
  EXPECT_EQ(j["target"], "a=(1,1)");
  r = run("census selmer --x 10 --k 99");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "warning: empty class"));
  r = run("census graphs --x 10000 --k 2 --csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "section,key,value"));
}

TEST(Cli, InconsistentFlags) {
  EXPECT_EQ(run("census pik --x 1000 --mod 4 --counts 1,1,1").code, 2);
  EXPECT_EQ(run("census selmer --x 1000 --counts 1,1").code, 2);
  EXPECT_EQ(run("census selmer --k 2").code, 2);
  EXPECT_EQ(run("census symbols --x 1000 --k 2 --residues 1,2").code, 2);
  EXPECT_EQ(run("census symbols --x 1000 --k 2 --residues 1,1,1").code, 2);
  EXPECT_EQ(run("--limit 1000 census selmer --x 5000 --k 2").code, 2);
  EXPECT_EQ(run("census selmer --x 1000 --k 2 --class 4").code, 2);
  EXPECT_EQ(run("census selmer --x 1000 --json --csv").code, 2);
}

TEST(Cli, CensusIdenticalAcrossThreads) {
  const auto one = run("--threads 1 census bsd --x 300000 --k 2 --json");
  const auto four = run("--threads 4 census bsd --x 300000 --k 2 --json");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  const auto text1 = run("census symbols --x 300000 --k 3 --residues 1,1,1 --threads 1");
  const auto text3 = run("census symbols --x 300000 --k 3 --residues 1,1,1 --threads 3");
  EXPECT_EQ(text1.out, text3.out);
  EXPECT_EQ(run("census symbols --x 300000 --residues 1,1,1 --threads 1").out, text1.out);
}

TEST(Cli, Simulate) {
  auto r = run("simulate --k 4 --exact");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "28"));
  r = run("simulate --k 3 --exact --rowsum 2 --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["exact"], "1/2");
  const auto a = run("simulate --k 10 --trials 200000 --seed 7");
  const auto b = run("--threads 4 simulate --k 10 --trials 200000 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("simulate --k 10 --trials 200000 --seed 8").out);
  EXPECT_EQ(run("simulate --k 4").code, 2);
  EXPECT_EQ(run("simulate --k 4 --exact --trials 10").code, 2);
  EXPECT_EQ(run("simulate --k 9 --exact").code, 2);
  EXPECT_EQ(run("simulate --k 3 --exact --rowsum 5").code, 2);
}

TEST(Cli, Constants) {
  auto r = run("constants --k-max 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "7/16"));
  r = run("constants");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "lambda = 0.419422441795"));
  EXPECT_TRUE(contains(r.out, "c2_printed"));
  EXPECT_TRUE(contains(r.out, "c2_derived"));
  r = run("constants --json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["d_r"].size(), 7u);
  EXPECT_EQ(j["by_k"][3]["q"], "7/16");
  EXPECT_EQ(run("constants --bogus").code, 2);
  EXPECT_EQ(run("constants --k-max 0").code, 2);
}

TEST(Cli, SieveCacheFile) {
  const auto path = (std::filesystem::temp_directory_path() / "cnselmer_cli_cache.sfsv").string();
  std::filesystem::remove(path);
  auto r = run("--cache " + path + " analyze 1241");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(path));
  const auto again = run("--cache " + path + " analyze 1241");
  EXPECT_EQ(again.out, r.out);
  EXPECT_EQ(run("--cache " + path + " --limit 5000 sieve").code, 0);
  EXPECT_EQ(std::filesystem::file_size(path), 13u + 4u * 4999u);
  // A corrupt cache is rebuilt.
  std::filesystem::resize_file(path, 20);
  EXPECT_EQ(run("--cache " + path + " analyze 1241").out, r.out);
  EXPECT_EQ(run("--no-cache --cache " + path + " analyze 51").code, 0);
  std::filesystem::remove(path);
  EXPECT_EQ(run("sieve --limit 100").code, 2);
}

TEST(Cli, OutFile) {
  const auto path = (std::filesystem::temp_directory_path() / "cnselmer_cli_out.json").string();
  auto r = run("analyze 10 --json --out " + path);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  EXPECT_EQ(run("analyze 10 --out /nonexistent/dir/x.json").code, 3);
}
