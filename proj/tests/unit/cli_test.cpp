#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

class BenchCli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mslru-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(MSLRU_BENCH_EXE) + " " + args + " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Value of column `name` in the first data row.
  std::string field(const std::string& csv, const std::string& name) const {
    std::istringstream lines(csv);
    std::string header, row, cell;
    std::getline(lines, header);
    std::getline(lines, row);
    std::vector<std::string> names, cols;
    for (std::istringstream s(header); std::getline(s, cell, ',');) names.push_back(cell);
    for (std::istringstream s(row); std::getline(s, cell, ',');) cols.push_back(cell);
    for (std::size_t i = 0; i < names.size() && i < cols.size(); ++i) {
      if (names[i] == name) return cols[i];
    }
    return {};
  }

  fs::path dir_;
};

TEST_F(BenchCli, WritesCsv) {
  ASSERT_EQ(run("--policy multistep --capacity 1024 --records 5000 --ops 20000 --out " + path("out.csv")), 0);
  const auto csv = read("out.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "policy,dist,alpha,records,ops,sets,m,p,capacity,threads,init,touch_bytes,seed,hits,misses,hit_ratio,"
            "hit_ratio_defined,location_hits,wall_time_s,throughput_ops_s");
  EXPECT_EQ(field(csv, "sets"), "128");
  EXPECT_EQ(field(csv, "ops"), "20000");
}

TEST_F(BenchCli, SetsFlagDerivesCapacity) {
  ASSERT_EQ(run("--policy multistep --sets 16 --m 4 --p 8 --records 5000 --ops 1000 --out " + path("o.csv")), 0);
  EXPECT_EQ(field(read("o.csv"), "capacity"), "512");
}

TEST_F(BenchCli, ConfigErrorsExitNonZero) {
  EXPECT_NE(run("--policy arc --capacity 1024 --threads 2 --ops 100"), 0);
  EXPECT_NE(run("--policy multistep --capacity 100 --ops 100"), 0);
  EXPECT_NE(run("--policy multistep --capacity 1024 --m 3 --ops 100"), 0);
  EXPECT_NE(run("--policy fifo --capacity 1024"), 0);
  EXPECT_NE(run("--policy lru"), 0);
  EXPECT_NE(run("--policy lru --capacity 64 --replay-trace " + path("missing.bin")), 0);
  EXPECT_NE(read("stderr").size(), 0u);
}

TEST_F(BenchCli, RecordThenReplay) {
  for (const std::string ext : {".bin", ".txt"}) {
    const std::string common = " --policy multistep --capacity 512 --records 3000 --ops 30000 --dist scan";
    ASSERT_EQ(run(common + " --record-trace " + path("t" + ext) + " --out " + path("a.csv")), 0);
    ASSERT_EQ(run(common + " --replay-trace " + path("t" + ext) + " --out " + path("b.csv")), 0);
    const auto a = read("a.csv"), b = read("b.csv");
    EXPECT_EQ(field(a, "hits"), field(b, "hits"));
    EXPECT_EQ(field(a, "misses"), field(b, "misses"));
    EXPECT_EQ(field(b, "ops"), "30000");
  }
}

TEST_F(BenchCli, JsonAndBreakdown) {
  ASSERT_EQ(run("--policy arc --capacity 256 --records 2000 --ops 5000 --format json --breakdown --out " +
                path("r.json")),
            0);
  const auto j = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(j[0]["policy"], "arc");
  EXPECT_NE(read("stderr").find("hits by location"), std::string::npos);
}

TEST_F(BenchCli, WarmupCurveTable) {
  ASSERT_EQ(run("--policy lru --capacity 256 --records 2000 --ops 20000 --init random --warmup-curve --out " +
                path("w.csv")),
            0);
  const auto csv = read("w.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "policy,m,capacity,init,ops_processed,cumulative_hit_ratio,interval_hit_ratio");
  EXPECT_EQ(field(csv, "init"), "random");
}

TEST_F(BenchCli, SweepEmitsOneRowPerPoint) {
  ASSERT_EQ(run("--policy gclock --capacity 256 --records 2000 --ops 5000 --sweep-axis cache_size --sweep-points "
                "256,512,1024 --out " + path("s.csv")),
            0);
  const auto csv = read("s.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

}  // namespace
