// Runs the built command-line binary end to end.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = TWOCLASS_CLI_PATH;
const fs::path kFixtures = TWOCLASS_FIXTURE_DIR;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("twoclass_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Exit status of the CLI with stdout and stderr captured to files.
  int run(const std::string& args) {
    const std::string cmd = "'" + kCli + "' " + args + " >'" + (dir_ / "stdout").string() +
                            "' 2>'" + (dir_ / "stderr").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout"); }
  std::string err() const { return slurp(dir_ / "stderr"); }
  std::string path(const std::string& name) const { return "'" + (dir_ / name).string() + "'"; }
  static std::string fixture(const std::string& name) {
    return "'" + (kFixtures / name).string() + "'";
  }
  std::string data_args() const {
    return fixture("sample_microdata.csv") + " --schema " + fixture("sample_schema.cfg");
  }

  fs::path dir_;
};

TEST_F(Cli, SampleIsByteIdenticalForSameSeed) {
  ASSERT_EQ(run("sample --t 1655 --alpha 2.181 --ml 5000 --n 5000 --seed 7 --out " + path("a.csv")), 0)
      << err();
  ASSERT_EQ(run("sample --t 1655 --alpha 2.181 --ml 5000 --n 5000 --seed 7 --out " + path("b.csv")), 0);
  ASSERT_EQ(run("sample --t 1655 --alpha 2.181 --ml 5000 --n 5000 --seed 8 --out " + path("c.csv")), 0);
  const std::string a = slurp(dir_ / "a.csv");
  EXPECT_EQ(a, slurp(dir_ / "b.csv"));
  EXPECT_NE(a, slurp(dir_ / "c.csv"));
  EXPECT_EQ(a.rfind("# seed=7 t=1655 alpha=2.181 ml=5000 n=5000\nincome\n", 0), 0u) << a.substr(0, 60);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5002);
}

TEST_F(Cli, FitReportsSeedAndParameters) {
  ASSERT_EQ(run("fit " + data_args() + " --seed 3 --rejects " + path("rejects.csv")), 0) << err();
  const auto j = nlohmann::json::parse(out());
  EXPECT_EQ(out().rfind("{\n  \"seed\": 3", 0), 0u);
  EXPECT_EQ(j["group"], "ALL");
  const double alpha = j["fit"]["pareto_index"]["value"];
  EXPECT_GT(alpha, 1.5);
  EXPECT_LT(alpha, 3.0);
  EXPECT_GT(j["fit"]["pareto_index"]["std_error"].get<double>(), 0.0);
  const std::string rejects = slurp(dir_ / "rejects.csv");
  EXPECT_EQ(rejects.rfind("row,reason\n", 0), 0u);
  EXPECT_NE(rejects.find("\n15,"), std::string::npos) << rejects;
  EXPECT_NE(rejects.find("\n16,"), std::string::npos) << rejects;
  EXPECT_NE(err().find("retained"), std::string::npos);
}

TEST_F(Cli, FitIsDeterministic) {
  ASSERT_EQ(run("fit " + data_args() + " --group WOMAN --seed 5 --out " + path("a.json")), 0) << err();
  ASSERT_EQ(run("fit " + data_args() + " --group WOMAN --seed 5 --out " + path("b.json")), 0);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  ASSERT_EQ(run("fit " + data_args() + " --group WOMAN --seed 5 --bootstrap-mode independent-halves"),
            0);
  EXPECT_NE(out(), slurp(dir_ / "a.json"));
}

TEST_F(Cli, GiniWritesLorenzCurve) {
  ASSERT_EQ(run("gini " + data_args() + " --group BIM --lorenz-out " + path("lorenz.csv")), 0) << err();
  const auto j = nlohmann::json::parse(out());
  const double g = j["gini"]["value"];
  EXPECT_GT(g, 0.3);
  EXPECT_LT(g, 0.7);
  const std::string lorenz = slurp(dir_ / "lorenz.csv");
  EXPECT_EQ(lorenz.rfind("X,Y\n0,0\n", 0), 0u) << lorenz.substr(0, 20);
  EXPECT_NE(lorenz.find("\n1,1\n"), std::string::npos);
}

TEST_F(Cli, CcdfColumns) {
  ASSERT_EQ(run("ccdf " + data_args() + " --out " + path("ccdf.csv")), 0) << err();
  const std::string c = slurp(dir_ / "ccdf.csv");
  EXPECT_EQ(c.rfind("income,survival,log10_income,log10_survival\n", 0), 0u) << c.substr(0, 60);
}

TEST_F(Cli, ReportWritesSeriesAndIsDeterministic) {
  ASSERT_EQ(run("sample --t 1400 --alpha 1.9 --ml 5000 --n 20000 --seed 1 --out " + path("y1.csv")), 0);
  ASSERT_EQ(run("sample --t 1655 --alpha 2.5 --ml 4500 --n 20000 --seed 2 --out " + path("y2.csv")), 0);
  ASSERT_EQ(run("sample --t 1500 --alpha 2.2 --ml 4800 --n 20000 --seed 3 --out " + path("y3.csv")), 0);
  {
    std::ofstream schema(dir_ / "income.cfg");
    schema << "income_column = income\n";
  }
  const std::string inputs = "--inputs 2001=" + path("y1.csv") + " 2007=" + path("y3.csv") +
                             " 2014=" + path("y2.csv") + " 2009=" + path("missing.csv") +
                             " --schema " + path("income.cfg") + " --seed 9";
  ASSERT_EQ(run("report " + inputs + " --out " + path("r1")), 0) << err();
  ASSERT_EQ(run("report " + inputs + " --out " + path("r2")), 0) << err();
  EXPECT_EQ(slurp(dir_ / "r1" / "report.json"), slurp(dir_ / "r2" / "report.json"));
  const auto j = nlohmann::json::parse(slurp(dir_ / "r1" / "report.json"));
  EXPECT_EQ(j["seed"], 9);
  ASSERT_EQ(j["years"].size(), 4u);
  EXPECT_EQ(j["years"][2]["year"], 2009);
  EXPECT_TRUE(j["years"][2].contains("error"));
  EXPECT_FALSE(j["trends"].empty());
  const std::string gini = slurp(dir_ / "r1" / "series" / "gini_ALL.csv");
  EXPECT_EQ(gini.rfind("# seed=9\nyear,value,error\n2001,", 0), 0u) << gini;
  EXPECT_EQ(gini, slurp(dir_ / "r2" / "series" / "gini_ALL.csv"));
}

TEST_F(Cli, ExitCodes) {
  // Usage and schema problems.
  EXPECT_EQ(run("fit"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("fit " + data_args() + " --tail-fraction 0.5"), 2);
  EXPECT_EQ(run("fit " + data_args() + " --group OTHER"), 2);
  {
    std::ofstream bad(dir_ / "bad.cfg");
    bad << "income_column = income\nage_column = years\n";
  }
  EXPECT_EQ(run("fit " + fixture("sample_microdata.csv") + " --schema " + path("bad.cfg")), 2);
  EXPECT_NE(err().find("years"), std::string::npos) << err();
  EXPECT_EQ(run("sample --t -1 --alpha 2 --ml 10 --n 10 --out " + path("x.csv")), 2);
  EXPECT_EQ(run("sample --t 1 --alpha 2 --ml 10 --n 0 --out " + path("x.csv")), 2);

  // Not enough data.
  {
    std::ofstream small(dir_ / "small.csv");
    small << "income,sex,race,age,weight\n100,1,2,30,1\n200,2,2,30,1\n300,1,2,30,1\n";
  }
  EXPECT_EQ(run("fit " + path("small.csv") + " --schema " + fixture("sample_schema.cfg")), 3);
  EXPECT_EQ(run("fit " + path("small.csv") + " --schema " + fixture("sample_schema.cfg") +
                " --group BIM"),
            3);

  // I/O.
  EXPECT_EQ(run("fit " + path("nope.csv") + " --schema " + fixture("sample_schema.cfg")), 4);
  EXPECT_EQ(run("sample --t 1 --alpha 2 --ml 10 --n 10 --out /nonexistent/dir/x.csv"), 4);
}

}  // namespace
