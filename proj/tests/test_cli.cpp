#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mgfnorm/cli.hpp"
#include "mgfnorm/csv.hpp"
#include "mgfnorm/errors.hpp"
#include "oracles.hpp"

using namespace mgfnorm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mgfnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "mgfnorm_cli_test";
  fs::create_directories(dir);
  const fs::path file = dir / name;
  std::ofstream(file) << content;
  return file;
}

fs::path matrix_file(const std::string& name, const Matrix<double>& m) {
  std::ostringstream s;
  write_csv(s, m, {"x1", "x2", "x3"});
  return temp_file(name, s.str());
}

json without_timestamp(json doc) {
  doc["provenance"].erase("timestamp");
  return doc;
}

}  // namespace

TEST(Csv, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(71);
  Matrix<double> m = oracle::normal_matrix(40, 3, rng);
  m(0, 0) = 1e-300;
  m(1, 1) = -123456789.123456789;
  m(2, 2) = 0.1;
  std::stringstream s;
  write_csv(s, m, {"a", "b", "c"});
  const CsvData back = parse_csv(s);
  EXPECT_EQ(back.header, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(back.values, m);
  std::stringstream bare;
  write_csv(bare, m);
  EXPECT_EQ(parse_csv(bare).values, m);
}

TEST(Csv, ErrorsNameLineAndColumn) {
  std::stringstream s("x,y\n1,2\n3,oops\n");
  try {
    parse_csv(s, "data.csv");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
  }
  std::stringstream ragged("1,2\n3\n");
  EXPECT_THROW(parse_csv(ragged), ParseError);
  std::stringstream empty("a,b\n\n");
  EXPECT_THROW(parse_csv(empty), ParseError);
}

TEST(Cli, TestCommandOnNormalData) {
  std::mt19937_64 rng(72);
  const auto file = matrix_file("normal.csv", oracle::normal_matrix(50, 3, rng));
  const auto r = run_cli({"test", file.string(), "--reps", "2000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["command"], "test");
  ASSERT_EQ(doc["results"].size(), 7u);
  int large = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& row = doc["results"][i];
    for (const char* key : {"statistic", "gamma", "value", "scaled", "p_value", "std_error"}) {
      EXPECT_TRUE(row.contains(key)) << key;
    }
    const double p = row["p_value"];
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
    large += p > 0.05;
  }
  EXPECT_GE(large, 6);
  EXPECT_EQ(doc["results"][6]["gamma"], "inf");
  for (const char* key : {"software", "version", "algorithm", "seed", "reps", "timestamp"}) {
    EXPECT_TRUE(doc["provenance"].contains(key)) << key;
  }
}

TEST(Cli, TestCommandRejectsSkewedData) {
  std::mt19937_64 rng(73);
  Matrix<double> m = oracle::normal_matrix(50, 3, rng);
  m.col(0) = m.col(0).array().cube().matrix();
  const auto file = matrix_file("cubed.csv", m);
  const auto r = run_cli({"test", file.string(), "--reps", "2000", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("statistic,gamma,", 0), 0u) << line;
  int small = 0, rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const auto cells = [&] {
      std::vector<std::string> c;
      std::stringstream s(line);
      std::string cell;
      while (std::getline(s, cell, ',')) c.push_back(cell);
      return c;
    }();
    small += std::stod(cells[5]) < 0.05;
  }
  EXPECT_EQ(rows, 7);
  EXPECT_GE(small, 5);
}

TEST(Cli, ExitCodes) {
  const auto bad = temp_file("bad.csv", "x,y\n1,2\n3,abc\n4,5\n");
  const auto r2 = run_cli({"test", bad.string(), "--reps", "100"});
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("line 3"), std::string::npos) << r2.err;

  const auto collinear = temp_file("collinear.csv", "1,2\n2,4\n3,6\n4,8\n");
  EXPECT_EQ(run_cli({"test", collinear.string(), "--reps", "100"}).code, 3);

  const auto few = temp_file("few.csv", "1,2\n2,5\n");
  EXPECT_EQ(run_cli({"test", few.string(), "--reps", "100"}).code, 2);

  EXPECT_EQ(run_cli({"tables", "T9"}).code, 4);
  EXPECT_EQ(run_cli({"test"}).code, 2);
  EXPECT_EQ(run_cli({"critvals", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"critvals", "--n", "20", "--d", "1", "--gamma", "1.5", "--reps", "100"}).code,
            4);
  EXPECT_EQ(run_cli({"critvals", "--n", "20", "--d", "1", "--gamma", "1.5", "--reps", "100",
                     "--allow-small-gamma"})
                .code,
            0);
  EXPECT_EQ(run_cli({"power", "--alt", "nonsense:d=2", "--reps", "100"}).code, 2);
}

TEST(Cli, EmptyTableSelectionSucceeds) {
  const auto r = run_cli({"tables", "T2", "--subset", "n=7", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["results"].empty());
}

TEST(Cli, ReportsAreDeterministicApartFromTimestamp) {
  const std::vector<std::string> args = {"critvals", "--n",      "20",   "--d",
                                         "2",        "--gamma",  "3,inf", "--stat",
                                         "HZ,EN",    "--reps",   "500",  "--seed",
                                         "9",        "--format", "json"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(without_timestamp(json::parse(a.out)).dump(), without_timestamp(json::parse(b.out)).dump());
  EXPECT_EQ(json::parse(a.out)["results"].size(), 4u);

  const fs::path out = fs::temp_directory_path() / "mgfnorm_cli_test" / "report.json";
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"--out", out.string()});
  ASSERT_EQ(run_cli(to_file).code, 0);
  std::ifstream in(out);
  const json from_file = json::parse(in);
  EXPECT_EQ(without_timestamp(from_file).dump(), without_timestamp(json::parse(a.out)).dump());
}

TEST(Cli, PowerCommand) {
  const auto r = run_cli({"power", "--alt", "nmix1:d=2", "--n", "50", "--stat", "T:inf", "--reps",
                          "1000", "--critical-reps", "2000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 1u);
  const double p = doc["results"][0]["power"];
  EXPECT_GT(p, 0.7);
}
