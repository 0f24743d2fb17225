#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "mgfnorm/errors.hpp"
#include "mgfnorm/montecarlo.hpp"
#include "mgfnorm/reproduce.hpp"
#include "mgfnorm/statistic.hpp"

using namespace mgfnorm;
namespace fs = std::filesystem;

namespace {

NullTable counting_table(std::size_t reps) {
  std::vector<double> v(reps);
  std::iota(v.begin(), v.end(), 1.0);
  return NullTable(StatSpec::t(5), 20, 1, 3, v);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mgfnorm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(StatSpecText, ParseAndLabel) {
  EXPECT_EQ(StatSpec::parse("T5"), StatSpec::t(5));
  EXPECT_EQ(StatSpec::parse("T:inf"), StatSpec::t(INFINITY));
  EXPECT_EQ(StatSpec::parse("Tinf").kind, StatSpec::Kind::TLimit);
  EXPECT_EQ(StatSpec::parse("HJM:1.5").kind, StatSpec::Kind::HJM);
  EXPECT_EQ(StatSpec::parse("HJ5").kind, StatSpec::Kind::HJ);
  EXPECT_EQ(StatSpec::parse("HZ").kind, StatSpec::Kind::HZ);
  EXPECT_FALSE(StatSpec::parse("HZ").tuning.has_value());
  for (const char* label : {"T:2.5", "T:inf", "Z:3", "HZ", "HZ:0.5", "HJ:5", "HJM:1.5", "EN", "MS",
                            "MK"}) {
    EXPECT_EQ(StatSpec::parse(label).label(), label);
  }
  EXPECT_THROW(StatSpec::parse("XYZ"), ParseError);
  EXPECT_THROW(StatSpec::parse("Z:3").validate(2), DimensionError);
  EXPECT_THROW(StatSpec::parse("HJ:1").validate(2), BetaTooSmall);
  EXPECT_THROW(StatSpec::parse("T:1.5").validate(2), GammaTooSmall);
  EXPECT_THROW(StatSpec::parse("MS:2").validate(2), InvalidSpec);
  StatSpec small = StatSpec::parse("T:1.5");
  small.allow_small_gamma = true;
  EXPECT_NO_THROW(small.validate(2));
}

TEST(NullTable, QuantileConvention) {
  const auto t = counting_table(100);
  EXPECT_DOUBLE_EQ(t.critical_value(0.05), 95.0);
  EXPECT_DOUBLE_EQ(t.critical_value(0.5), 50.0);
  EXPECT_GE(t.critical_value_std_error(0.05), 0.0);
  EXPECT_THROW(t.critical_value(1.0), Error);
  EXPECT_THROW(t.critical_value(0.0), Error);

  // A symmetric toy statistic: the median order statistic sits at zero.
  std::vector<double> sym;
  for (int i = -50; i <= 50; ++i) sym.push_back(i);
  EXPECT_DOUBLE_EQ(NullTable(StatSpec::t(5), 20, 1, 0, sym).critical_value(0.5), 0.0);
}

TEST(NullTable, PValues) {
  const auto t = counting_table(100);
  EXPECT_DOUBLE_EQ(t.p_value(-1e300), 1.0);
  EXPECT_DOUBLE_EQ(t.p_value(-INFINITY), 1.0);
  EXPECT_DOUBLE_EQ(t.p_value(1000), 1.0 / 101);
  EXPECT_DOUBLE_EQ(t.p_value(100), 2.0 / 101);
  EXPECT_DOUBLE_EQ(t.p_value(95.5), 6.0 / 101);
}

TEST(NullTable, JsonRoundTripIsBitwise) {
  const auto t = simulate_null(StatSpec::parse("T:2.5"), 20, 2, 200, 5);
  const auto dir = fresh_dir("roundtrip");
  const auto file = dir / "table.json";
  t.save(file);
  const auto back = NullTable::load(file);
  EXPECT_EQ(back.values(), t.values());
  EXPECT_EQ(back.statistic(), t.statistic());
  EXPECT_EQ(back.seed(), t.seed());
  EXPECT_EQ(back.n(), t.n());
  EXPECT_EQ(back.d(), t.d());
  EXPECT_EQ(back.critical_value(0.05), t.critical_value(0.05));

  const auto doc = nlohmann::json::parse(t.to_json());
  for (const char* key : {"schema_version", "statistic", "tuning", "n", "d", "reps", "seed",
                          "algorithm", "values"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  auto bad = doc;
  bad["schema_version"] = 99;
  EXPECT_THROW(NullTable::from_json(bad.dump()), Error);
  bad = doc;
  bad["reps"] = 3;
  EXPECT_THROW(NullTable::from_json(bad.dump()), Error);
}

TEST(Simulation, DeterministicAcrossThreadCounts) {
  const std::vector<StatSpec> stats = {StatSpec::t(5), StatSpec::t(INFINITY),
                                       StatSpec::parse("EN"), StatSpec::parse("HZ")};
  MCOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto alt = AlternativeSpec::parse("chisq:k=5,d=2,iid");
  EXPECT_EQ(simulate_battery(stats, alt, 25, 300, 17, one),
            simulate_battery(stats, alt, 25, 300, 17, many));
  const auto a = estimate_critical_value(stats[0], 25, 2, 0.05, 300, 17, one);
  const auto b = estimate_critical_value(stats[0], 25, 2, 0.05, 300, 17, many);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Simulation, CacheIsUsedAndConsistent) {
  MCOptions opt;
  opt.cache_dir = fresh_dir("cache");
  const StatSpec s = StatSpec::t(3);
  const auto first = simulate_null(s, 20, 1, 300, 8, opt);
  const auto file = *opt.cache_dir / NullTable::cache_file_name(s, 20, 1, 300, 8);
  ASSERT_TRUE(fs::exists(file));
  const auto second = simulate_null(s, 20, 1, 300, 8, opt);
  EXPECT_EQ(first.values(), second.values());
  EXPECT_EQ(first.values(), simulate_null(s, 20, 1, 300, 8).values());
}

TEST(Simulation, ReplicationFloor) {
  EXPECT_THROW(estimate_critical_value(StatSpec::t(5), 20, 1, 0.05, 99, 1), InvalidSpec);
  EXPECT_THROW(mc_p_value(StatSpec::t(5), 1.0, 20, 1, 50, 1), InvalidSpec);
}

TEST(Simulation, CriticalValueResultFields) {
  const auto r = estimate_critical_value(StatSpec::t(5), 30, 2, 0.05, 1000, 4);
  EXPECT_EQ(r.kind, MCResult::Kind::CriticalValue);
  EXPECT_EQ(r.statistic, "T:5");
  EXPECT_EQ(r.reps, 1000u);
  EXPECT_GT(r.value, 0);
  EXPECT_GE(r.std_error, 0);
}

TEST(Power, NullRejectionEqualsAlpha) {
  PowerOptions po;
  po.critical_reps = 20000;
  for (const char* label : {"T:2.5", "T:inf", "HZ", "EN", "MS", "MK", "HJ:5"}) {
    const auto r = estimate_power(StatSpec::parse(label), AlternativeSpec::std_normal(2), 30, 0.05,
                                  4000, 12, po);
    EXPECT_LE(r.value, 1.0);
    EXPECT_GE(r.std_error, 0.0);
    const double se = std::sqrt(0.05 * 0.95 / 4000);
    EXPECT_LE(std::abs(r.value - 0.05), 3 * se + 0.005) << label;
  }
}

TEST(Power, StandardErrorBound) {
  PowerOptions po;
  po.critical_value = 200.0;
  const auto r =
      estimate_power(StatSpec::t(5), AlternativeSpec::nmix1(2), 50, 0.05, 10000, 1, po);
  EXPECT_LE(r.std_error, 0.005);
  EXPECT_EQ(r.critical_value, 200.0);
  EXPECT_NEAR(r.std_error, std::sqrt(r.value * (1 - r.value) / 1e4), 1e-15);
}

TEST(PValue, SuperUniformUnderNull) {
  const StatSpec s = StatSpec::t(4);
  const auto table = simulate_null(s, 30, 2, 999, 21);
  const auto observed = simulate_battery({s}, AlternativeSpec::std_normal(2), 30, 1000, 22);
  int rejections = 0;
  for (double v : observed[0]) rejections += table.p_value(v) <= 0.05;
  EXPECT_LE(rejections / 1000.0, 0.05 + 3 * std::sqrt(0.05 * 0.95 / 1000));
}

TEST(PValue, StronglyNonNormalSampleIsRejected) {
  const auto data = sample(AlternativeSpec::parse("lognormal:sigma=1,d=3,iid"), 50,
                           SeededStream{derive_seed(5, "p-value demo"), 0});
  const auto res = scaled_residuals(data);
  const StatSpec s = StatSpec::t(5);
  const auto r = mc_p_value(s, scaled_statistic(s, res), 50, 3, 10000, 23);
  EXPECT_EQ(r.kind, MCResult::Kind::PValue);
  EXPECT_LT(r.value, 0.01);
  EXPECT_GT(r.value, 0.0);
}

TEST(Consistency, RefusesHeavyTails) {
  EXPECT_THROW(consistency_curve(AlternativeSpec::parse("mvt:nu=5,d=2"), 4, {50}, 10, 1),
               MGFNotFinite);
  EXPECT_THROW(consistency_curve(AlternativeSpec::parse("pearson7:df=10,d=1"), 4, {50}, 10, 1),
               MGFNotFinite);
}

TEST(Consistency, NullCurveDecreases) {
  const auto curve = consistency_curve(AlternativeSpec::std_normal(1), 4, {25, 100, 400}, 300, 3);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_GT(curve[0].mean, curve[1].mean);
  EXPECT_GT(curve[1].mean, curve[2].mean);
}

TEST(Reproduce, SelectionAndValidation) {
  EXPECT_EQ(parse_table_id("t4"), TableId::T4);
  EXPECT_THROW(parse_table_id("T9"), InvalidSpec);
  TableOptions opt;
  opt.reps = 1000;
  opt.subset = "n=7";
  EXPECT_TRUE(reproduce_table(TableId::T2, opt).entries.empty());
  opt.subset = "row=nothing";
  EXPECT_TRUE(reproduce_table(TableId::T5, opt).entries.empty());
  opt.subset = "colour=red";
  EXPECT_THROW(reproduce_table(TableId::T2, opt), InvalidSpec);
  opt.subset = "";
  opt.reps = 999;
  EXPECT_THROW(reproduce_table(TableId::T2, opt), InvalidSpec);
}

TEST(Reproduce, ReferenceDataShape) {
  EXPECT_EQ(critical_value_reference().size(), 20u);
  EXPECT_DOUBLE_EQ(critical_value_reference(50, 2, 5), 356.56);
  EXPECT_DOUBLE_EQ(critical_value_reference(100, 1, INFINITY), 66.13);
  for (TableId id : {TableId::T4, TableId::T5, TableId::T6}) {
    const auto& ref = power_reference(id);
    EXPECT_EQ(ref.rows.size(), 17u);
    for (const auto& row : ref.rows) {
      EXPECT_EQ(row.percent.size(), ref.columns.size());
      EXPECT_NO_THROW(AlternativeSpec::parse(row.alternative)) << row.alternative;
    }
  }
  for (const auto& row : power_reference(TableId::T3).rows) {
    EXPECT_NO_THROW(AlternativeSpec::parse(row.alternative)) << row.alternative;
  }
}

TEST(Reproduce, SmallCriticalValueRun) {
  TableOptions opt;
  opt.reps = 4000;
  opt.subset = "n=20,d=1,gamma=5|10";
  const auto report = reproduce_table(TableId::T2, opt);
  ASSERT_EQ(report.entries.size(), 2u);
  for (const auto& e : report.entries) {
    EXPECT_EQ(e.n, 20);
    EXPECT_LT(std::abs(e.deviation), 0.06) << e.column;
  }
}
