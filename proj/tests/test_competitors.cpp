#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mgfnorm/battery.hpp"
#include "mgfnorm/competitors.hpp"
#include "mgfnorm/errors.hpp"
#include "mgfnorm/montecarlo.hpp"
#include "oracles.hpp"

using namespace mgfnorm;
using oracle::MatrixXd;
using oracle::VectorXd;

namespace {

ResidualSet<double> residuals_of(const MatrixXd& x) {
  return scaled_residuals(DataMatrix<double>(x));
}

ResidualSet<double> residuals_1d(std::initializer_list<double> v) {
  Matrix<double> m(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return ResidualSet<double>(m);
}

// Skewed small samples make the oracle comparisons less forgiving than
// symmetric ones.
MatrixXd small_sample(int n, int d, std::mt19937_64& rng) {
  MatrixXd x = oracle::normal_matrix(n, d, rng);
  x.col(0) = x.col(0).array().exp().matrix();
  return x;
}

double mc_mean_distance(const VectorXd& a, int draws, std::mt19937_64& rng, double& se) {
  std::normal_distribution<double> z;
  double sum = 0, sum_sq = 0;
  VectorXd v(a.size());
  for (int i = 0; i < draws; ++i) {
    for (int k = 0; k < a.size(); ++k) v(k) = z(rng);
    const double r = (a - v).norm();
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / draws;
  se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  return mean;
}

}  // namespace

TEST(Zghoul, AgreesWithQuadrature) {
  std::mt19937_64 rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + rep % 8;
    const double gamma = rep % 2 ? 3.0 : 5.0;
    const auto res = residuals_of(small_sample(n, 1, rng));
    const double closed = zghoul_statistic(res, gamma);
    EXPECT_GE(closed, -1e-10);
    EXPECT_LE(oracle::relative_error(closed, oracle::mgf_l2_by_quadrature(res.residuals(), gamma)),
              1e-6);
  }
}

TEST(Zghoul, RequiresOneDimension) {
  std::mt19937_64 rng(52);
  EXPECT_THROW(zghoul_statistic(residuals_of(oracle::normal_matrix(10, 2, rng)), 3.0),
               DimensionError);
}

TEST(HJ, AgreesWithQuadratureAndWithZghoul) {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + rep % 2;
    const int n = 4 + rep % 5;
    const double beta = rep % 4 < 2 ? 2.0 : 5.0;
    const auto res = residuals_of(small_sample(n, d, rng));
    const double closed = hj_statistic(res, beta);
    EXPECT_GE(closed, 0.0);
    EXPECT_LE(oracle::relative_error(closed, oracle::mgf_l2_by_quadrature(res.residuals(), beta)),
              1e-5);
    if (d == 1 && beta > 2) {
      EXPECT_LE(oracle::relative_error(closed, zghoul_statistic(res, beta)), 1e-10);
    }
  }
  EXPECT_THROW(hj_statistic(residuals_1d({-1, 1}), 1.0), BetaTooSmall);
}

TEST(HZ, AgreesWithCharacteristicFunctionQuadrature) {
  std::mt19937_64 rng(54);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + rep % 2;
    const int n = 3 + rep % 6;
    const double beta = std::array{0.5, 1.0, hz_default_gamma(n, d)}[rep % 3];
    const auto res = residuals_of(small_sample(n, d, rng));
    const double closed = hz_statistic(res, beta);
    EXPECT_GE(closed, 0.0);
    EXPECT_NEAR(closed, oracle::hz_by_quadrature(res.residuals(), beta), 1e-5);
    EXPECT_LE(oracle::relative_error(closed, oracle::hz_by_quadrature(res.residuals(), beta)),
              1e-4);
  }
}

TEST(HZ, VanishesForTinyBandwidth) {
  std::mt19937_64 rng(55);
  EXPECT_LE(hz_statistic(residuals_of(oracle::normal_matrix(20, 2, rng)), 1e-3), 1e-3);
}

TEST(HZ, DefaultBandwidth) {
  EXPECT_NEAR(hz_default_gamma(50, 2), std::pow(62.5, 1.0 / 6) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(hz_default_gamma(50, 2), 1.4087, 1e-4);
  EXPECT_NEAR(hz_default_gamma(4, 1), std::pow(3.0, 0.2) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(hz_default_gamma(4, 1), 0.8809, 1e-4);
  for (Index n = 3; n < 300; ++n) EXPECT_LT(hz_default_gamma(n, 3), hz_default_gamma(n + 1, 3));
}

TEST(HJM, AgreesWithQuadrature) {
  std::mt19937_64 rng(56);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + rep % 2;
    const int n = 3 + rep % 4;
    const double gamma = rep % 3 ? 1.5 : 3.0;
    const auto res = residuals_of(small_sample(n, d, rng));
    const double closed = hjm_statistic(res, gamma);
    EXPECT_GE(closed, -1e-9);
    EXPECT_LE(oracle::relative_error(closed, oracle::hjm_by_quadrature(res.residuals(), gamma)),
              1e-4);
  }
}

TEST(HJM, SampleSizeCap) {
  std::mt19937_64 rng(57);
  const auto res = residuals_of(oracle::normal_matrix(101, 1, rng));
  EXPECT_THROW(hjm_statistic(res, 1.5), SampleTooLarge);
  HjmOptions opt;
  opt.allow_large_sample = true;
  EXPECT_NO_THROW(hjm_statistic(res, 1.5, opt));
}

TEST(Energy, ConstantIsMeanGaussianNorm) {
  EXPECT_NEAR(expected_norm_to_gaussian(0.0, 1), std::sqrt(2 / std::numbers::pi), 1e-15);
  std::mt19937_64 rng(58);
  double se;
  const double mc = mc_mean_distance(VectorXd::Zero(1), 1000000, rng, se);
  EXPECT_LE(std::abs(expected_norm_to_gaussian(0.0, 1) - mc), 3 * se);
}

TEST(Energy, SeriesMatchesMonteCarloOnBothBranches) {
  std::mt19937_64 rng(59);
  for (int d : {1, 2, 3, 5}) {
    for (double a2 : {0.5, 3.9, 4.1, 12.0, 40.0}) {
      VectorXd a = VectorXd::Zero(d);
      a(0) = std::sqrt(a2);
      double se;
      const double mc = mc_mean_distance(a, 200000, rng, se);
      EXPECT_LE(std::abs(expected_norm_to_gaussian(a2, d) - mc), 4 * se) << d << " " << a2;
    }
  }
}

TEST(Energy, BranchesJoinContinuously) {
  for (int d : {1, 2, 3, 5, 10}) {
    const double below = expected_norm_to_gaussian(4.0, d);
    const double above = expected_norm_to_gaussian(std::nextafter(4.0, 5.0), d);
    EXPECT_NEAR(below, above, 1e-12 * below);
  }
  EXPECT_THROW(expected_norm_to_gaussian(2000.0, 2), SeriesNonConvergence);
}

TEST(Energy, StatisticMatchesDirectSums) {
  std::mt19937_64 rng(60);
  const auto res = residuals_of(small_sample(15, 3, rng));
  const MatrixXd& y = res.residuals();
  double to_gauss = 0, pairs = 0;
  for (int j = 0; j < 15; ++j) {
    to_gauss += expected_norm_to_gaussian(y.row(j).squaredNorm(), 3);
    for (int k = 0; k < 15; ++k) pairs += (y.row(j) - y.row(k)).norm();
  }
  const double ezz = std::sqrt(2.0) * expected_gaussian_norm<double>(3);
  const double direct = 15 * (2.0 / 15 * to_gauss - ezz - pairs / 225);
  EXPECT_LE(oracle::relative_error(energy_statistic(res), direct), 1e-12);
}

TEST(Mardia, SmallExamples) {
  const auto sym = residuals_1d({-1, 1});
  const auto skew = mardia_skew_test(sym);
  EXPECT_DOUBLE_EQ(skew.statistic, 0.0);
  EXPECT_DOUBLE_EQ(skew.p_value, 1.0);
  EXPECT_EQ(mardia_skew_df(3), 10);
  EXPECT_EQ(mardia_kurt_variance(5), 280);
  // b2 = d(d+2) = 3 for d = 1: residuals +-sqrt(3) and 0 with weights giving mean 0, var 1.
  Matrix<double> y(6, 1);
  y << std::sqrt(3.0), -std::sqrt(3.0), 0, 0, 0, 0;
  const auto kurt = mardia_kurt_test(ResidualSet<double>(y));
  EXPECT_NEAR(kurt.p_value, 1.0, 1e-15);
  EXPECT_NEAR(chi_square_upper_tail(3.84145882069412, 1.0), 0.05, 1e-12);
}

TEST(Mardia, SkewnessPValuesUniformUnderNull) {
  const StatSpec ms = StatSpec::parse("MS");
  const auto values = simulate_battery({ms}, AlternativeSpec::std_normal(2), 500, 10000, 61);
  std::vector<double> p;
  double mean = 0;
  for (double v : values[0]) {
    p.push_back(chi_square_upper_tail(v, static_cast<double>(mardia_skew_df(2))));
    mean += 6 * v / 1e4;
  }
  EXPECT_LT(oracle::ks_distance(p, [](double u) { return u; }), 0.05);
  EXPECT_NEAR(mean, 24.0, 0.05 * 24);
}

TEST(Mardia, KurtosisLevelUnderNull) {
  const StatSpec mk = StatSpec::parse("MK");
  const auto values = simulate_battery({mk}, AlternativeSpec::std_normal(2), 1000, 10000, 62);
  const double crit = 1.959963984540054;
  double rejections = 0;
  for (double z : values[0]) rejections += z > crit;
  EXPECT_NEAR(rejections / 1e4, 0.05, 0.015);
}

TEST(Invariance, CompetitorsAffineInvariant) {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> z(0, 5);
  for (int d : {1, 2, 3}) {
    const MatrixXd x = small_sample(20, d, rng);
    const auto base = residuals_of(x);
    std::vector<std::string> labels = {"HZ", "HZ:0.7", "HJ:2", "HJ:5", "EN", "MS", "MK", "HJM:1.5"};
    if (d == 1) labels.push_back("Z:3");
    for (int rep = 0; rep < 5; ++rep) {
      const MatrixXd a = oracle::random_transform(d, 1e3, rng);
      Eigen::RowVectorXd b(d);
      for (int k = 0; k < d; ++k) b(k) = z(rng);
      const auto moved = residuals_of((x * a.transpose()).rowwise() + b);
      for (const auto& label : labels) {
        const StatSpec s = StatSpec::parse(label);
        EXPECT_LE(oracle::relative_error(scaled_statistic(s, base), scaled_statistic(s, moved)),
                  1e-8)
            << label << " d=" << d;
      }
    }
  }
}
