#ifndef MGFNORM_MONTECARLO_HPP
#define MGFNORM_MONTECARLO_HPP

// Monte Carlo critical values, p-values and power. Replication i of a task
// draws its sample from SeededStream{task_seed, i}, so every number depends
// only on its inputs and never on the worker count or scheduling.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgfnorm/battery.hpp"
#include "mgfnorm/sampling.hpp"

namespace mgfnorm {

struct MCOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Directory for persisted null tables. Unset disables caching.
  std::optional<std::filesystem::path> cache_dir;
};

struct MCResult {
  enum class Kind { CriticalValue, PValue, Power };

  Kind kind = Kind::CriticalValue;
  std::string statistic;
  std::string alternative;  // empty unless kind == Power
  Index n = 0;
  Index d = 0;
  double alpha = 0.05;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double value = 0;
  double std_error = 0;
  /// Critical value a power estimate was computed against.
  double critical_value = 0;
};

std::string_view to_string(MCResult::Kind kind);

/// Sorted null values of a scaled statistic with their provenance.
class NullTable {
 public:
  static constexpr int kSchemaVersion = 1;

  NullTable(StatSpec statistic, Index n, Index d, std::uint64_t seed, std::vector<double> values);

  const StatSpec& statistic() const { return statistic_; }
  Index n() const { return n_; }
  Index d() const { return d_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t reps() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  /// Upper critical value: the order statistic x_(k), k = ceil((1 - alpha) reps).
  double critical_value(double alpha) const;
  /// Standard error of critical_value() from the binomial spread of the order
  /// statistic: half the distance between x_(k - s) and x_(k + s),
  /// s = sqrt(reps alpha (1 - alpha)).
  double critical_value_std_error(double alpha) const;
  /// (1 + #{values >= observed}) / (reps + 1).
  double p_value(double observed) const;

  std::string to_json() const;
  /// Throws ParseError on a malformed document or a schema version mismatch.
  static NullTable from_json(std::string_view text);

  void save(const std::filesystem::path& file) const;
  static NullTable load(const std::filesystem::path& file);
  static std::string cache_file_name(const StatSpec& statistic, Index n, Index d,
                                     std::size_t reps, std::uint64_t seed);

 private:
  StatSpec statistic_;
  Index n_;
  Index d_;
  std::uint64_t seed_;
  std::vector<double> values_;
};

/// Scaled values of several statistics on the same `reps` samples of `alt`,
/// one vector per statistic in replication order. A singular replication
/// aborts with SingularCovariance naming the replication and seed.
std::vector<std::vector<double>> simulate_battery(const std::vector<StatSpec>& stats,
                                                  const AlternativeSpec& alt, Index n,
                                                  std::size_t reps, std::uint64_t seed,
                                                  const MCOptions& options = {});

/// Null table of `stat` over N_d(0, I) samples, loaded from or stored in the
/// cache when one is configured.
NullTable simulate_null(const StatSpec& stat, Index n, Index d, std::size_t reps,
                        std::uint64_t seed, const MCOptions& options = {});

/// Null tables for several statistics computed from shared samples; cached
/// tables are reused and only the missing statistics are simulated.
std::vector<NullTable> simulate_nulls(const std::vector<StatSpec>& stats, Index n, Index d,
                                      std::size_t reps, std::uint64_t seed,
                                      const MCOptions& options = {});

/// Requires reps >= 100 and alpha in (0, 1).
MCResult estimate_critical_value(const StatSpec& stat, Index n, Index d, double alpha,
                                 std::size_t reps, std::uint64_t seed,
                                 const MCOptions& options = {});

MCResult mc_p_value(const StatSpec& stat, double observed, Index n, Index d, std::size_t reps,
                    std::uint64_t seed, const MCOptions& options = {});

struct PowerOptions {
  /// Replications for the critical value when none is supplied.
  std::size_t critical_reps = 100000;
  std::optional<double> critical_value;
};

/// Rejection rate of `stat` on samples of `alt`. Without a supplied critical
/// value one is estimated from a null stream independent of the power stream.
MCResult estimate_power(const StatSpec& stat, const AlternativeSpec& alt, Index n, double alpha,
                        std::size_t reps, std::uint64_t seed, const PowerOptions& power = {},
                        const MCOptions& options = {});

/// Seeds used for the null simulation and for the alternative samples of a
/// power study. Exposed so that callers can share null tables.
std::uint64_t null_seed(std::uint64_t seed, Index n, Index d);
std::uint64_t power_seed(std::uint64_t seed, const AlternativeSpec& alt, Index n);

struct ConsistencyPoint {
  Index n = 0;
  double mean = 0;  // average of T_{n,gamma} / n
  double std_error = 0;
};

/// Average of T_{n,gamma}/n under `alt` for each n in the grid. Throws
/// MGFNotFinite for t and Pearson VII families.
std::vector<ConsistencyPoint> consistency_curve(const AlternativeSpec& alt, double gamma,
                                                const std::vector<Index>& n_grid,
                                                std::size_t reps, std::uint64_t seed,
                                                const MCOptions& options = {});

}  // namespace mgfnorm

#endif  // MGFNORM_MONTECARLO_HPP
