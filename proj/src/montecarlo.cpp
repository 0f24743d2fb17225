#include "mgfnorm/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "mgfnorm/errors.hpp"

namespace mgfnorm {

std::string_view to_string(MCResult::Kind kind) {
  switch (kind) {
    case MCResult::Kind::CriticalValue:
      return "critical_value";
    case MCResult::Kind::PValue:
      return "p_value";
    case MCResult::Kind::Power:
      return "power";
  }
  return "?";
}

namespace {

unsigned worker_count(const MCOptions& options, std::size_t tasks) {
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, count). Workers pull indices from a shared
// counter; when several tasks fail, the failure with the smallest index is
// rethrown so that errors do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, const MCOptions& options, Body body) {
  const unsigned threads = worker_count(options, count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };

  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

void check_reps(std::size_t reps) {
  if (reps < 100) throw InvalidSpec("Monte Carlo runs need reps >= 100");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidSpec("alpha must lie in (0, 1)");
}

std::optional<NullTable> try_cache(const MCOptions& options, const StatSpec& stat, Index n,
                                   Index d, std::size_t reps, std::uint64_t seed) {
  if (!options.cache_dir) return std::nullopt;
  const auto file = *options.cache_dir / NullTable::cache_file_name(stat, n, d, reps, seed);
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    NullTable table = NullTable::load(file);
    if (table.statistic() == stat && table.n() == n && table.d() == d && table.reps() == reps &&
        table.seed() == seed) {
      return table;
    }
  } catch (const ParseError&) {
    // A damaged cache entry is recomputed and overwritten.
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::vector<double>> simulate_battery(const std::vector<StatSpec>& stats,
                                                  const AlternativeSpec& alt, Index n,
                                                  std::size_t reps, std::uint64_t seed,
                                                  const MCOptions& options) {
  alt.validate();
  for (const auto& s : stats) s.validate(alt.d);
  std::vector<std::vector<double>> out(stats.size(), std::vector<double>(reps));
  parallel_for(reps, options, [&](std::size_t i) {
    const SeededStream stream{seed, i};
    const DataMatrix<double> data = sample(alt, n, stream);
    std::optional<ResidualSet<double>> res;
    try {
      res.emplace(scaled_residuals(data));
    } catch (const SingularCovariance& e) {
      std::ostringstream msg;
      msg << "degenerate replication " << i << " (seed " << seed << ", " << alt.to_string()
          << ", n = " << n << "): " << e.what();
      throw SingularCovariance(msg.str());
    }
    for (std::size_t s = 0; s < stats.size(); ++s) {
      out[s][i] = scaled_statistic(stats[s], *res);
    }
  });
  return out;
}

std::vector<NullTable> simulate_nulls(const std::vector<StatSpec>& stats, Index n, Index d,
                                      std::size_t reps, std::uint64_t seed,
                                      const MCOptions& options) {
  std::vector<std::optional<NullTable>> found(stats.size());
  std::vector<StatSpec> missing;
  std::vector<std::size_t> missing_index;
  for (std::size_t s = 0; s < stats.size(); ++s) {
    found[s] = try_cache(options, stats[s], n, d, reps, seed);
    if (!found[s]) {
      missing.push_back(stats[s]);
      missing_index.push_back(s);
    }
  }
  if (!missing.empty()) {
    auto values = simulate_battery(missing, AlternativeSpec::std_normal(d), n, reps, seed, options);
    for (std::size_t m = 0; m < missing.size(); ++m) {
      NullTable table(missing[m], n, d, seed, std::move(values[m]));
      if (options.cache_dir) {
        table.save(*options.cache_dir / NullTable::cache_file_name(missing[m], n, d, reps, seed));
      }
      found[missing_index[m]] = std::move(table);
    }
  }
  std::vector<NullTable> out;
  out.reserve(stats.size());
  for (auto& f : found) out.push_back(std::move(*f));
  return out;
}

NullTable simulate_null(const StatSpec& stat, Index n, Index d, std::size_t reps,
                        std::uint64_t seed, const MCOptions& options) {
  return std::move(simulate_nulls({stat}, n, d, reps, seed, options).front());
}

std::uint64_t null_seed(std::uint64_t seed, Index n, Index d) {
  std::ostringstream tag;
  tag << "null/n=" << n << "/d=" << d;
  return derive_seed(seed, tag.str());
}

std::uint64_t power_seed(std::uint64_t seed, const AlternativeSpec& alt, Index n) {
  std::ostringstream tag;
  tag << "power/" << alt.to_string() << "/n=" << n;
  return derive_seed(seed, tag.str());
}

MCResult estimate_critical_value(const StatSpec& stat, Index n, Index d, double alpha,
                                 std::size_t reps, std::uint64_t seed,
                                 const MCOptions& options) {
  check_reps(reps);
  check_alpha(alpha);
  const NullTable table = simulate_null(stat, n, d, reps, null_seed(seed, n, d), options);
  MCResult r;
  r.kind = MCResult::Kind::CriticalValue;
  r.statistic = stat.label();
  r.n = n;
  r.d = d;
  r.alpha = alpha;
  r.reps = reps;
  r.seed = seed;
  r.value = table.critical_value(alpha);
  r.std_error = table.critical_value_std_error(alpha);
  r.critical_value = r.value;
  return r;
}

MCResult mc_p_value(const StatSpec& stat, double observed, Index n, Index d, std::size_t reps,
                    std::uint64_t seed, const MCOptions& options) {
  check_reps(reps);
  if (std::isnan(observed)) throw InvalidSpec("mc_p_value: observed value is NaN");
  const NullTable table = simulate_null(stat, n, d, reps, null_seed(seed, n, d), options);
  MCResult r;
  r.kind = MCResult::Kind::PValue;
  r.statistic = stat.label();
  r.n = n;
  r.d = d;
  r.reps = reps;
  r.seed = seed;
  r.value = table.p_value(observed);
  r.std_error = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(reps));
  return r;
}

MCResult estimate_power(const StatSpec& stat, const AlternativeSpec& alt, Index n, double alpha,
                        std::size_t reps, std::uint64_t seed, const PowerOptions& power,
                        const MCOptions& options) {
  check_reps(reps);
  check_alpha(alpha);
  const double critical =
      power.critical_value
          ? *power.critical_value
          : estimate_critical_value(stat, n, alt.d, alpha, power.critical_reps, seed, options).value;
  const auto values = simulate_battery({stat}, alt, n, reps, power_seed(seed, alt, n), options);
  const auto rejections = std::count_if(values[0].begin(), values[0].end(),
                                        [&](double v) { return v > critical; });
  MCResult r;
  r.kind = MCResult::Kind::Power;
  r.statistic = stat.label();
  r.alternative = alt.to_string();
  r.n = n;
  r.d = alt.d;
  r.alpha = alpha;
  r.reps = reps;
  r.seed = seed;
  r.value = static_cast<double>(rejections) / static_cast<double>(reps);
  r.std_error = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(reps));
  r.critical_value = critical;
  return r;
}

std::vector<ConsistencyPoint> consistency_curve(const AlternativeSpec& alt, double gamma,
                                                const std::vector<Index>& n_grid,
                                                std::size_t reps, std::uint64_t seed,
                                                const MCOptions& options) {
  if (!alt.allows_consistency_curve()) {
    throw MGFNotFinite("consistency_curve: " + alt.to_string() +
                       " has no moment generating function");
  }
  if (reps < 2) throw InvalidSpec("consistency_curve: need reps >= 2");
  const StatSpec stat = StatSpec::t(gamma);
  if (stat.kind != StatSpec::Kind::T) {
    throw InvalidSpec("consistency_curve: gamma must be finite");
  }
  const double scale = t_scale_factor(gamma, alt.d);
  std::vector<ConsistencyPoint> out;
  for (const Index n : n_grid) {
    std::ostringstream tag;
    tag << "consistency/" << alt.to_string() << "/n=" << n;
    const auto values = simulate_battery({stat}, alt, n, reps, derive_seed(seed, tag.str()), options);
    double sum = 0;
    double sum_sq = 0;
    for (double v : values[0]) {
      const double x = v / (scale * static_cast<double>(n));
      sum += x;
      sum_sq += x * x;
    }
    const double r = static_cast<double>(reps);
    const double mean = sum / r;
    const double var = std::max(0.0, (sum_sq - r * mean * mean) / (r - 1.0));
    out.push_back({n, mean, std::sqrt(var / r)});
  }
  return out;
}

}  // namespace mgfnorm
