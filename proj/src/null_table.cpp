#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mgfnorm/errors.hpp"
#include "mgfnorm/montecarlo.hpp"

namespace mgfnorm {

NullTable::NullTable(StatSpec statistic, Index n, Index d, std::uint64_t seed,
                     std::vector<double> values)
    : statistic_(std::move(statistic)), n_(n), d_(d), seed_(seed), values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidSpec("alpha must lie in (0, 1)");
  }
}

// 1-based order statistic, clamped to the sample.
double order_statistic(const std::vector<double>& sorted, long long k) {
  const long long size = static_cast<long long>(sorted.size());
  k = std::clamp(k, 1LL, size);
  return sorted[static_cast<std::size_t>(k - 1)];
}

}  // namespace

double NullTable::critical_value(double alpha) const {
  check_alpha(alpha);
  if (values_.empty()) throw InvalidSpec("critical_value: empty null table");
  const auto k = static_cast<long long>(std::ceil((1.0 - alpha) * static_cast<double>(reps())));
  return order_statistic(values_, k);
}

double NullTable::critical_value_std_error(double alpha) const {
  check_alpha(alpha);
  if (values_.empty()) throw InvalidSpec("critical_value_std_error: empty null table");
  const double r = static_cast<double>(reps());
  const auto k = static_cast<long long>(std::ceil((1.0 - alpha) * r));
  const auto s = static_cast<long long>(std::ceil(std::sqrt(r * alpha * (1.0 - alpha))));
  return 0.5 * (order_statistic(values_, k + s) - order_statistic(values_, k - s));
}

double NullTable::p_value(double observed) const {
  const auto at_least =
      values_.end() - std::lower_bound(values_.begin(), values_.end(), observed);
  return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(reps()) + 1.0);
}

std::string NullTable::to_json() const {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["statistic"] = statistic_.label();
  doc["tuning"] = statistic_.tuning ? nlohmann::json(*statistic_.tuning) : nlohmann::json(nullptr);
  doc["allow_small_gamma"] = statistic_.allow_small_gamma;
  doc["n"] = n_;
  doc["d"] = d_;
  doc["reps"] = reps();
  doc["seed"] = seed_;
  doc["algorithm"] = std::string(SeededStream::algorithm);
  doc["values"] = values_;
  return doc.dump();
}

NullTable NullTable::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("null table: ") + e.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      std::ostringstream msg;
      msg << "null table: schema_version " << version << " is not supported (expected "
          << kSchemaVersion << ")";
      throw ParseError(msg.str());
    }
    StatSpec stat = StatSpec::parse(doc.at("statistic").get<std::string>());
    stat.allow_small_gamma = doc.value("allow_small_gamma", false);
    const auto& tuning = doc.at("tuning");
    if (tuning.is_null() != !stat.tuning ||
        (stat.tuning && tuning.get<double>() != *stat.tuning)) {
      throw ParseError("null table: tuning does not match the statistic label");
    }
    auto values = doc.at("values").get<std::vector<double>>();
    if (values.size() != doc.at("reps").get<std::size_t>()) {
      throw ParseError("null table: number of values differs from reps");
    }
    if (!std::is_sorted(values.begin(), values.end())) {
      throw ParseError("null table: values are not sorted");
    }
    return NullTable(stat, doc.at("n").get<Index>(), doc.at("d").get<Index>(),
                     doc.at("seed").get<std::uint64_t>(), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("null table: ") + e.what());
  }
}

void NullTable::save(const std::filesystem::path& file) const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write null table to " + tmp);
    out << to_json();
    if (!out) throw Error("cannot write null table to " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

NullTable NullTable::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("cannot open null table " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string NullTable::cache_file_name(const StatSpec& statistic, Index n, Index d,
                                       std::size_t reps, std::uint64_t seed) {
  std::string label = statistic.label();
  std::replace(label.begin(), label.end(), ':', '_');
  std::ostringstream name;
  name << label << (statistic.allow_small_gamma ? "_small" : "") << "_n" << n << "_d" << d
       << "_r" << reps << "_s" << seed << ".json";
  return name.str();
}

}  // namespace mgfnorm
