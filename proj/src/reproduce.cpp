#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "mgfnorm/detail/text.hpp"
#include "mgfnorm/errors.hpp"
#include "mgfnorm/reproduce.hpp"

namespace mgfnorm {

TableId parse_table_id(std::string_view text) {
  std::string t(detail::trim(text));
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (t == "T2") return TableId::T2;
  if (t == "T3") return TableId::T3;
  if (t == "T4") return TableId::T4;
  if (t == "T5") return TableId::T5;
  if (t == "T6") return TableId::T6;
  throw InvalidSpec("unknown table '" + std::string(text) + "' (expected T2, T3, T4, T5 or T6)");
}

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::T2:
      return "T2";
    case TableId::T3:
      return "T3";
    case TableId::T4:
      return "T4";
    case TableId::T5:
      return "T5";
    case TableId::T6:
      return "T6";
  }
  return "?";
}

double default_hjm_table_gamma() { return 1.5; }
double default_hj_table_beta() { return 5.0; }

StatSpec column_statistic(std::string_view column, double hjm_gamma, double hj_beta) {
  if (column == "HM") {
    StatSpec s;
    s.kind = StatSpec::Kind::HJM;
    s.tuning = hjm_gamma;
    return s;
  }
  if (column == "HJ") {
    StatSpec s;
    s.kind = StatSpec::Kind::HJ;
    s.tuning = hj_beta;
    return s;
  }
  return StatSpec::parse(column);
}

namespace {

// key -> accepted values
class Subset {
 public:
  explicit Subset(std::string_view text) {
    if (detail::trim(text).empty()) return;
    for (std::string_view item : detail::split(text, ',')) {
      item = detail::trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidSpec("subset item '" + std::string(item) + "' is not key=value");
      }
      const std::string key(detail::trim(item.substr(0, eq)));
      if (key != "n" && key != "d" && key != "gamma" && key != "stat" && key != "row") {
        throw InvalidSpec("unknown subset key '" + key + "' (expected n, d, gamma, stat, row)");
      }
      auto& values = filters_[key];
      for (std::string_view v : detail::split(item.substr(eq + 1), '|')) {
        values.emplace_back(detail::trim(v));
      }
    }
  }

  bool has(const std::string& key) const { return filters_.count(key) > 0; }

  bool match_integer(const std::string& key, Index value) const {
    auto it = filters_.find(key);
    if (it == filters_.end()) return true;
    return std::any_of(it->second.begin(), it->second.end(), [&](const std::string& v) {
      return detail::parse_integer(v, "subset " + key) == value;
    });
  }

  bool match_number(const std::string& key, double value) const {
    auto it = filters_.find(key);
    if (it == filters_.end()) return true;
    return std::any_of(it->second.begin(), it->second.end(), [&](const std::string& v) {
      return detail::parse_double(v, "subset " + key) == value;
    });
  }

  bool match_text(const std::string& key, const std::string& value) const {
    auto it = filters_.find(key);
    if (it == filters_.end()) return true;
    return std::find(it->second.begin(), it->second.end(), value) != it->second.end();
  }

  // A stat filter matches a column by its label or by the statistic it names.
  bool match_stat(const std::string& column, const StatSpec& stat) const {
    auto it = filters_.find("stat");
    if (it == filters_.end()) return true;
    return std::any_of(it->second.begin(), it->second.end(), [&](const std::string& v) {
      if (v == column) return true;
      try {
        return StatSpec::parse(v) == stat;
      } catch (const ParseError&) {
        return false;
      }
    });
  }

 private:
  std::map<std::string, std::vector<std::string>> filters_;
};

std::string gamma_label(double gamma) {
  return std::isinf(gamma) ? "inf" : detail::format_shortest(gamma);
}

void reproduce_critical(const TableOptions& opt, const Subset& subset, TableReport& report) {
  const auto gammas = critical_table_gammas();
  for (const auto& row : critical_value_reference()) {
    if (!subset.match_integer("n", row.n) || !subset.match_integer("d", row.d)) continue;
    std::ostringstream row_label;
    row_label << "n=" << row.n << ",d=" << row.d;
    if (!subset.match_text("row", row_label.str())) continue;

    std::vector<StatSpec> stats;
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < gammas.size(); ++c) {
      const StatSpec stat = StatSpec::t(gammas[c]);
      if (!subset.match_number("gamma", gammas[c])) continue;
      if (!subset.match_stat("T" + gamma_label(gammas[c]), stat)) continue;
      stats.push_back(stat);
      columns.push_back(c);
    }
    if (stats.empty()) continue;

    const auto tables =
        simulate_nulls(stats, row.n, row.d, opt.reps, null_seed(opt.seed, row.n, row.d), opt.mc);
    for (std::size_t s = 0; s < stats.size(); ++s) {
      const std::size_t c = columns[s];
      TableEntry e;
      e.row = row_label.str();
      e.column = gamma_label(gammas[c]);
      e.statistic = stats[s].label();
      e.alternative = AlternativeSpec::std_normal(row.d).to_string();
      e.n = row.n;
      e.d = row.d;
      e.reps = opt.reps;
      e.reference = row.values[c];
      e.value = tables[s].critical_value(opt.alpha);
      e.std_error = tables[s].critical_value_std_error(opt.alpha);
      e.deviation = (e.value - e.reference) / e.reference;
      e.tolerance = std::isinf(gammas[c]) ? 0.03 : 0.02;
      e.within_tolerance = std::abs(e.deviation) <= e.tolerance;
      report.entries.push_back(e);
    }
  }
}

void reproduce_power(TableId id, const TableOptions& opt, const Subset& subset,
                     TableReport& report) {
  constexpr Index n = 50;
  const PowerReference& ref = power_reference(id);
  if (!subset.match_integer("n", n) || !subset.match_integer("d", ref.d)) return;
  if (subset.has("gamma")) {
    throw InvalidSpec("subset key gamma applies to the critical-value table; use stat");
  }

  struct Column {
    std::size_t index;
    StatSpec stat;
    bool reduced;  // HM_n runs at a tenth of the replications
    double critical = 0;
    double critical_se = 0;
  };
  std::vector<Column> columns;
  for (std::size_t c = 0; c < ref.columns.size(); ++c) {
    const StatSpec stat = column_statistic(ref.columns[c], opt.hjm_gamma, opt.hj_beta);
    if (!subset.match_stat(ref.columns[c], stat)) continue;
    columns.push_back({c, stat, stat.kind == StatSpec::Kind::HJM});
  }
  std::vector<const PowerReferenceRow*> rows;
  for (const auto& row : ref.rows) {
    if (subset.match_text("row", row.label)) rows.push_back(&row);
  }
  if (columns.empty() || rows.empty()) return;

  const std::uint64_t nseed = null_seed(opt.seed, n, ref.d);
  for (const bool reduced : {false, true}) {
    std::vector<StatSpec> stats;
    std::vector<Column*> owners;
    for (auto& c : columns) {
      if (c.reduced == reduced) {
        stats.push_back(c.stat);
        owners.push_back(&c);
      }
    }
    if (stats.empty()) continue;
    const std::size_t reps = reduced ? opt.critical_reps / 10 : opt.critical_reps;
    const auto tables = simulate_nulls(stats, n, ref.d, reps, nseed, opt.mc);
    for (std::size_t s = 0; s < stats.size(); ++s) {
      owners[s]->critical = tables[s].critical_value(opt.alpha);
      owners[s]->critical_se = tables[s].critical_value_std_error(opt.alpha);
    }
  }

  for (const PowerReferenceRow* row : rows) {
    const AlternativeSpec alt = AlternativeSpec::parse(row->alternative);
    const std::uint64_t pseed = power_seed(opt.seed, alt, n);
    std::map<const Column*, std::pair<double, std::size_t>> power;
    for (const bool reduced : {false, true}) {
      std::vector<StatSpec> stats;
      std::vector<const Column*> owners;
      for (const auto& c : columns) {
        if (c.reduced == reduced) {
          stats.push_back(c.stat);
          owners.push_back(&c);
        }
      }
      if (stats.empty()) continue;
      const std::size_t reps = reduced ? opt.reps / 10 : opt.reps;
      const auto values = simulate_battery(stats, alt, n, reps, pseed, opt.mc);
      for (std::size_t s = 0; s < stats.size(); ++s) {
        const double crit = owners[s]->critical;
        const auto hits = std::count_if(values[s].begin(), values[s].end(),
                                        [&](double v) { return v > crit; });
        power[owners[s]] = {static_cast<double>(hits) / static_cast<double>(reps), reps};
      }
    }
    for (const auto& c : columns) {
      const auto [p, reps] = power.at(&c);
      TableEntry e;
      e.row = row->label;
      e.column = ref.columns[c.index];
      e.statistic = c.stat.label();
      e.alternative = alt.to_string();
      e.n = n;
      e.d = ref.d;
      e.reps = reps;
      e.reference = row->percent[c.index] / 100.0;
      e.value = p;
      e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
      e.deviation = e.value - e.reference;
      e.tolerance = 0.02;
      e.within_tolerance = std::abs(e.deviation) <= e.tolerance;
      report.entries.push_back(e);
    }
  }
}

}  // namespace

TableReport reproduce_table(TableId id, const TableOptions& options) {
  if (options.reps < 1000) throw InvalidSpec("reproduce_table: reps must be at least 1000");
  if (id != TableId::T2 && options.critical_reps < 1000) {
    throw InvalidSpec("reproduce_table: critical_reps must be at least 1000");
  }
  const Subset subset(options.subset);
  TableReport report;
  report.id = id;
  report.options = options;
  if (id == TableId::T2) {
    reproduce_critical(options, subset, report);
  } else {
    reproduce_power(id, options, subset, report);
  }
  return report;
}

}  // namespace mgfnorm
