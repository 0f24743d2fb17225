#include "mgfnorm/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgfnorm/battery.hpp"
#include "mgfnorm/csv.hpp"
#include "mgfnorm/detail/text.hpp"
#include "mgfnorm/errors.hpp"
#include "mgfnorm/montecarlo.hpp"
#include "mgfnorm/reproduce.hpp"

namespace mgfnorm::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kDefaultGammas = {"2.5", "3", "4", "5", "7", "10", "inf"};

struct Common {
  std::vector<std::string> gammas;
  std::vector<std::string> stats;
  double alpha = 0.05;
  std::size_t reps = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string cache_dir;
  bool allow_small_gamma = false;
  unsigned threads = 0;
};

struct Report {
  std::string command;
  json config;
  std::vector<std::string> columns;
  std::vector<json> rows;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Infinity has no JSON literal; it is written as the string "inf".
json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

std::string cell_text(const json& v, bool exact) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  const double x = v.get<double>();
  if (exact) return detail::format_shortest(x);
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_report(const Report& report, const Common& common, std::ostream& out) {
  if (common.format == "json") {
    json doc;
    doc["command"] = report.command;
    doc["config"] = report.config;
    doc["results"] = report.rows;
    doc["provenance"] = {
        {"software", "mgfnorm"},
        {"version", std::string(kVersion)},
        {"algorithm", std::string(SeededStream::algorithm)},
        {"seed", common.seed},
        {"reps", common.reps},
        {"timestamp", utc_timestamp()},
    };
    out << doc.dump(2) << '\n';
    return;
  }
  if (common.format == "csv") {
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      out << (c ? "," : "") << report.columns[c];
    }
    out << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t c = 0; c < report.columns.size(); ++c) {
        out << (c ? "," : "") << csv_quote(cell_text(row.value(report.columns[c], json()), true));
      }
      out << '\n';
    }
    return;
  }
  // text
  std::vector<std::size_t> width(report.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < report.columns.size(); ++c) width[c] = report.columns[c].size();
  for (const auto& row : report.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
      line.push_back(cell_text(row.value(report.columns[c], json()), false));
      width[c] = std::max(width[c], line.back().size());
    }
  }
  auto print = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << line[c];
    }
    out << '\n';
  };
  print(report.columns);
  for (const auto& line : cells) print(line);
}

MCOptions mc_options(const Common& common) {
  MCOptions mc;
  mc.threads = common.threads;
  if (!common.cache_dir.empty()) mc.cache_dir = common.cache_dir;
  return mc;
}

std::vector<StatSpec> battery(const Common& common, bool default_gammas) {
  std::vector<std::string> gammas = common.gammas;
  if (gammas.empty() && common.stats.empty() && default_gammas) gammas = kDefaultGammas;
  std::vector<StatSpec> out;
  for (const auto& g : gammas) {
    StatSpec s = StatSpec::t(detail::parse_double(g, "--gamma"));
    s.allow_small_gamma = common.allow_small_gamma;
    out.push_back(s);
  }
  for (const auto& label : common.stats) {
    StatSpec s = StatSpec::parse(label);
    s.allow_small_gamma = common.allow_small_gamma;
    out.push_back(s);
  }
  if (out.empty()) throw InvalidSpec("no statistic selected (use --gamma or --stat)");
  return out;
}

json tuning_json(const StatSpec& s) {
  if (s.kind == StatSpec::Kind::TLimit) return "inf";
  return s.tuning ? json(*s.tuning) : json(nullptr);
}

std::string convention(const StatSpec& s) {
  switch (s.kind) {
    case StatSpec::Kind::T:
      return "16 gamma^(2+d/2) / pi^(d/2) * T";
    case StatSpec::Kind::TLimit:
      return "100 * (2 b1 + btilde1), gamma = inf limit";
    case StatSpec::Kind::MardiaSkew:
      return "n b1 / 6";
    case StatSpec::Kind::MardiaKurt:
      return "|z|";
    default:
      return "raw";
  }
}

json common_config(const Common& c) {
  return {{"alpha", c.alpha},        {"reps", c.reps},
          {"seed", c.seed},          {"gamma", c.gammas},
          {"stat", c.stats},         {"format", c.format},
          {"allow_small_gamma", c.allow_small_gamma}};
}

Report cmd_test(const Common& common, const std::string& input) {
  const CsvData csv = read_csv_file(input);
  const DataMatrix<double> data(csv.values);
  const ResidualSet<double> res = scaled_residuals(data);
  const auto stats = battery(common, true);
  const MCOptions mc = mc_options(common);

  Report r;
  r.command = "test";
  r.config = common_config(common);
  r.config["input"] = input;
  r.config["n"] = data.n();
  r.config["d"] = data.d();
  r.columns = {"statistic", "gamma", "convention", "value", "scaled", "p_value", "std_error"};
  for (const auto& s : stats) {
    s.validate(data.d());
    const StatValue v = evaluate(s, res);
    const MCResult p = mc_p_value(s, v.scaled, data.n(), data.d(), common.reps, common.seed, mc);
    r.rows.push_back({{"statistic", s.label()},
                      {"gamma", tuning_json(s)},
                      {"convention", convention(s)},
                      {"value", number(v.raw)},
                      {"scaled", number(v.scaled)},
                      {"p_value", number(p.value)},
                      {"std_error", number(p.std_error)}});
  }
  return r;
}

Report cmd_critvals(const Common& common, Index n, Index d) {
  const auto stats = battery(common, true);
  const MCOptions mc = mc_options(common);
  Report r;
  r.command = "critvals";
  r.config = common_config(common);
  r.config["n"] = n;
  r.config["d"] = d;
  r.columns = {"statistic", "gamma", "convention", "n", "d", "alpha", "reps",
               "critical_value", "std_error", "reference"};
  for (const auto& s : stats) {
    const MCResult cv = estimate_critical_value(s, n, d, common.alpha, common.reps, common.seed, mc);
    json row = {{"statistic", s.label()}, {"gamma", tuning_json(s)},
                {"convention", convention(s)}, {"n", n}, {"d", d}, {"alpha", common.alpha},
                {"reps", cv.reps}, {"critical_value", number(cv.value)},
                {"std_error", number(cv.std_error)}, {"reference", nullptr}};
    if (common.alpha == 0.05 &&
        (s.kind == StatSpec::Kind::T || s.kind == StatSpec::Kind::TLimit)) {
      const double g = s.kind == StatSpec::Kind::T ? *s.tuning : INFINITY;
      try {
        row["reference"] = critical_value_reference(n, d, g);
      } catch (const InvalidSpec&) {
      }
    }
    r.rows.push_back(row);
  }
  return r;
}

Report cmd_power(const Common& common, const std::string& alt_text, Index n,
                 std::size_t critical_reps) {
  const AlternativeSpec alt = AlternativeSpec::parse(alt_text);
  const auto stats = battery(common, true);
  const MCOptions mc = mc_options(common);
  Report r;
  r.command = "power";
  r.config = common_config(common);
  r.config["alt"] = alt.to_string();
  r.config["n"] = n;
  r.config["critical_reps"] = critical_reps;
  r.columns = {"statistic", "gamma", "alternative", "n", "d", "alpha", "reps",
               "critical_value", "power", "std_error"};
  for (const auto& s : stats) {
    PowerOptions po;
    po.critical_reps = critical_reps;
    const MCResult p = estimate_power(s, alt, n, common.alpha, common.reps, common.seed, po, mc);
    r.rows.push_back({{"statistic", s.label()}, {"gamma", tuning_json(s)},
                      {"alternative", p.alternative}, {"n", n}, {"d", alt.d},
                      {"alpha", common.alpha}, {"reps", p.reps},
                      {"critical_value", number(p.critical_value)}, {"power", number(p.value)},
                      {"std_error", number(p.std_error)}});
  }
  return r;
}

Report cmd_tables(const Common& common, const std::string& table, const std::string& subset,
                  std::size_t critical_reps, double hjm_gamma) {
  const TableId id = parse_table_id(table);
  TableOptions opt;
  opt.reps = common.reps;
  opt.seed = common.seed;
  opt.alpha = common.alpha;
  opt.critical_reps = critical_reps;
  opt.hjm_gamma = hjm_gamma;
  opt.subset = subset;
  opt.mc = mc_options(common);
  const TableReport rep = reproduce_table(id, opt);

  Report r;
  r.command = "tables";
  r.config = common_config(common);
  r.config["table"] = std::string(to_string(id));
  r.config["subset"] = subset;
  r.config["critical_reps"] = critical_reps;
  r.config["hjm_gamma"] = hjm_gamma;
  r.config["hj_beta"] = opt.hj_beta;
  r.columns = {"table", "row", "column", "statistic", "alternative", "n", "d", "reps",
               "reference", "value", "std_error", "deviation", "tolerance", "within_tolerance"};
  for (const auto& e : rep.entries) {
    r.rows.push_back({{"table", std::string(to_string(id))}, {"row", e.row}, {"column", e.column},
                      {"statistic", e.statistic}, {"alternative", e.alternative}, {"n", e.n},
                      {"d", e.d}, {"reps", e.reps}, {"reference", number(e.reference)},
                      {"value", number(e.value)}, {"std_error", number(e.std_error)},
                      {"deviation", number(e.deviation)}, {"tolerance", number(e.tolerance)},
                      {"within_tolerance", e.within_tolerance}});
  }
  return r;
}

void add_common(CLI::App& sub, Common& c, std::size_t default_reps, bool with_battery) {
  c.reps = default_reps;
  if (with_battery) {
    sub.add_option("--gamma", c.gammas, "Tuning values of T (inf selects the limit statistic)")
        ->delimiter(',');
    sub.add_option("--stat", c.stats, "Statistics: T:<g>, Z:<g>, HZ[:<g>], HJ:<b>, HJM:<g>, EN, MS, MK")
        ->delimiter(',');
    sub.add_flag("--allow-small-gamma", c.allow_small_gamma, "Permit 0 < gamma <= 2 for T");
  }
  sub.add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  sub.add_option("--reps", c.reps, "Monte Carlo replications")->capture_default_str();
  sub.add_option("--seed", c.seed, "Base seed")->capture_default_str();
  sub.add_option("--out", c.out, "Write the report to this file");
  sub.add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  sub.add_option("--cache-dir", c.cache_dir, "Directory for cached null tables");
  sub.add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine invariant tests of multivariate normality based on the moment generating function"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common test_c, crit_c, power_c, tables_c;
  std::string input;
  Index crit_n = 50, crit_d = 1, power_n = 50;
  std::string alt;
  std::size_t power_crit_reps = 100000, tables_crit_reps = 100000;
  std::string table, subset;
  double hjm_gamma = default_hjm_table_gamma();

  auto* test = app.add_subcommand("test", "Test a CSV data set for normality with Monte Carlo p-values");
  test->add_option("input", input, "CSV file, one observation per row")->required();
  add_common(*test, test_c, 10000, true);

  auto* crit = app.add_subcommand("critvals", "Monte Carlo critical values under N_d(0, I)");
  crit->add_option("--n", crit_n, "Sample size")->capture_default_str();
  crit->add_option("--d", crit_d, "Dimension")->capture_default_str();
  add_common(*crit, crit_c, 100000, true);

  auto* power = app.add_subcommand("power", "Monte Carlo power against an alternative");
  power->add_option("--alt", alt, "Alternative, e.g. nmix1:d=2 or chisq:k=5,d=1,iid")->required();
  power->add_option("--n", power_n, "Sample size")->capture_default_str();
  power->add_option("--critical-reps", power_crit_reps, "Null replications for the critical value")
      ->capture_default_str();
  add_common(*power, power_c, 10000, true);

  auto* tables = app.add_subcommand("tables", "Recompute a published table (T2 to T6)");
  tables->add_option("table", table, "Table id")->required();
  tables->add_option("--subset", subset, "Filters such as n=50,d=1 or stat=T10");
  tables->add_option("--critical-reps", tables_crit_reps, "Null replications per statistic")
      ->capture_default_str();
  tables->add_option("--hjm-gamma", hjm_gamma, "Tuning of the HM column")->capture_default_str();
  add_common(*tables, tables_c, 10000, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  const Common* common = nullptr;
  try {
    Report report;
    if (test->parsed()) {
      common = &test_c;
      report = cmd_test(test_c, input);
    } else if (crit->parsed()) {
      common = &crit_c;
      report = cmd_critvals(crit_c, crit_n, crit_d);
    } else if (power->parsed()) {
      common = &power_c;
      report = cmd_power(power_c, alt, power_n, power_crit_reps);
    } else {
      common = &tables_c;
      report = cmd_tables(tables_c, table, subset, tables_crit_reps, hjm_gamma);
    }
    if (common->out.empty()) {
      write_report(report, *common, out);
    } else {
      std::ofstream file(common->out);
      if (!file) {
        err << "error: cannot write " << common->out << '\n';
        return kFailure;
      }
      write_report(report, *common, file);
    }
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const InvalidData& e) {
    err << "invalid data: " << e.what() << '\n';
    return kParse;
  } catch (const SingularCovariance& e) {
    err << "singular covariance: " << e.what() << '\n';
    return kSingular;
  } catch (const Error& e) {
    err << "bad request: " << e.what() << '\n';
    return kBadRequest;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace mgfnorm::cli
