#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qb/quadrature.hpp"
#include "qb/reflection_group.hpp"

namespace qb {

/// Largest truncation accepted by run_experiment (d <= 3).
inline constexpr int kMaxTruncation = 16;
inline constexpr std::size_t kMaxExperimentDim = 3;

/// One experiment. Symbols are keyed by role ("u", "v", "q", "f1", ...) and
/// stored in their JSON form: a term list or an expression string.
struct ExperimentConfig {
  std::string name;
  std::string kind;
  nlohmann::json group = "S2";
  std::vector<double> alpha;  // empty: zeros
  int truncation = 8;
  QuadratureOrders orders;
  bool orders_set = false;
  std::map<std::string, nlohmann::json> symbols;
  std::string character;  // optional, kinds that act on one isotypic component
  std::vector<Point> points;
  std::map<std::string, double> tolerances;  // overrides
  bool expect_fail = false;
  std::uint64_t seed = 1;
  int samples = 0;  // 0: kind default
  std::string output;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Reads either a single experiment or {"experiments": [...]} (shared keys at
/// the top level are inherited). Throws usage errors.
std::vector<ExperimentConfig> parse_config(const nlohmann::json& j);
std::vector<ExperimentConfig> load_config(const std::string& path);

/// "S2", "S_3", "Z3", "Z/2xZ/3", or a group JSON object.
ReflectionGroup group_from_spec(const nlohmann::json& spec);

/// Default tolerances by name.
const std::map<std::string, double>& default_tolerances();

enum class CheckStatus { pass, pass_with_warning, fail, expected_fail, unexpected_pass };
const char* to_string(CheckStatus s);
CheckStatus check_status_from_string(const std::string& s);

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool expect_fail = false;
  bool warning = false;
  CheckStatus status = CheckStatus::pass;
  bool ok() const {
    return status == CheckStatus::pass || status == CheckStatus::pass_with_warning ||
           status == CheckStatus::expected_fail;
  }
};

/// Classifies a residual against a tolerance. A quadrature warning keeps a
/// passing check only while the residual is below 10x the tolerance.
Check make_check(std::string name, double residual, double tolerance, bool expect_fail = false, bool warning = false);

struct Report {
  std::string experiment;
  std::string kind;
  std::string group;
  bool expect_fail = false;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  double wall_time = 0.0;
  std::size_t threads = 0;

  bool passed() const;
  std::size_t pass_count() const;
  /// Deterministic content; wall time and thread count live under "metadata".
  nlohmann::json to_json(bool include_metadata = true) const;
};

Report run_experiment(const ExperimentConfig& cfg);
/// Runs experiments in parallel; reports come back in config order.
std::vector<Report> run_batch(const std::vector<ExperimentConfig>& cfgs);

enum class ReportFormat { json, csv, md };
ReportFormat report_format_from_string(const std::string& s);

std::string format_reports(const std::vector<Report>& reports, ReportFormat fmt);
/// Writes to `path`, or stdout when path is empty or "-". Throws io errors.
void emit_report(const std::vector<Report>& reports, ReportFormat fmt, const std::string& path);

/// Flattened CSV row: one per check.
struct CsvRow {
  std::string experiment;
  std::string kind;
  std::string check;
  double residual = 0.0;
  double tolerance = 0.0;
  bool expect_fail = false;
  bool warning = false;
  CheckStatus status = CheckStatus::pass;
  bool operator==(const CsvRow&) const = default;
};
std::vector<CsvRow> flatten(const std::vector<Report>& reports);
std::vector<CsvRow> parse_report_csv(const std::string& text);

/// 0 when every report passes, 1 otherwise.
int exit_code(const std::vector<Report>& reports);

}  // namespace qb
