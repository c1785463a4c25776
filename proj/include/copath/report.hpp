#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace copath {

using Json = nlohmann::ordered_json;

struct IndexSummary {
  double mean_mse = 0.0;
  double sd_mse = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double aic_pooled = 0.0;
  double bic_pooled = 0.0;
};

struct EffectRow {
  std::string var;
  double direct = 0.0;
  double indirect = 0.0;
  double total = 0.0;
};

struct PartitionResult {
  IndexSummary indices;
  std::vector<double> coefficients;
  std::vector<EffectRow> effects;
  /// Pairwise exogenous correlations, upper triangle in row-major order.
  std::vector<double> rho_x;
  /// Spread across replications (zero for a single dataset).
  double mean_mse_sd = 0.0;
  std::vector<double> coefficients_sd;
};

struct MethodResult {
  std::string method;
  PartitionResult train;
  PartitionResult test;
};

struct KsRow {
  std::string column;
  double statistic = 0.0;  // mean over checks
  double p_value = 1.0;    // smallest over checks
  std::size_t n = 0;
  std::size_t failures = 0;  // checks below the KS level
  std::size_t checks = 0;
};

/// Result of a simulated scenario or a real-data fit, in the layout of the
/// index / coefficient / effect tables.
struct Report {
  std::string kind;  // "simulation" or "fit"
  Json header;       // scenario or dataset description
  Json settings;
  std::string endogenous;
  std::vector<std::string> exogenous;
  std::vector<MethodResult> methods;
  std::vector<KsRow> ks;
  std::vector<int> skipped_replications;

  const MethodResult& method(const std::string& name) const;
};

enum class Format { Json, Csv, Markdown };

/// "json", "csv", "markdown" or "md"; throws Errc::UnsupportedFormat otherwise.
Format parse_format(const std::string& name);

Json to_json(const Report& report);
Report report_from_json(const Json& j);

/// Named documents for `format`: one for json and markdown, one per table for csv.
std::vector<std::pair<std::string, std::string>> emit_tables(const Report& report, Format format);

/// Six significant digits, "NA" for non-finite values.
std::string format_number(double v);
/// RFC 4180 quoting when needed.
std::string csv_field(const std::string& s);

}  // namespace copath
