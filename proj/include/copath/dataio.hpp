#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "copath/dataset.hpp"
#include "copath/report.hpp"
#include "copath/stats.hpp"

namespace copath {

/// Parses CSV text (header row, comma delimiter, optional RFC 4180 quoting)
/// into rows of raw fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Loads the named columns; Y first, then the exogenous columns in order.
/// Throws Errc::IoError, Errc::EmptyFile, Errc::MissingColumn or
/// Errc::NonNumericCell (message carries the 1-based data row and the column).
Dataset read_csv(const std::filesystem::path& path, const std::string& endogenous,
                 const std::vector<std::string>& exogenous);

/// Loads the given columns, or every column when `columns` is empty.
Dataset read_csv_columns(const std::filesystem::path& path, std::vector<std::string> columns = {});

inline constexpr Eigen::Index kKsMinRows = 8;

struct PreparedData {
  Dataset data;
  std::vector<KsResult> ks;  // one per column; empty below kKsMinRows rows
};

/// Standardizes every column and runs the KS normality check on each.
PreparedData prepare(const Dataset& data);

/// Writes `report`. json and markdown go to `path`; csv treats `path` as a
/// directory and writes one file per table into it.
void write_report(const Report& report, const std::filesystem::path& path, Format format);
void write_report(const Report& report, const std::filesystem::path& path, const std::string& format);

/// Reads a whitespace- or comma-separated square correlation matrix.
MatrixXd read_matrix(const std::filesystem::path& path);

}  // namespace copath
