#include "copath/dataset.hpp"

#include <set>

namespace copath {

Dataset::Dataset(std::vector<std::string> names, MatrixXd values, bool standardized)
    : names_(std::move(names)), values_(std::move(values)), standardized_(standardized) {
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols())
    fail(Errc::DimensionMismatch, "Dataset: column name count does not match column count");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) fail(Errc::SchemaMismatch, "Dataset: duplicate column name '" + n + "'");
  if (!values_.allFinite()) fail(Errc::Domain, "Dataset: non-finite entry");
}

std::optional<Eigen::Index> Dataset::find(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return static_cast<Eigen::Index>(j);
  return std::nullopt;
}

Eigen::Index Dataset::index_of(const std::string& name) const {
  if (auto j = find(name)) return *j;
  fail(Errc::MissingColumn, "column '" + name + "' not found");
}

Dataset Dataset::select(const std::string& endogenous,
                        const std::vector<std::string>& exogenous) const {
  std::vector<std::string> cols{endogenous};
  cols.insert(cols.end(), exogenous.begin(), exogenous.end());
  return select(cols);
}

Dataset Dataset::select(const std::vector<std::string>& columns) const {
  MatrixXd out(rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = col(columns[j]);
  return Dataset(columns, std::move(out), standardized_);
}

Dataset Dataset::rows_subset(std::span<const std::size_t> indices) const {
  MatrixXd out(static_cast<Eigen::Index>(indices.size()), cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= static_cast<std::size_t>(rows()))
      fail(Errc::DimensionMismatch, "Dataset::rows_subset: row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(indices[i]));
  }
  return Dataset(names_, std::move(out), false);
}

}  // namespace copath
