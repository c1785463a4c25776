#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copath/linalg.hpp"

namespace copath {

/// Named numeric columns with row-aligned observations. Modeling code keeps
/// the endogenous variable in column 0 and the exogenous ones after it.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> names, MatrixXd values, bool standardized = false);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  const std::vector<std::string>& names() const { return names_; }
  const MatrixXd& values() const { return values_; }
  bool standardized() const { return standardized_; }

  std::optional<Eigen::Index> find(const std::string& name) const;
  /// Index of `name`; throws Errc::MissingColumn when absent.
  Eigen::Index index_of(const std::string& name) const;

  auto col(Eigen::Index j) const { return values_.col(j); }
  auto col(const std::string& name) const { return values_.col(index_of(name)); }

  /// Reorders to (endogenous, exogenous...) keeping only those columns.
  Dataset select(const std::string& endogenous,
                 const std::vector<std::string>& exogenous) const;
  Dataset select(const std::vector<std::string>& columns) const;
  Dataset rows_subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> names_;
  MatrixXd values_;
  bool standardized_ = false;
};

}  // namespace copath
