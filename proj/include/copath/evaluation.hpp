#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copath/dataset.hpp"
#include "copath/linalg.hpp"
#include "copath/patheffects.hpp"
#include "copath/regression.hpp"

namespace copath {

template <typename DerivedA, typename DerivedB>
double mse(const Eigen::MatrixBase<DerivedA>& y, const Eigen::MatrixBase<DerivedB>& yhat) {
  if (y.size() != yhat.size()) fail(Errc::LengthMismatch, "mse: length mismatch");
  if (y.size() == 0) fail(Errc::LengthMismatch, "mse: empty input");
  return (y - yhat).squaredNorm() / static_cast<double>(y.size());
}

enum class IcMode {
  Additive,      // aic = n LL + 2k,   bic = n LL + k log n
  Conventional,  // aic = -2 n LL + 2k, bic = -2 n LL + k log n
};

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
  /// Average per-observation Gaussian log-density at the MLE variance.
  double mean_log_likelihood = 0.0;
  std::size_t n = 0;
};

InformationCriteria information_criteria(const VectorXd& residuals, int k_params,
                                         IcMode mode = IcMode::Additive);

struct FoldSplit {
  int fold_id = 1;  // 1..k
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Shuffles 0..n-1 with `seed` and cuts contiguous test blocks; the first
/// n % k folds hold one extra row.
std::vector<FoldSplit> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

enum class Partition { Train, Test };
const char* partition_name(Partition p);

struct CvOptions {
  /// Parameter count for AIC/BIC; defaults to p + 1.
  std::optional<int> k_params;
  IcMode ic_mode = IcMode::Additive;
  /// Re-estimate copula models on the test fold before predicting it.
  bool refit_on_test = false;
  MarginalFit marginal_fit = MarginalFit::Normal;
  McSettings mc;
};

struct PartitionFold {
  double mse = 0.0;
  InformationCriteria ic;
  VectorXd coefficients;
  EffectDecomposition effects;
  /// Pairwise exogenous correlations (upper triangle, row-major).
  std::vector<double> rho_x;
  VectorXd residuals;
};

struct MethodFold {
  int fold_id = 1;
  PartitionFold train;
  PartitionFold test;
};

struct PartitionSummary {
  double mean_mse = 0.0;
  double sd_mse = 0.0;
  double aic = 0.0;  // mean over folds
  double bic = 0.0;
  double aic_pooled = 0.0;  // on residuals pooled across folds
  double bic_pooled = 0.0;
  VectorXd coefficients;  // mean over folds
  std::vector<VariableEffect> effects;
  std::vector<double> rho_x;
};

struct MethodReport {
  Method method;
  std::vector<MethodFold> folds;
  PartitionSummary train;
  PartitionSummary test;

  const PartitionSummary& summary(Partition p) const { return p == Partition::Train ? train : test; }
};

struct CvReport {
  std::string endogenous;
  std::vector<std::string> exogenous;
  std::size_t k = 5;
  int k_params = 0;
  IcMode ic_mode = IcMode::Additive;
  std::vector<FoldSplit> splits;
  std::vector<MethodReport> methods;

  const MethodReport& method(const Method& m) const;
};

/// Fits every method on each training fold and scores train and test
/// partitions. Column 0 of `data` is Y; the rest are exogenous. Fit errors are
/// rethrown with the fold id prepended.
CvReport cross_validate(const Dataset& data, const std::vector<Method>& methods, std::size_t k,
                        std::uint64_t seed, const CvOptions& options = {});

/// Mean and (k - 1)-divisor standard deviation.
std::pair<double, double> mean_and_sd(const std::vector<double>& values);

}  // namespace copath
