#include "copath/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "copath/rng.hpp"
#include "copath/stats.hpp"

namespace copath {

InformationCriteria information_criteria(const VectorXd& residuals, int k_params, IcMode mode) {
  const auto n = static_cast<std::size_t>(residuals.size());
  if (n < 2) fail(Errc::TooFewObservations, "information_criteria: need at least two residuals");
  if (k_params < 1) fail(Errc::InvalidArgument, "information_criteria: k_params must be positive");
  const double sigma2 = residuals.squaredNorm() / static_cast<double>(n);
  if (!(sigma2 > 0.0)) fail(Errc::DegenerateResiduals, "information_criteria: zero residual variance");

  InformationCriteria ic;
  ic.n = n;
  ic.mean_log_likelihood = -0.5 * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
  const double dn = static_cast<double>(n);
  const double fit_term =
      mode == IcMode::Additive ? dn * ic.mean_log_likelihood : -2.0 * dn * ic.mean_log_likelihood;
  ic.aic = fit_term + 2.0 * k_params;
  ic.bic = fit_term + k_params * std::log(dn);
  return ic;
}

std::vector<FoldSplit> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(Errc::Domain, "kfold_split: k must be at least 2");
  if (n < k) fail(Errc::Domain, "kfold_split: n must be at least k");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RandomStream rng(derive_seed(seed, {label_key("kfold")}));
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

  std::vector<FoldSplit> folds;
  folds.reserve(k);
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    FoldSplit split;
    split.fold_id = static_cast<int>(f + 1);
    split.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                              perm.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(split.test_indices.begin(), split.test_indices.end());
    std::vector<bool> in_test(n, false);
    for (auto i : split.test_indices) in_test[i] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_test[i]) split.train_indices.push_back(i);
    folds.push_back(std::move(split));
    start += size;
  }
  return folds;
}

const char* partition_name(Partition p) { return p == Partition::Train ? "train" : "test"; }

const MethodReport& CvReport::method(const Method& m) const {
  for (const auto& r : methods)
    if (r.method == m) return r;
  fail(Errc::InvalidArgument, "CvReport: method '" + method_name(m) + "' not evaluated");
}

std::pair<double, double> mean_and_sd(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

std::vector<double> upper_triangle(const MatrixXd& m) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

struct PartitionStats {
  VectorXd rho;
  MatrixXd sigma_x;
};

PartitionStats partition_stats(const Dataset& part) {
  const MatrixXd r = pearson_correlation(part.values());
  const Eigen::Index p = r.rows() - 1;
  return {r.col(0).tail(p), r.bottomRightCorner(p, p)};
}

PartitionStats model_stats(const RegressionModel& model) {
  auto part = partition(*model.sigma_hat);
  return {part.rho, part.sigma_x.matrix()};
}

PartitionFold score(const RegressionModel& model, const Dataset& part,
                    const PartitionStats& stats, int k_params, IcMode mode) {
  PartitionFold out;
  const VectorXd yhat = predict(model, part);
  out.residuals = part.col(0) - yhat;
  out.mse = mse(part.col(0), yhat);
  try {
    out.ic = information_criteria(out.residuals, k_params, mode);
  } catch (const Error& e) {
    // An exact fit has no finite likelihood; the MSE is still meaningful.
    if (e.code() != Errc::DegenerateResiduals) throw;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.ic = {nan, nan, nan, static_cast<std::size_t>(out.residuals.size())};
  }
  out.coefficients = model.coefficients.values;
  out.effects = decompose(out.coefficients, stats.sigma_x, stats.rho, model.exogenous);
  out.rho_x = upper_triangle(stats.sigma_x);
  return out;
}

PartitionSummary summarize(const std::vector<MethodFold>& folds, Partition which, int k_params,
                           IcMode mode) {
  PartitionSummary s;
  std::vector<double> mses;
  double aic = 0.0;
  double bic = 0.0;
  std::vector<double> pooled;
  const auto& first = which == Partition::Train ? folds.front().train : folds.front().test;
  s.coefficients = VectorXd::Zero(first.coefficients.size());
  s.rho_x.assign(first.rho_x.size(), 0.0);
  s.effects = first.effects.effects;
  for (auto& e : s.effects) {
    e.direct = e.indirect = e.total = 0.0;
    std::fill(e.via.begin(), e.via.end(), 0.0);
  }
  for (const auto& f : folds) {
    const auto& pf = which == Partition::Train ? f.train : f.test;
    mses.push_back(pf.mse);
    aic += pf.ic.aic;
    bic += pf.ic.bic;
    pooled.insert(pooled.end(), pf.residuals.begin(), pf.residuals.end());
    s.coefficients += pf.coefficients;
    for (std::size_t j = 0; j < s.rho_x.size(); ++j) s.rho_x[j] += pf.rho_x[j];
    for (std::size_t i = 0; i < s.effects.size(); ++i) {
      const auto& e = pf.effects.effects[i];
      s.effects[i].direct += e.direct;
      s.effects[i].indirect += e.indirect;
      for (std::size_t j = 0; j < e.via.size(); ++j) s.effects[i].via[j] += e.via[j];
    }
  }
  const double k = static_cast<double>(folds.size());
  std::tie(s.mean_mse, s.sd_mse) = mean_and_sd(mses);
  s.aic = aic / k;
  s.bic = bic / k;
  const VectorXd pooled_residuals =
      Eigen::Map<const VectorXd>(pooled.data(), static_cast<Eigen::Index>(pooled.size()));
  if (pooled_residuals.squaredNorm() > 0.0) {
    const auto pooled_ic = information_criteria(pooled_residuals, k_params, mode);
    s.aic_pooled = pooled_ic.aic;
    s.bic_pooled = pooled_ic.bic;
  } else {
    s.aic_pooled = s.bic_pooled = std::numeric_limits<double>::quiet_NaN();
  }
  s.coefficients /= k;
  for (auto& v : s.rho_x) v /= k;
  for (auto& e : s.effects) {
    e.direct /= k;
    e.indirect /= k;
    for (auto& v : e.via) v /= k;
    e.total = e.direct + e.indirect;
  }
  return s;
}

}  // namespace

CvReport cross_validate(const Dataset& data, const std::vector<Method>& methods, std::size_t k,
                        std::uint64_t seed, const CvOptions& options) {
  if (data.cols() < 2) fail(Errc::DimensionMismatch, "cross_validate: need Y and at least one X");
  if (methods.empty()) fail(Errc::InvalidArgument, "cross_validate: no methods requested");
  CvReport report;
  report.endogenous = data.names().front();
  report.exogenous.assign(data.names().begin() + 1, data.names().end());
  const int p = static_cast<int>(report.exogenous.size());
  report.k = k;
  report.k_params = options.k_params.value_or(p + 1);
  report.ic_mode = options.ic_mode;
  report.splits = kfold_split(static_cast<std::size_t>(data.rows()), k, seed);

  for (const auto& method : methods) {
    MethodReport mr;
    mr.method = method;
    for (const auto& split : report.splits) {
      try {
        const Dataset train = data.rows_subset(split.train_indices);
        const Dataset test = data.rows_subset(split.test_indices);
        McSettings mc = options.mc;
        mc.seed = derive_seed(seed, {label_key("mc"), static_cast<std::uint64_t>(split.fold_id),
                                     label_key(method_name(method))});
        const RegressionModel model =
            fit(method, train, report.endogenous, report.exogenous, options.marginal_fit, mc);
        const bool copula = method.kind != MethodKind::Classical;

        MethodFold fold;
        fold.fold_id = split.fold_id;
        fold.train = score(model, train, copula ? model_stats(model) : partition_stats(train),
                           report.k_params, options.ic_mode);
        if (copula && options.refit_on_test) {
          const RegressionModel refit_model =
              fit(method, test, report.endogenous, report.exogenous, options.marginal_fit, mc);
          fold.test = score(refit_model, test, model_stats(refit_model), report.k_params,
                            options.ic_mode);
        } else {
          fold.test = score(model, test, partition_stats(test), report.k_params, options.ic_mode);
        }
        mr.folds.push_back(std::move(fold));
      } catch (const Error& e) {
        throw Error(e.code(), "fold " + std::to_string(split.fold_id) + " (" +
                                  method_name(method) + "): " + e.what());
      }
    }
    mr.train = summarize(mr.folds, Partition::Train, report.k_params, options.ic_mode);
    mr.test = summarize(mr.folds, Partition::Test, report.k_params, options.ic_mode);
    report.methods.push_back(std::move(mr));
  }
  return report;
}

}  // namespace copath
