#include "copath/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "copath/dataio.hpp"
#include "copath/rng.hpp"

namespace copath {
namespace {

MatrixXd from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

const char* ic_mode_name(IcMode m) { return m == IcMode::Additive ? "additive" : "conventional"; }

Json settings_json(const StudyOptions& o, int k_params) {
  Json methods = Json::array();
  for (const auto& m : o.methods) methods.push_back(method_name(m));
  Json s{{"k", o.k},
         {"k_params", k_params},
         {"ic_mode", ic_mode_name(o.cv.ic_mode)},
         {"refit_on_test", o.cv.refit_on_test},
         {"marginals", o.cv.marginal_fit == MarginalFit::Normal ? "normal" : "empirical"},
         {"mc_draws", o.cv.mc.n_draws},
         {"strict_ks", o.strict_ks},
         {"methods", methods}};
  for (const auto& m : o.methods)
    if (m.kind == MethodKind::TCopula) s["nu"] = m.nu;
  return s;
}

struct KsAccumulator {
  std::string column;
  double statistic_sum = 0.0;
  double min_p = 1.0;
  std::size_t n = 0;
  std::size_t failures = 0;
  std::size_t checks = 0;
};

void accumulate_ks(std::vector<KsAccumulator>& acc, const Dataset& data,
                   const std::vector<KsResult>& ks, double level) {
  if (acc.empty())
    for (const auto& name : data.names()) acc.push_back({name});
  for (std::size_t j = 0; j < ks.size(); ++j) {
    acc[j].statistic_sum += ks[j].statistic;
    acc[j].min_p = std::min(acc[j].min_p, ks[j].p_value);
    acc[j].n = ks[j].n;
    acc[j].failures += ks[j].p_value < level ? 1 : 0;
    ++acc[j].checks;
  }
}

PartitionResult average_partition(const std::vector<const PartitionSummary*>& parts) {
  PartitionResult out;
  const double r = static_cast<double>(parts.size());
  const auto p = static_cast<std::size_t>(parts.front()->coefficients.size());
  out.coefficients.assign(p, 0.0);
  out.rho_x.assign(parts.front()->rho_x.size(), 0.0);
  for (const auto& e : parts.front()->effects) out.effects.push_back({e.name, 0.0, 0.0, 0.0});

  std::vector<double> mses;
  std::vector<std::vector<double>> coefs(p);
  for (const auto* s : parts) {
    mses.push_back(s->mean_mse);
    out.indices.sd_mse += s->sd_mse / r;
    out.indices.aic += s->aic / r;
    out.indices.bic += s->bic / r;
    out.indices.aic_pooled += s->aic_pooled / r;
    out.indices.bic_pooled += s->bic_pooled / r;
    for (std::size_t i = 0; i < p; ++i) {
      out.coefficients[i] += s->coefficients(static_cast<Eigen::Index>(i)) / r;
      coefs[i].push_back(s->coefficients(static_cast<Eigen::Index>(i)));
    }
    for (std::size_t j = 0; j < out.rho_x.size(); ++j) out.rho_x[j] += s->rho_x[j] / r;
    for (std::size_t i = 0; i < out.effects.size(); ++i) {
      out.effects[i].direct += s->effects[i].direct / r;
      out.effects[i].indirect += s->effects[i].indirect / r;
    }
  }
  for (auto& e : out.effects) e.total = e.direct + e.indirect;
  std::tie(out.indices.mean_mse, out.mean_mse_sd) = mean_and_sd(mses);
  for (const auto& c : coefs) out.coefficients_sd.push_back(mean_and_sd(c).second);
  return out;
}

Report assemble(const std::vector<CvReport>& reps, const StudyOptions& options) {
  Report report;
  const auto& first = reps.front();
  report.endogenous = first.endogenous;
  report.exogenous = first.exogenous;
  report.settings = settings_json(options, first.k_params);
  for (std::size_t m = 0; m < first.methods.size(); ++m) {
    MethodResult mr;
    mr.method = method_name(first.methods[m].method);
    std::vector<const PartitionSummary*> train;
    std::vector<const PartitionSummary*> test;
    for (const auto& rep : reps) {
      train.push_back(&rep.methods[m].train);
      test.push_back(&rep.methods[m].test);
    }
    mr.train = average_partition(train);
    mr.test = average_partition(test);
    report.methods.push_back(std::move(mr));
  }
  return report;
}

std::vector<KsRow> finish_ks(const std::vector<KsAccumulator>& acc) {
  std::vector<KsRow> rows;
  for (const auto& a : acc)
    rows.push_back({a.column, a.checks ? a.statistic_sum / static_cast<double>(a.checks) : 0.0,
                    a.min_p, a.n, a.failures, a.checks});
  return rows;
}

}  // namespace

std::string level_name(Level level) {
  switch (level) {
    case Level::Low: return "low";
    case Level::Medium: return "medium";
    case Level::High: return "high";
    case Level::Custom: return "custom";
  }
  return "custom";
}

Level parse_level(const std::string& name) {
  if (name == "low") return Level::Low;
  if (name == "medium") return Level::Medium;
  if (name == "high") return Level::High;
  fail(Errc::InvalidArgument, "unknown correlation level '" + name + "'");
}

CorrelationMatrix builtin_sigma(int p, Level level) {
  if (p == 2) {
    switch (level) {
      case Level::Low:
        return CorrelationMatrix(from_rows({{1, 0.3, -0.5}, {0.3, 1, 0.1}, {-0.5, 0.1, 1}}));
      case Level::Medium:
        return CorrelationMatrix(from_rows({{1, 0.5, 0.4}, {0.5, 1, 0.1}, {0.4, 0.1, 1}}));
      case Level::High:
        return CorrelationMatrix(from_rows({{1, 0.6, 0.7}, {0.6, 1, 0.5}, {0.7, 0.5, 1}}));
      case Level::Custom: break;
    }
  } else if (p == 3) {
    switch (level) {
      case Level::Low:
        return CorrelationMatrix(from_rows(
            {{1, 0.3, 0.2, -0.2}, {0.3, 1, -0.1, 0.1}, {0.2, -0.1, 1, 0.2}, {-0.2, 0.1, 0.2, 1}}));
      case Level::Medium:
        return CorrelationMatrix(from_rows(
            {{1, 0.5, 0.4, 0.3}, {0.5, 1, 0.2, 0.1}, {0.4, 0.2, 1, 0.2}, {0.3, 0.1, 0.2, 1}}));
      case Level::High:
        return CorrelationMatrix(from_rows(
            {{1, 0.7, 0.6, 0.6}, {0.7, 1, 0.5, 0.5}, {0.6, 0.5, 1, 0.4}, {0.6, 0.5, 0.4, 1}}));
      case Level::Custom: break;
    }
  }
  fail(Errc::InvalidArgument, "built-in scenarios exist for p in {2, 3} and levels low/medium/high; "
                              "supply a correlation matrix for anything else");
}

std::vector<BuiltinScenario> builtin_scenarios() {
  std::vector<BuiltinScenario> out;
  for (int p : {2, 3})
    for (Level level : {Level::Low, Level::Medium, Level::High})
      out.push_back({p, level, builtin_sigma(p, level)});
  return out;
}

Scenario make_scenario(int p, Level level, Eigen::Index n, int replications, std::uint64_t seed) {
  return Scenario{p, level, builtin_sigma(p, level), n, replications, seed};
}

Scenario make_scenario(const CorrelationMatrix& sigma, Eigen::Index n, int replications,
                       std::uint64_t seed) {
  return Scenario{static_cast<int>(sigma.dim() - 1), Level::Custom, sigma, n, replications, seed};
}

Report run_scenario(const Scenario& s, const StudyOptions& options) {
  if (s.replications < 1) fail(Errc::InvalidArgument, "run_scenario: replications must be positive");
  if (s.sigma.dim() != s.p + 1)
    fail(Errc::DimensionMismatch, "run_scenario: matrix dimension must be p + 1");
  const std::vector<MarginalModel> marginals(static_cast<std::size_t>(s.p + 1),
                                             StandardNormalMarginal{});
  const CopulaSpec spec(GaussianFamily{}, s.sigma, marginals);

  std::vector<CvReport> reps;
  std::vector<int> skipped;
  std::vector<KsAccumulator> ks;
  for (int rep = 0; rep < s.replications; ++rep) {
    const std::uint64_t rep_seed =
        derive_seed(s.seed, {label_key("scenario"), static_cast<std::uint64_t>(s.p),
                             label_key(level_name(s.level)), static_cast<std::uint64_t>(s.n),
                             static_cast<std::uint64_t>(rep)});
    const auto prepared = prepare(sample(spec, s.n, rep_seed));
    accumulate_ks(ks, prepared.data, prepared.ks, options.ks_level);
    const bool rejected = std::any_of(prepared.ks.begin(), prepared.ks.end(),
                                      [&](const KsResult& r) { return r.p_value < options.ks_level; });
    if (options.strict_ks && rejected) {
      skipped.push_back(rep);
      continue;
    }
    try {
      reps.push_back(cross_validate(prepared.data, options.methods, options.k,
                                    derive_seed(rep_seed, {label_key("cv")}), options.cv));
    } catch (const Error& e) {
      throw Error(e.code(), "replication " + std::to_string(rep) + ": " + e.what());
    }
  }
  if (reps.empty()) fail(Errc::Domain, "run_scenario: every replication failed the KS gate");

  Report report = assemble(reps, options);
  report.kind = "simulation";
  Json sigma = Json::array();
  for (Eigen::Index i = 0; i < s.sigma.dim(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < s.sigma.dim(); ++j) row.push_back(s.sigma(i, j));
    sigma.push_back(row);
  }
  report.header = Json{{"p", s.p},
                       {"level", level_name(s.level)},
                       {"n", s.n},
                       {"seed", s.seed},
                       {"replications", s.replications},
                       {"replications_used", reps.size()},
                       {"sigma", sigma}};
  report.ks = finish_ks(ks);
  report.skipped_replications = std::move(skipped);
  return report;
}

Report analyze_dataset(const Dataset& data, std::uint64_t seed, const StudyOptions& options,
                       Json header) {
  const auto prepared = prepare(data);
  std::vector<KsAccumulator> ks;
  accumulate_ks(ks, prepared.data, prepared.ks, options.ks_level);
  if (options.strict_ks)
    for (std::size_t j = 0; j < prepared.ks.size(); ++j)
      if (prepared.ks[j].p_value < options.ks_level)
        fail(Errc::Domain, "column '" + data.names()[j] + "' fails the KS normality gate (p = " +
                               std::to_string(prepared.ks[j].p_value) + ")");
  const auto cv = cross_validate(prepared.data, options.methods, options.k, seed, options.cv);
  Report report = assemble({cv}, options);
  report.kind = "fit";
  header["n"] = data.rows();
  header["seed"] = seed;
  report.header = std::move(header);
  report.ks = finish_ks(ks);
  return report;
}

}  // namespace copath
