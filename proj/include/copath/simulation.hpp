#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copath/copula.hpp"
#include "copath/dataset.hpp"
#include "copath/evaluation.hpp"
#include "copath/report.hpp"

namespace copath {

enum class Level { Low, Medium, High, Custom };

std::string level_name(Level level);
/// "low", "medium" or "high"; throws Errc::InvalidArgument otherwise.
Level parse_level(const std::string& name);

/// Correlation structure over (y, x1..xp) for one of the six built-in designs.
CorrelationMatrix builtin_sigma(int p, Level level);

struct BuiltinScenario {
  int p;
  Level level;
  CorrelationMatrix sigma;
};

std::vector<BuiltinScenario> builtin_scenarios();

struct Scenario {
  int p = 2;
  Level level = Level::Low;
  CorrelationMatrix sigma = builtin_sigma(2, Level::Low);
  Eigen::Index n = 100;
  int replications = 20;
  std::uint64_t seed = 1;
};

Scenario make_scenario(int p, Level level, Eigen::Index n, int replications = 20,
                       std::uint64_t seed = 1);
Scenario make_scenario(const CorrelationMatrix& sigma, Eigen::Index n, int replications = 20,
                       std::uint64_t seed = 1);

struct StudyOptions {
  std::size_t k = 5;
  std::vector<Method> methods{Method::classical(), Method::gaussian_copula()};
  CvOptions cv;
  /// Drop replications (simulation) or fail (real data) when any column's KS
  /// p-value falls below ks_level.
  bool strict_ks = false;
  double ks_level = 0.01;
};

/// sample -> standardize -> KS check -> k-fold CV for every method, repeated
/// and averaged over the scenario's replications.
Report run_scenario(const Scenario& scenario, const StudyOptions& options = {});

/// Same pipeline for one observed dataset (column 0 is Y). `header` describes
/// the source and lands under "dataset" in the report.
Report analyze_dataset(const Dataset& data, std::uint64_t seed, const StudyOptions& options = {},
                       Json header = Json::object());

}  // namespace copath
