#include "copath/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "copath/dataio.hpp"
#include "copath/error.hpp"
#include "copath/simulation.hpp"

namespace copath {
namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirEnv = "COPATH_OUTPUT_DIR";

struct CommonFlags {
  std::uint64_t seed = 1;
  std::size_t k = 5;
  std::vector<std::string> methods{"classical", "gaussian_copula"};
  double nu = 4.0;
  std::string out;
  std::string format = "auto";
  bool refit_on_test = false;
  bool conventional_ic = false;
  bool strict_ks = false;
  double ks_level = 0.01;
  std::optional<int> k_params;
  std::size_t mc_draws = 20000;
  std::string marginals = "normal";
};

struct SimulateFlags {
  int p = 2;
  std::string level = "low";
  long n = 100;
  std::string sigma_file;
  int reps = 20;
};

struct FitFlags {
  std::string csv;
  std::string y;
  std::vector<std::string> x;
};

struct KsFlags {
  std::string csv;
  std::vector<std::string> columns;
  std::string out;
  double level = 0.01;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Base seed; every fold and replication stream derives from it");
  cmd->add_option("--k", f.k, "Number of cross-validation folds")->check(CLI::Range(2, 1000));
  cmd->add_option("--methods,--method", f.methods,
                  "Methods to report: classical, gaussian_copula, t_copula")
      ->delimiter(',');
  cmd->add_option("--nu", f.nu, "Degrees of freedom for t_copula (> 1)");
  cmd->add_option("--out", f.out,
                  "Output path (a directory for csv); relative paths resolve against $" +
                      std::string(kOutputDirEnv) + ". Markdown goes to stdout when omitted");
  cmd->add_option("--format", f.format, "json, csv, markdown or auto (from the --out extension)");
  cmd->add_flag("--refit-on-test", f.refit_on_test,
                "Re-estimate copula models on each test fold");
  cmd->add_flag("--conventional-ic", f.conventional_ic, "Use -2 LL + penalty for AIC/BIC");
  cmd->add_flag("--strict-ks", f.strict_ks, "Reject data whose columns fail the KS normality check");
  cmd->add_option("--ks-level", f.ks_level, "Significance level of the KS check");
  cmd->add_option("--k-params", f.k_params, "Parameter count for AIC/BIC (default p + 1)");
  cmd->add_option("--mc-draws", f.mc_draws, "Monte Carlo draws for copula predictions")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--marginals", f.marginals, "Marginal fit for copula methods: normal or empirical");
}

StudyOptions study_options(const CommonFlags& f) {
  StudyOptions o;
  o.k = f.k;
  o.methods.clear();
  for (const auto& name : f.methods) {
    const Method m = parse_method(name, f.nu);
    if (std::find(o.methods.begin(), o.methods.end(), m) == o.methods.end()) o.methods.push_back(m);
  }
  if (o.methods.empty()) fail(Errc::InvalidArgument, "--methods must name at least one method");
  o.cv.k_params = f.k_params;
  o.cv.ic_mode = f.conventional_ic ? IcMode::Conventional : IcMode::Additive;
  o.cv.refit_on_test = f.refit_on_test;
  if (f.marginals == "normal")
    o.cv.marginal_fit = MarginalFit::Normal;
  else if (f.marginals == "empirical")
    o.cv.marginal_fit = MarginalFit::Empirical;
  else
    fail(Errc::InvalidArgument, "--marginals must be normal or empirical");
  o.cv.mc.n_draws = f.mc_draws;
  o.strict_ks = f.strict_ks;
  o.ks_level = f.ks_level;
  if (!(f.ks_level > 0.0 && f.ks_level < 1.0))
    fail(Errc::InvalidArgument, "--ks-level must lie in (0, 1)");
  return o;
}

fs::path resolve_out(const std::string& out) {
  fs::path path(out);
  if (path.is_relative())
    if (const char* base = std::getenv(kOutputDirEnv); base && *base) path = fs::path(base) / path;
  return path;
}

Format resolve_format(const std::string& format, const std::string& out) {
  if (format != "auto") return parse_format(format);
  const auto ext = fs::path(out).extension().string();
  if (ext == ".md" || ext == ".markdown") return Format::Markdown;
  if (ext == ".csv" || ext.empty()) return out.empty() ? Format::Markdown : Format::Csv;
  return Format::Json;
}

void emit(const Report& report, const CommonFlags& f, std::ostream& out) {
  const Format format = resolve_format(f.format, f.out);
  if (f.out.empty()) {
    const auto docs = emit_tables(report, format);
    for (const auto& [name, text] : docs) {
      if (docs.size() > 1) out << "# " << name << "\n";
      out << text;
      if (!text.empty() && text.back() != '\n') out << "\n";
    }
    return;
  }
  write_report(report, resolve_out(f.out), format);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::MissingColumn:
    case Errc::IoError:
    case Errc::EmptyFile:
    case Errc::UnsupportedFormat:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

int cmd_simulate(const SimulateFlags& s, const CommonFlags& f, bool p_given, std::ostream& out) {
  if (s.n < 20) fail(Errc::InvalidArgument, "--n must be at least 20");
  if (s.reps < 1) fail(Errc::InvalidArgument, "--reps must be positive");
  Scenario scenario;
  if (!s.sigma_file.empty()) {
    CorrelationMatrix sigma(read_matrix(s.sigma_file));
    if (p_given && sigma.dim() != s.p + 1)
      fail(Errc::InvalidArgument, "--p " + std::to_string(s.p) + " does not match the " +
                                      std::to_string(sigma.dim()) + "x" +
                                      std::to_string(sigma.dim()) + " matrix in " + s.sigma_file);
    scenario = make_scenario(sigma, s.n, s.reps, f.seed);
  } else {
    scenario = make_scenario(s.p, parse_level(s.level), s.n, s.reps, f.seed);
  }
  emit(run_scenario(scenario, study_options(f)), f, out);
  return kExitOk;
}

int cmd_fit(const FitFlags& fit, const CommonFlags& f, std::ostream& out) {
  const auto options = study_options(f);
  const Dataset data = read_csv(fit.csv, fit.y, fit.x);
  Json header{{"source", fs::path(fit.csv).filename().string()}};
  emit(analyze_dataset(data, f.seed, options, std::move(header)), f, out);
  return kExitOk;
}

int cmd_ks_check(const KsFlags& ks, std::ostream& out) {
  if (!(ks.level > 0.0 && ks.level < 1.0)) fail(Errc::InvalidArgument, "--level must lie in (0, 1)");
  const auto prepared = prepare(read_csv_columns(ks.csv, ks.columns));
  std::ostringstream table;
  table << "| column | n | D | p-value | normal at " << format_number(ks.level) << " |\n"
        << "|---|---|---|---|---|\n";
  for (std::size_t j = 0; j < prepared.ks.size(); ++j) {
    const auto& r = prepared.ks[j];
    const bool pass = r.p_value >= ks.level;
    table << "| " << prepared.data.names()[j] << " | " << r.n << " | " << format_number(r.statistic)
          << " | " << format_number(r.p_value) << " | " << (pass ? "yes" : "no") << " |\n";
  }
  if (ks.out.empty()) {
    out << table.str();
  } else {
    const fs::path path = resolve_out(ks.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!(file << table.str())) fail(Errc::IoError, "cannot write " + path.string());
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direct, indirect and total path effects under OLS and copula regression", "copath"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 2 usage or unreadable input, 3 numeric or data failure.\n"
             "Relative --out paths resolve against $" + std::string(kOutputDirEnv) + " when set.");
  app.option_defaults()->always_capture_default();

  CommonFlags common;
  SimulateFlags sim;
  FitFlags fit;
  KsFlags ks;

  auto* simulate = app.add_subcommand("simulate", "Run a simulated scenario with k-fold cross-validation");
  auto* p_opt = simulate->add_option("--p", sim.p, "Number of exogenous variables (2 or 3 built in)");
  simulate->add_option("--level", sim.level, "Correlation level: low, medium or high");
  simulate->add_option("--n", sim.n, "Sample size per replication (>= 20)");
  simulate->add_option("--sigma-file", sim.sigma_file,
                       "Correlation matrix over (y, x1..xp) replacing the built-in scenario");
  simulate->add_option("--reps", sim.reps, "Replications averaged into the report");
  add_common(simulate, common);

  auto* fitcmd = app.add_subcommand("fit", "Fit both regression approaches to a CSV file");
  fitcmd->add_option("--csv", fit.csv, "Input CSV with a header row")->required();
  fitcmd->add_option("--y", fit.y, "Endogenous column")->required();
  fitcmd->add_option("--x", fit.x, "Exogenous columns, comma separated")->required()->delimiter(',');
  add_common(fitcmd, common);

  auto* kscmd = app.add_subcommand("ks-check", "Standardize columns and test each for normality");
  kscmd->add_option("--csv", ks.csv, "Input CSV with a header row")->required();
  kscmd->add_option("--columns", ks.columns, "Columns to check (default all), comma separated")
      ->delimiter(',');
  kscmd->add_option("--level", ks.level, "Significance level");
  kscmd->add_option("--out", ks.out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    const auto used = app.get_subcommands();
    err << (used.empty() ? app.help() : used.front()->help());
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, common, p_opt->count() > 0, out);
    if (fitcmd->parsed()) return cmd_fit(fit, common, out);
    return cmd_ks_check(ks, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const int code = exit_code_for(e.code());
    if (code == kExitUsage && e.code() == Errc::InvalidArgument) err << "Run with --help for usage.\n";
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitNumeric;
  }
}

}  // namespace copath
