#include "copath/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "copath/error.hpp"

namespace copath {
namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> read_numbers(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_number(x));
  return out;
}

Json indices_json(const IndexSummary& s) {
  return Json{{"mean_mse", number(s.mean_mse)},     {"sd_mse", number(s.sd_mse)},
              {"aic", number(s.aic)},               {"bic", number(s.bic)},
              {"aic_pooled", number(s.aic_pooled)}, {"bic_pooled", number(s.bic_pooled)}};
}

IndexSummary read_indices(const Json& j) {
  return {read_number(j.at("mean_mse")), read_number(j.at("sd_mse")),
          read_number(j.at("aic")),      read_number(j.at("bic")),
          read_number(j.at("aic_pooled")), read_number(j.at("bic_pooled"))};
}

Json effects_json(const std::vector<EffectRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back(Json{{"var", r.var},
                     {"direct", number(r.direct)},
                     {"indirect", number(r.indirect)},
                     {"total", number(r.total)}});
  return a;
}

std::vector<EffectRow> read_effects(const Json& j) {
  std::vector<EffectRow> out;
  for (const auto& r : j)
    out.push_back({r.at("var").get<std::string>(), read_number(r.at("direct")),
                   read_number(r.at("indirect")), read_number(r.at("total"))});
  return out;
}


const PartitionResult& part(const MethodResult& m, bool train) { return train ? m.train : m.test; }

std::string coefficient_label(std::size_t i) { return "P" + std::to_string(i + 1); }

std::vector<std::string> rho_labels(const std::vector<std::string>& exog) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < exog.size(); ++i)
    for (std::size_t j = i + 1; j < exog.size(); ++j) out.push_back(exog[i] + ":" + exog[j]);
  return out;
}

struct IndexField {
  const char* key;
  const char* label;
  double IndexSummary::*member;
};

constexpr IndexField kIndexFields[] = {
    {"mean_mse", "Mean of MSE", &IndexSummary::mean_mse},
    {"sd_mse", "SD of MSE", &IndexSummary::sd_mse},
    {"aic", "AIC", &IndexSummary::aic},
    {"bic", "BIC", &IndexSummary::bic},
    {"aic_pooled", "AIC (pooled)", &IndexSummary::aic_pooled},
    {"bic_pooled", "BIC (pooled)", &IndexSummary::bic_pooled},
};

std::string csv_indices(const Report& r) {
  std::ostringstream os;
  os << "partition,index";
  for (const auto& m : r.methods) os << ',' << csv_field(m.method);
  os << "\r\n";
  for (bool train : {true, false})
    for (const auto& f : kIndexFields) {
      os << (train ? "train" : "test") << ',' << f.key;
      for (const auto& m : r.methods) os << ',' << format_number(part(m, train).indices.*f.member);
      os << "\r\n";
    }
  return os.str();
}

std::string csv_coefficients(const Report& r) {
  std::ostringstream os;
  os << "partition,coefficient,variable";
  for (const auto& m : r.methods) os << ',' << csv_field(m.method);
  os << "\r\n";
  const auto rho_names = rho_labels(r.exogenous);
  for (bool train : {true, false}) {
    const char* pname = train ? "train" : "test";
    for (std::size_t i = 0; i < r.exogenous.size(); ++i) {
      os << pname << ',' << coefficient_label(i) << ',' << csv_field(r.exogenous[i]);
      for (const auto& m : r.methods) os << ',' << format_number(part(m, train).coefficients.at(i));
      os << "\r\n";
    }
    for (std::size_t k = 0; k < rho_names.size(); ++k) {
      os << pname << ",rho," << csv_field(rho_names[k]);
      for (const auto& m : r.methods) os << ',' << format_number(part(m, train).rho_x.at(k));
      os << "\r\n";
    }
  }
  return os.str();
}

std::string csv_effects(const Report& r) {
  std::ostringstream os;
  os << "method,partition,path,direct,indirect,total\r\n";
  for (const auto& m : r.methods)
    for (bool train : {true, false})
      for (const auto& e : part(m, train).effects)
        os << csv_field(m.method) << ',' << (train ? "train" : "test") << ','
           << csv_field(e.var + " -> " + r.endogenous) << ',' << format_number(e.direct) << ','
           << format_number(e.indirect) << ',' << format_number(e.total) << "\r\n";
  return os.str();
}

std::string csv_ks(const Report& r) {
  std::ostringstream os;
  os << "column,statistic,p_value,n,failures,checks\r\n";
  for (const auto& k : r.ks)
    os << csv_field(k.column) << ',' << format_number(k.statistic) << ','
       << format_number(k.p_value) << ',' << k.n << ',' << k.failures << ',' << k.checks << "\r\n";
  return os.str();
}

std::string markdown(const Report& r) {
  std::ostringstream os;
  os << "# " << (r.kind == "simulation" ? "Simulation report" : "Fit report") << "\n\n";
  for (const auto& [key, value] : r.header.items()) os << "- " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  os << "\n## Model evaluation indices\n\n| Partition | Index |";
  for (const auto& m : r.methods) os << ' ' << m.method << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < r.methods.size(); ++i) os << "---:|";
  os << '\n';
  for (bool train : {true, false})
    for (const auto& f : kIndexFields) {
      os << "| " << (train ? "Train" : "Test") << " | " << f.label << " |";
      for (const auto& m : r.methods) os << ' ' << format_number(part(m, train).indices.*f.member) << " |";
      os << '\n';
    }

  os << "\n## Path coefficients\n\n| Partition | Coefficient |";
  for (const auto& m : r.methods) os << ' ' << m.method << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < r.methods.size(); ++i) os << "---:|";
  os << '\n';
  const auto rho_names = rho_labels(r.exogenous);
  for (bool train : {true, false}) {
    for (std::size_t i = 0; i < r.exogenous.size(); ++i) {
      os << "| " << (train ? "Train" : "Test") << " | " << coefficient_label(i) << " ("
         << r.exogenous[i] << ") |";
      for (const auto& m : r.methods) os << ' ' << format_number(part(m, train).coefficients.at(i)) << " |";
      os << '\n';
    }
    for (std::size_t k = 0; k < rho_names.size(); ++k) {
      os << "| " << (train ? "Train" : "Test") << " | rho(" << rho_names[k] << ") |";
      for (const auto& m : r.methods) os << ' ' << format_number(part(m, train).rho_x.at(k)) << " |";
      os << '\n';
    }
  }

  os << "\n## Direct, indirect and total effects\n\n"
        "| Partition | Approach | Path | D.E. | I.E. | T.E. |\n|---|---|---|---:|---:|---:|\n";
  for (bool train : {true, false})
    for (const auto& m : r.methods)
      for (const auto& e : part(m, train).effects)
        os << "| " << (train ? "Train" : "Test") << " | " << m.method << " | " << e.var << " -> "
           << r.endogenous << " | " << format_number(e.direct) << " | " << format_number(e.indirect)
           << " | " << format_number(e.total) << " |\n";

  if (!r.ks.empty()) {
    os << "\n## Kolmogorov-Smirnov normality checks\n\n"
          "| Column | Statistic | p-value | n | KS rejections | Checks |\n"
          "|---|---:|---:|---:|---:|---:|\n";
    for (const auto& k : r.ks)
      os << "| " << k.column << " | " << format_number(k.statistic) << " | "
         << format_number(k.p_value) << " | " << k.n << " | " << k.failures << " | " << k.checks
         << " |\n";
  }
  if (!r.skipped_replications.empty()) {
    os << "\nSkipped replications (KS gate):";
    for (int s : r.skipped_replications) os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

}  // namespace

const MethodResult& Report::method(const std::string& name) const {
  for (const auto& m : methods)
    if (m.method == name) return m;
  fail(Errc::InvalidArgument, "report has no method '" + name + "'");
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "markdown" || name == "md") return Format::Markdown;
  fail(Errc::UnsupportedFormat, "unsupported format '" + name + "'");
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json to_json(const Report& r) {
  Json j;
  j[r.kind == "simulation" ? "scenario" : "dataset"] = r.header;
  j["settings"] = r.settings;
  j["endogenous"] = r.endogenous;
  j["exogenous"] = r.exogenous;
  Json indices, coefficients, effects, correlations, dispersion;
  for (const auto& m : r.methods) {
    for (bool train : {true, false}) {
      const char* pname = train ? "train" : "test";
      const auto& pr = part(m, train);
      indices[m.method][pname] = indices_json(pr.indices);
      coefficients[m.method][pname] = numbers(pr.coefficients);
      effects[m.method][pname] = effects_json(pr.effects);
      correlations[m.method][pname] = numbers(pr.rho_x);
      dispersion[m.method][pname] =
          Json{{"mean_mse_sd", number(pr.mean_mse_sd)}, {"coefficients_sd", numbers(pr.coefficients_sd)}};
    }
  }
  j["indices"] = indices;
  j["coefficients"] = coefficients;
  j["effects"] = effects;
  j["correlations"] = correlations;
  j["dispersion"] = dispersion;
  Json ks = Json::array();
  for (const auto& k : r.ks)
    ks.push_back(Json{{"column", k.column},
                      {"statistic", number(k.statistic)},
                      {"p_value", number(k.p_value)},
                      {"n", k.n},
                      {"failures", k.failures},
                      {"checks", k.checks}});
  j["ks"] = ks;
  j["skipped_replications"] = r.skipped_replications;
  return j;
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    if (j.contains("scenario")) {
      r.kind = "simulation";
      r.header = j.at("scenario");
    } else {
      r.kind = "fit";
      r.header = j.at("dataset");
    }
    r.settings = j.at("settings");
    r.endogenous = j.at("endogenous").get<std::string>();
    r.exogenous = j.at("exogenous").get<std::vector<std::string>>();
    for (const auto& [name, by_part] : j.at("indices").items()) {
      MethodResult m;
      m.method = name;
      for (bool train : {true, false}) {
        const char* pname = train ? "train" : "test";
        PartitionResult& pr = train ? m.train : m.test;
        pr.indices = read_indices(by_part.at(pname));
        pr.coefficients = read_numbers(j.at("coefficients").at(name).at(pname));
        pr.effects = read_effects(j.at("effects").at(name).at(pname));
        pr.rho_x = read_numbers(j.at("correlations").at(name).at(pname));
        const auto& d = j.at("dispersion").at(name).at(pname);
        pr.mean_mse_sd = read_number(d.at("mean_mse_sd"));
        pr.coefficients_sd = read_numbers(d.at("coefficients_sd"));
      }
      r.methods.push_back(std::move(m));
    }
    for (const auto& k : j.at("ks"))
      r.ks.push_back({k.at("column").get<std::string>(), read_number(k.at("statistic")),
                      read_number(k.at("p_value")), k.at("n").get<std::size_t>(),
                      k.at("failures").get<std::size_t>(), k.at("checks").get<std::size_t>()});
    r.skipped_replications = j.at("skipped_replications").get<std::vector<int>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::SchemaMismatch, std::string("report json: ") + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> emit_tables(const Report& report, Format format) {
  switch (format) {
    case Format::Json: return {{"report.json", to_json(report).dump(2) + "\n"}};
    case Format::Markdown: return {{"report.md", markdown(report)}};
    case Format::Csv: {
      std::vector<std::pair<std::string, std::string>> out{
          {"indices.csv", csv_indices(report)},
          {"coefficients.csv", csv_coefficients(report)},
          {"effects.csv", csv_effects(report)},
      };
      if (!report.ks.empty()) out.emplace_back("ks.csv", csv_ks(report));
      return out;
    }
  }
  fail(Errc::UnsupportedFormat, "unsupported format");
}

}  // namespace copath
