#include "copath/dataio.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <fstream>
#include <sstream>

namespace copath {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty() || s == "NA" || s == "NaN") return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(Errc::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row.front().empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) fail(Errc::SchemaMismatch, "csv: unterminated quoted field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

Dataset read_csv_columns(const std::filesystem::path& path, std::vector<std::string> columns) {
  const auto rows = parse_csv(read_file(path));
  if (rows.empty()) fail(Errc::EmptyFile, "'" + path.string() + "' is empty");
  std::vector<std::string> header;
  for (const auto& h : rows.front()) header.push_back(trim(h));
  if (rows.size() < 2) fail(Errc::EmptyFile, "'" + path.string() + "' has no data rows");
  if (columns.empty()) columns = header;

  std::vector<std::size_t> source;
  for (const auto& name : columns) {
    std::size_t j = 0;
    while (j < header.size() && header[j] != name) ++j;
    if (j == header.size())
      fail(Errc::MissingColumn, "column '" + name + "' not found in '" + path.string() + "'");
    source.push_back(j);
  }

  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  MatrixXd values(n, static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i) + 1];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::size_t j = source[c];
      const auto v = j < row.size() ? parse_double(row[j]) : std::nullopt;
      if (!v)
        fail(Errc::NonNumericCell, "row " + std::to_string(i + 1) + ", column '" + columns[c] +
                                       "': '" + (j < row.size() ? row[j] : std::string()) +
                                       "' is missing or not numeric");
      values(i, static_cast<Eigen::Index>(c)) = *v;
    }
  }
  if (n < 2) fail(Errc::TooFewObservations, "'" + path.string() + "' needs at least two rows");
  return Dataset(std::move(columns), std::move(values));
}

Dataset read_csv(const std::filesystem::path& path, const std::string& endogenous,
                 const std::vector<std::string>& exogenous) {
  std::vector<std::string> cols{endogenous};
  cols.insert(cols.end(), exogenous.begin(), exogenous.end());
  return read_csv_columns(path, std::move(cols));
}

PreparedData prepare(const Dataset& data) {
  MatrixXd z(data.rows(), data.cols());
  PreparedData out;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    try {
      z.col(j) = standardize(data.col(j));
    } catch (const Error& e) {
      throw Error(e.code(), "column '" + data.names()[static_cast<std::size_t>(j)] + "': " + e.what());
    }
  }
  if (data.rows() >= kKsMinRows)
    for (Eigen::Index j = 0; j < z.cols(); ++j) out.ks.push_back(ks_test_normal(z.col(j)));
  out.data = Dataset(data.names(), std::move(z), true);
  return out;
}

void write_report(const Report& report, const std::filesystem::path& path, Format format) {
  const auto docs = emit_tables(report, format);
  if (format == Format::Csv) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) fail(Errc::IoError, "cannot create directory '" + path.string() + "': " + ec.message());
    for (const auto& [name, text] : docs) write_text(path / name, text);
    return;
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  write_text(path, docs.front().second);
}

void write_report(const Report& report, const std::filesystem::path& path, const std::string& format) {
  write_report(report, path, parse_format(format));
}

MatrixXd read_matrix(const std::filesystem::path& path) {
  std::string text = read_file(path);
  for (char& c : text)
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      const auto v = parse_double(tok);
      if (!v) fail(Errc::NonNumericCell, "matrix file: '" + tok + "' is not numeric");
      row.push_back(*v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::EmptyFile, "matrix file '" + path.string() + "' is empty");
  const auto d = static_cast<Eigen::Index>(rows.size());
  MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != d)
      fail(Errc::DimensionMismatch, "matrix file: matrix must be square");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace copath
