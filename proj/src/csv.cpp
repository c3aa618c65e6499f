#include "lstreg/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace lstreg {

namespace {

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string upper(cell);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return upper == "NA" || upper == "NAN";
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  if (delimiter == ' ') {
    // Whitespace mode: any run of blanks separates cells.
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) cells.push_back(token);
    return cells;
  }
  std::string::size_type start = 0;
  while (true) {
    const auto end = line.find(delimiter, start);
    std::string cell = line.substr(start, end == std::string::npos ? end : end - start);
    // Trim surrounding blanks so "1, 2" parses.
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return cells;
}

char detect_delimiter(const std::string& line) {
  if (line.find('\t') != std::string::npos) return '\t';
  if (line.find(',') != std::string::npos) return ',';
  return ' ';
}

// Resolve a column reference to a 0-based index.
int resolve_column(const std::string& reference, const std::vector<std::string>& header,
                   int column_count, bool has_header) {
  int index = 0;
  const auto [ptr, ec] =
      std::from_chars(reference.data(), reference.data() + reference.size(), index);
  if (ec == std::errc() && ptr == reference.data() + reference.size()) {
    if (index < 1 || index > column_count)
      throw ConfigError("column index " + reference + " out of range (file has " +
                        std::to_string(column_count) + " columns)");
    return index - 1;
  }
  if (!has_header)
    throw ConfigError("column name '" + reference + "' needs a header row (use skip-header)");
  const auto it = std::find(header.begin(), header.end(), reference);
  if (it == header.end()) throw ConfigError("column '" + reference + "' not found in header");
  return static_cast<int>(it - header.begin());
}

double parse_cell(const std::string& cell, int row, int column) {
  try {
    std::size_t used = 0;
    const double value = std::stod(cell, &used);
    if (used == cell.size()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(column) +
                       ": cannot parse '" + cell + "' as a number",
                   row, column);
}

}  // namespace

LoadedCsv load_csv(const std::string& path, const ColumnSpec& spec) {
  if (spec.response.empty()) throw ConfigError("column spec: response column is required");
  if (spec.predictors.empty()) throw ConfigError("column spec: at least one predictor column");

  std::ifstream file(path);
  if (!file) throw ParseError("cannot open '" + path + "'");

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;  // blank
    lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("'" + path + "': file has no data");

  const char delimiter = spec.delimiter != 0 ? spec.delimiter : detect_delimiter(lines.front());

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (spec.skip_header) {
    header = split(lines.front(), delimiter);
    first_data = 1;
    if (first_data >= lines.size()) throw ParseError("'" + path + "': header but no data rows");
  }
  const int column_count = static_cast<int>(split(lines[first_data], delimiter).size());

  const int response_col = resolve_column(spec.response, header, column_count, spec.skip_header);
  std::vector<int> predictor_cols;
  predictor_cols.reserve(spec.predictors.size());
  for (const std::string& reference : spec.predictors) {
    const int col = resolve_column(reference, header, column_count, spec.skip_header);
    if (col == response_col)
      throw ConfigError("column '" + reference + "' is both response and predictor");
    predictor_cols.push_back(col);
  }

  std::vector<std::vector<double>> x_rows;
  std::vector<double> y_rows;
  int dropped = 0;
  for (std::size_t idx = first_data; idx < lines.size(); ++idx) {
    const int file_row = static_cast<int>(idx) + 1;
    const std::vector<std::string> cells = split(lines[idx], delimiter);
    if (static_cast<int>(cells.size()) != column_count)
      throw ParseError("row " + std::to_string(file_row) + ": expected " +
                           std::to_string(column_count) + " columns, found " +
                           std::to_string(cells.size()),
                       file_row, 0);

    bool incomplete = is_missing(cells[response_col]);
    for (const int col : predictor_cols) incomplete = incomplete || is_missing(cells[col]);
    if (incomplete) {
      if (spec.drop_incomplete) {
        ++dropped;
        continue;
      }
      throw ParseError("row " + std::to_string(file_row) +
                           ": missing value in a referenced column",
                       file_row, 0);
    }

    std::vector<double> x_row(predictor_cols.size());
    for (std::size_t k = 0; k < predictor_cols.size(); ++k)
      x_row[k] = parse_cell(cells[predictor_cols[k]], file_row, predictor_cols[k] + 1);
    x_rows.push_back(std::move(x_row));
    y_rows.push_back(parse_cell(cells[response_col], file_row, response_col + 1));
  }
  if (x_rows.empty())
    throw ParseError("'" + path + "': no usable data rows (" + std::to_string(dropped) +
                     " dropped)");

  Eigen::MatrixXd x(x_rows.size(), predictor_cols.size());
  Eigen::VectorXd y(x_rows.size());
  for (std::size_t i = 0; i < x_rows.size(); ++i) {
    for (std::size_t k = 0; k < predictor_cols.size(); ++k) x(i, k) = x_rows[i][k];
    y[i] = y_rows[i];
  }

  LoadedCsv out{Dataset(std::move(x), std::move(y)), dropped, {}};
  if (!header.empty()) {
    out.column_names = header;
  } else {
    for (int c = 0; c < column_count; ++c)
      out.column_names.push_back("col" + std::to_string(c + 1));
  }
  return out;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write '" + path + "'");
  file << "y";
  for (int k = 1; k < data.p(); ++k) file << ",x" << k;
  file << "\n";
  file.precision(17);
  for (int i = 0; i < data.n(); ++i) {
    file << data.response()[i];
    for (int k = 0; k < data.p() - 1; ++k) file << ',' << data.predictors()(i, k);
    file << "\n";
  }
}

}  // namespace lstreg
