#pragma once

#include <string>
#include <vector>

#include "lstreg/dataset.hpp"

namespace lstreg {

/// Which columns of a delimited text file make up the regression sample.
/// Columns are referenced by 1-based index ("3") or by header name; names
/// require skip_header. delimiter 0 auto-detects among comma, tab and
/// whitespace runs.
struct ColumnSpec {
  std::string response;
  std::vector<std::string> predictors;
  bool skip_header = false;
  char delimiter = 0;
  bool drop_incomplete = false;  // silently skip rows with missing referenced cells
};

struct LoadedCsv {
  Dataset data;
  int dropped_rows = 0;
  std::vector<std::string> column_names;  // header names when present, else "col<k>"
};

/// Parses a delimited numeric file into a Dataset, preserving row order and
/// the listed predictor order. Missing cells (empty or NA) raise ParseError
/// unless drop_incomplete is set; non-numeric cells and ragged rows always
/// raise ParseError with 1-based row/column coordinates.
LoadedCsv load_csv(const std::string& path, const ColumnSpec& spec);

/// Writes the sample as CSV with the response in the first column; the output
/// loads back into an identical Dataset with response "1".
void write_csv(const Dataset& data, const std::string& path);

}  // namespace lstreg
