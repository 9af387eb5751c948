#pragma once

// Tables and key/value reports rendered as CSV or JSON. Doubles are written
// with 17 significant digits and '.' as decimal separator regardless of locale.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "trapcool/config.hpp"

namespace trapcool {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

using Record = std::vector<std::pair<std::string, Cell>>;

/// CSV with a header line, or a JSON array of row objects. Empty cells become
/// empty CSV fields / JSON null.
std::string render_table(const Table& t, OutputFormat f);

/// CSV `key,value` lines, or one JSON object.
std::string render_record(const Record& r, OutputFormat f);

/// Writes `text` to `path`, or to stdout when `path` is empty.
void write_output(const std::string& path, const std::string& text);

/// "runs/out.csv" + "summary" -> "runs/out.summary.csv".
std::string sibling_path(const std::string& path, const std::string& tag);

}  // namespace trapcool
