#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace harmonode {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// RFC 4180 style writer. Fields containing a comma, quote, CR or LF are
/// quoted with embedded quotes doubled; rows end with LF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<std::string_view> fields);
  void row(const std::vector<std::string>& fields);

 private:
  void field(std::string_view value, bool first);
  std::ostream& out_;
};

using CsvTable = std::vector<std::vector<std::string>>;

/// Parses RFC 4180 text (quoted fields may span lines). Includes the header.
CsvTable parse_csv(std::string_view text);

CsvTable read_csv_file(const std::string& path);

}  // namespace harmonode
