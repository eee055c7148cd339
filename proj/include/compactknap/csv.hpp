#ifndef COMPACTKNAP_CSV_HPP
#define COMPACTKNAP_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace compactknap::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws std::out_of_range for unknown names.
  std::size_t column(const std::string &name) const;
  bool has(const std::string &name) const;
};

/// Quotes a field when it holds a comma, quote or newline.
std::string escape(const std::string &field);
std::string join(const std::vector<std::string> &fields);

/// Round-trip decimal text of a double; NaN becomes the empty field.
std::string number(double v);
/// Empty fields and unparsable text give NaN.
double to_number(const std::string &field);

Table parse(const std::string &text);
Table read(const std::filesystem::path &path);
/// Writes to a sibling temporary file and renames it into place.
void write(const std::filesystem::path &path, const Table &table);

} // namespace compactknap::csv

#endif
