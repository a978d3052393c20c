#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace plspread {

/// Shortest round-trip decimal representation; independent of the C locale.
std::string format_number(double v);

/// Plain columnar text: one header line naming the columns, then
/// whitespace-separated rows.
class ColumnWriter {
 public:
  explicit ColumnWriter(std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t ncol_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// One structured record: `key=value` fields separated by spaces, keys in
/// insertion order.
class Record {
 public:
  Record& set(const std::string& key, const std::string& value);
  Record& set(const std::string& key, const char* value);
  Record& set(const std::string& key, double value);
  Record& set(const std::string& key, long long value);
  Record& set(const std::string& key, bool value);
  std::string line() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Writes records one per line.
void save_records(const std::filesystem::path& path, const std::vector<Record>& records);

/// Reads a `key = value` text file (blank lines and '#' comments ignored).
/// Keys keep their file order.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

void save_text(const std::filesystem::path& path, const std::string& text);

}  // namespace plspread
