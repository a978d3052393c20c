#include "plspread/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "plspread/errors.hpp"

namespace plspread {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

ColumnWriter::ColumnWriter(std::vector<std::string> columns) : ncol_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text_ += ' ';
    text_ += columns[i];
  }
  text_ += '\n';
}

void ColumnWriter::row(const std::vector<double>& values) {
  if (values.size() != ncol_) throw std::logic_error("column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ' ';
    text_ += format_number(values[i]);
  }
  text_ += '\n';
  ++rows_;
}

void ColumnWriter::save(const std::filesystem::path& path) const { save_text(path, text_); }

Record& Record::set(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, value);
  return *this;
}
Record& Record::set(const std::string& key, const char* value) {
  return set(key, std::string(value));
}

Record& Record::set(const std::string& key, double value) {
  return set(key, format_number(value));
}
Record& Record::set(const std::string& key, long long value) {
  return set(key, std::to_string(value));
}
Record& Record::set(const std::string& key, bool value) {
  return set(key, std::string(value ? "true" : "false"));
}

std::string Record::line() const {
  std::string s;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) s += ' ';
    s += fields_[i].first + '=' + fields_[i].second;
  }
  return s;
}

void save_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  std::string text;
  for (const auto& r : records) text += r.line() + '\n';
  save_text(path, text);
}

std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot write " + path.string());
  out << text;
}

}  // namespace plspread
