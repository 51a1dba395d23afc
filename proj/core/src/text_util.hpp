#pragma once

#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "ecomp/errors.hpp"

namespace ecomp::detail {

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r\n", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r\n", start);
    if (end == std::string_view::npos) end = line.size();
    fields.emplace_back(line.substr(start, end - start));
    pos = end;
  }
  return fields;
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> items;
  s = trim(s);
  if (s.empty()) return items;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    items.emplace_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return items;
}

inline double parse_double(const std::string& text, std::size_t line_no) {
  // strtod rather than from_chars: accepts "inf"/"nan" spellings and hex floats.
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError("not a number: '" + text + "'", line_no);
  }
  return value;
}

inline std::size_t parse_size(const std::string& text, std::size_t line_no) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("not a non-negative integer: '" + text + "'", line_no);
  }
  return value;
}

}  // namespace ecomp::detail
