#pragma once

#include <string>
#include <string_view>

namespace mros::util {

/// RFC-4180 field: quoted only when it contains a comma, quote or line break.
inline std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Accumulates one CSV record at a time.
class CsvRow {
 public:
  CsvRow& operator<<(std::string_view field) {
    if (!first_) line_.push_back(',');
    first_ = false;
    line_ += csv_field(field);
    return *this;
  }
  std::string str() const { return line_ + "\n"; }

 private:
  std::string line_;
  bool first_ = true;
};

}  // namespace mros::util
