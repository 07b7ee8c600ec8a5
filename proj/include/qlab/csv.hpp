#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

/// Minimal CSV emitter: comma separator, LF line endings, header row first,
/// doubles rendered with 12 significant digits so output is byte-stable for
/// a fixed seed and configuration.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

  void header(const std::vector<std::string_view>& cols) { write_row_(cols); }

  CsvWriter& cell(double v) {
    row_.push_back(format(v));
    return *this;
  }
  CsvWriter& cell(long long v) {
    row_.push_back(std::to_string(v));
    return *this;
  }
  CsvWriter& cell(std::size_t v) {
    row_.push_back(std::to_string(v));
    return *this;
  }
  CsvWriter& cell(std::string_view v) {
    row_.emplace_back(v);
    return *this;
  }

  void end_row() {
    std::vector<std::string_view> views(row_.begin(), row_.end());
    write_row_(views);
    row_.clear();
  }

 private:
  void write_row_(const std::vector<std::string_view>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

  std::ostream& os_;
  std::vector<std::string> row_;
};

}  // namespace qlab
