#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nrange {

/// 17 significant digits, '.' decimal, "nan" / "inf" / "-inf" spelled out.
std::string format_double(double x);

/// RFC-4180 style table: header row, CRLF-free "\n" line ends, fields quoted
/// when they contain a comma, quote or newline.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  [[nodiscard]] static std::string quote(const std::string& field);
  [[nodiscard]] static std::string num(double x) { return format_double(x); }
  [[nodiscard]] std::string str() const;
  /// Throws std::runtime_error when the file cannot be written.
  void write(const std::string& path) const;
  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }
  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  bool log_x = false;
  int width = 800;
  int height = 500;

  [[nodiscard]] std::string render() const;
  void write(const std::string& path) const;
};

/// Writes text to a file, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nrange
