#include "nrange/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <stdexcept>

namespace nrange {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << x;
  return os.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv table needs at least one column");
}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size())
    throw std::invalid_argument("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                                std::to_string(header_.size()));
  rows_.push_back(std::move(fields));
}

std::string CsvTable::quote(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + quote(r[i]);
    out += "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

void CsvTable::write(const std::string& path) const { write_text_file(path, str()); }

namespace {

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<':
        o += "&lt;";
        break;
      case '>':
        o += "&gt;";
        break;
      case '&':
        o += "&amp;";
        break;
      case '"':
        o += "&quot;";
        break;
      default:
        o += c;
    }
  }
  return o;
}

std::string px(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string tick(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(4);
  os << v;
  return os.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string SvgPlot::render() const {
  const double ml = 70, mr = 160, mt = 40, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(y) || !std::isfinite(x) || (log_x && x <= 0)) continue;
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double ypad = 0.05 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;
  auto sx = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << px(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << esc(title)
    << "</text>\n";
  o << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt + ph) << "\" x2=\"" << px(ml + pw) << "\" y2=\"" << px(mt + ph)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << px(ml) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(ml) << "\" y2=\"" << px(mt + ph)
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    const double xp = ml + pw * i / 5.0, yp = mt + ph - ph * i / 5.0;
    o << "<text x=\"" << px(xp) << "\" y=\"" << px(mt + ph + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
      << esc(log_x ? "1e" + tick(xv) : tick(xv)) << "</text>\n";
    o << "<text x=\"" << px(ml - 6) << "\" y=\"" << px(yp + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
      << esc(tick(yv)) << "</text>\n";
  }
  o << "<text x=\"" << px(ml + pw / 2) << "\" y=\"" << px(height - 14.0) << "\" text-anchor=\"middle\" font-size=\"13\">"
    << esc(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << px(mt + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << px(mt + ph / 2) << ")\">" << esc(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 8];
    std::string pts;
    for (auto [x, y] : series[k].points) {
      if (!std::isfinite(y) || !std::isfinite(x) || (log_x && x <= 0)) continue;
      pts += (pts.empty() ? "" : " ") + px(sx(x)) + "," + px(sy(y));
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
    o << "<text x=\"" << px(ml + pw + 10) << "\" y=\"" << px(mt + 16.0 * (k + 1)) << "\" font-size=\"12\" fill=\""
      << color << "\">" << esc(series[k].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void SvgPlot::write(const std::string& path) const { write_text_file(path, render()); }

}  // namespace nrange
