#include "rfl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace rfl {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

Table::RowBuilder::~RowBuilder() { table_.rows_.push_back(std::move(cells_)); }

Table::RowBuilder& Table::RowBuilder::operator<<(double x) {
  cells_.push_back(format_double(x));
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(int x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(long x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(long long x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(std::uint64_t x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(bool x) {
  cells_.push_back(x ? "true" : "false");
  return *this;
}
Table::RowBuilder& Table::RowBuilder::operator<<(const std::string& x) {
  cells_.push_back(x);
  return *this;
}

double Table::number(std::size_t row, const std::string& column) const {
  auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end()) throw std::out_of_range("Table: unknown column " + column);
  const std::string& cell = rows_.at(row).at(static_cast<std::size_t>(it - columns_.begin()));
  if (cell == "true") return 1.0;
  if (cell == "false") return 0.0;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(cell);
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << csv_escape(columns_[c]);
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(row[c]);
    os << "\n";
  }
  return os.str();
}

Json Table::to_json() const {
  Json rows = Json::array();
  for (const auto& row : rows_) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size() && c < columns_.size(); ++c) obj[columns_[c]] = row[c];
    rows.push_back(std::move(obj));
  }
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json to_json(const Kernel& k) {
  Json j;
  j["family"] = std::string(to_string(k.family));
  j["sigma"] = k.sigma;
  if (k.family == KernelFamily::inverse_multiquadric) j["beta"] = k.beta;
  if (k.family == KernelFamily::sobolev) j["r"] = k.r;
  j["dim"] = k.dim;
  return j;
}

Kernel kernel_from_json(const Json& j) {
  if (!j.is_object()) throw ArgumentError("kernel JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "sigma" && key != "beta" && key != "r" && key != "dim") {
      throw ArgumentError("kernel JSON: unknown key '" + key + "'");
    }
  }
  Kernel k;
  k.family = kernel_family_from_string(j.at("family").get<std::string>());
  k.sigma = j.value("sigma", 1.0);
  k.beta = j.value("beta", 1.0);
  k.r = j.value("r", 1.0);
  k.dim = j.value("dim", 1);
  k.validate();
  return k;
}

Json to_json(const VecX& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

VecX vector_from_json(const Json& j) {
  VecX v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Json to_json(const PointSet& points) {
  Json j;
  j["dim"] = points.dim();
  if (points.grid_m()) j["grid_m"] = *points.grid_m();
  Json pts = Json::array();
  for (Index i = 0; i < points.size(); ++i) pts.push_back(to_json(VecX(points.point(i))));
  j["points"] = std::move(pts);
  return j;
}

PointSet point_set_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  if (j.contains("grid_m")) return uniform_grid(j.at("grid_m").get<int>(), dim);
  const Json& pts = j.at("points");
  MatX m(dim, static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    VecX p = vector_from_json(pts[i]);
    if (p.size() != dim) throw ArgumentError("PointSet JSON: point dimension mismatch");
    m.col(static_cast<Index>(i)) = p;
  }
  return PointSet(dim, std::move(m));
}

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series,
                          bool log_y) {
  constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  auto py = [&](double y) { return top + (ymax - ty(y)) / (ymax - ymin) * (height - top - bottom); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
     << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
     << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << height / 2 << "\" transform=\"rotate(-90 16 " << height / 2
     << ")\" text-anchor=\"middle\">" << y_label << (log_y ? " (log10)" : "") << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
     << format_double(ymax) << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\" font-size=\"11\">"
     << format_double(ymin) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << palette[k % 5] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0)) continue;
      os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << width - right - 4 << "\" y=\"" << top + 16 * (k + 1)
       << "\" text-anchor=\"end\" fill=\"" << palette[k % 5] << "\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rfl
