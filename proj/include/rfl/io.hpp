#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rfl/geometry.hpp"
#include "rfl/kernels.hpp"

namespace rfl {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal representation; deterministic across runs.
std::string format_double(double x);

/// Named CSV-backed table. Cells are formatted on insertion.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  class RowBuilder {
   public:
    explicit RowBuilder(Table& table) : table_(table) {}
    ~RowBuilder();
    RowBuilder(const RowBuilder&) = delete;
    RowBuilder& operator=(const RowBuilder&) = delete;

    RowBuilder& operator<<(double x);
    RowBuilder& operator<<(int x);
    RowBuilder& operator<<(long x);
    RowBuilder& operator<<(long long x);
    RowBuilder& operator<<(std::uint64_t x);
    RowBuilder& operator<<(bool x);
    RowBuilder& operator<<(const std::string& x);
    RowBuilder& operator<<(const char* x) { return *this << std::string(x); }

   private:
    Table& table_;
    std::vector<std::string> cells_;
  };

  /// `table.row() << a << b << c;` appends one row when the builder dies.
  RowBuilder row() { return RowBuilder(*this); }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  /// Numeric value of a cell; throws when the column is unknown.
  double number(std::size_t row, const std::string& column) const;

  std::string to_csv() const;
  Json to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

Json to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j);

Json to_json(const PointSet& points);
PointSet point_set_from_json(const Json& j);

Json to_json(const VecX& v);
VecX vector_from_json(const Json& j);

/// Minimal SVG line chart; series share the x axis. Log-scaled y when requested.
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series,
                          bool log_y);

}  // namespace rfl
