#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fracgrad {

/// Rectangular table of experiment results with a provenance header. Rows
/// keep insertion order; CSV output is byte-deterministic (shortest
/// round-trip number formatting, LF line endings).
class SweepTable {
public:
  using Cell = std::variant<std::string, double, std::int64_t>;

  SweepTable() = default;
  explicit SweepTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void add_row(std::vector<Cell> row);
  void append(const SweepTable& other);

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  std::string text(std::size_t row, const std::string& column) const;

  /// Lines written before the header as "# key: value".
  void add_provenance(std::string key, std::string value);
  const std::vector<std::pair<std::string, std::string>>& provenance() const { return provenance_; }

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> provenance_;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace fracgrad
