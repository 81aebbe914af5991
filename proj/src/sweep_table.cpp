#include "fracgrad/sweep_table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fracgrad/error.hpp"

namespace fracgrad {

SweepTable::SweepTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void SweepTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw RangeError("SweepTable: row width does not match the columns");
  rows_.push_back(std::move(row));
}

void SweepTable::append(const SweepTable& other) {
  if (other.columns_ != columns_) throw RangeError("SweepTable: cannot append a table with other columns");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::size_t SweepTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw RangeError("SweepTable: no column named " + name);
}

double SweepTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw RangeError("SweepTable: column " + column + " holds text");
}

std::string SweepTable::text(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::to_string(std::get<std::int64_t>(c));
}

void SweepTable::add_provenance(std::string key, std::string value) {
  provenance_.emplace_back(std::move(key), std::move(value));
}

void SweepTable::write_csv(std::ostream& out) const {
  for (const auto& [key, value] : provenance_) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              out << v;
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

std::string SweepTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

}  // namespace fracgrad
