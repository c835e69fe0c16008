#include "pcic/experiments/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcic/numkit/errors.hpp"

namespace pcic::experiments {

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  throw ArgumentError("table has no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
  const Cell& cell = rows.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw ArgumentError("column '" + column + "' is not numeric");
}

std::string Table::text(std::size_t row, const std::string& column) const {
  const Cell& cell = rows.at(row).at(column_index(column));
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return format_double(std::get<double>(cell));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else {
              out << v;
            }
          },
          row[j]);
    }
    out << '\n';
  }
}

namespace {

Cell parse_cell(const std::string& token) {
  std::int64_t i = 0;
  auto [pi, ei] = std::from_chars(token.data(), token.data() + token.size(), i);
  if (ei == std::errc() && pi == token.data() + token.size() && !token.empty()) return i;
  if (token == "nan") return std::nan("");
  if (token == "inf") return HUGE_VAL;
  if (token == "-inf") return -HUGE_VAL;
  double d = 0.0;
  auto [pd, ed] = std::from_chars(token.data(), token.data() + token.size(), d);
  if (ed == std::errc() && pd == token.data() + token.size() && !token.empty()) return d;
  return token;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("read_csv: missing header");
  table.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tokens = split(line);
    if (tokens.size() != table.columns.size()) throw DataError("read_csv: ragged row");
    std::vector<Cell> row;
    row.reserve(tokens.size());
    for (const auto& t : tokens) row.push_back(parse_cell(t));
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::json ReplicationReport::summary_json() const {
  nlohmann::json doc;
  doc["experiment"] = experiment;
  doc["config"] = config;
  doc["aggregates"] = aggregates;
  doc["replications_attempted"] = attempted;
  doc["replications_failed"] = failures.size();
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) {
    fails.push_back({{"cell", f.cell}, {"replication", f.replication}, {"cause", f.cause}});
  }
  doc["failures"] = fails;
  return doc;
}

}  // namespace pcic::experiments
