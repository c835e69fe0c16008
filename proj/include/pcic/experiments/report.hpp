#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pcic::experiments {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rectangular record set with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
  std::string text(std::size_t row, const std::string& column) const;
};

/// Comma-separated, header row, LF line endings, doubles with 17
/// significant digits.
void write_csv(std::ostream& out, const Table& table);
std::string format_double(double value);

/// Parses what write_csv wrote. Cells that parse completely as an integer
/// become int64, as a double become double, everything else string.
Table read_csv(std::istream& in);

struct FailedReplication {
  std::string cell;  ///< e.g. "truth=normal,N=10"
  std::size_t replication = 0;
  std::string cause;
};

struct ReplicationReport {
  std::string experiment;
  nlohmann::json config;  ///< full effective configuration, seed included
  Table records;          ///< one row per replication x (lambda | candidate)
  Table plot;             ///< plot-ready summary
  nlohmann::json aggregates;
  std::vector<FailedReplication> failures;
  std::size_t attempted = 0;

  double failure_rate() const {
    return attempted == 0 ? 0.0 : static_cast<double>(failures.size()) / static_cast<double>(attempted);
  }
  /// config, aggregates and failure summary in one document.
  nlohmann::json summary_json() const;
};

}  // namespace pcic::experiments
