#pragma once

// Tab-separated numeric tables. The first line is `# col1<TAB>col2...`; every
// value is written with 17 significant digits so doubles round-trip exactly.

#include <string>
#include <vector>

namespace dnls {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
Table read_table(const std::string& path);

/// Like write_table with a leading text column.
void write_labeled_table(const std::string& path, const std::vector<std::string>& header,
                         const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows);

/// Two-column `quantity<TAB>value` report with free-text values.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

std::string format_double(double v);

}  // namespace dnls
