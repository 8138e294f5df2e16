#include "dnls/table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dnls/errors.hpp"

namespace dnls {

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << '#';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? " " : "\t") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw InvalidArgument("table '" + path + "': row has " + std::to_string(row.size()) +
                            " values for " + std::to_string(header.size()) + " columns");
    }
    for (std::size_t i = 0; i < row.size(); ++i) out << (i == 0 ? "" : "\t") << format_double(row[i]);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_labeled_table(const std::string& path, const std::vector<std::string>& header,
                         const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows) {
  if (labels.size() != rows.size()) throw InvalidArgument("table '" + path + "': one label per row required");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << '#';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? " " : "\t") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() + 1 != header.size()) {
      throw InvalidArgument("table '" + path + "': row '" + labels[r] + "' does not match the header");
    }
    out << labels[r];
    for (double v : rows[r]) out << '\t' << format_double(v);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  Table table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw IoError("'" + path + "': missing '# col1\\tcol2...' header line");
  }
  {
    std::istringstream hs(line.substr(2));
    std::string col;
    while (std::getline(hs, col, '\t')) table.header.push_back(col);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto tab = line.find('\t', start);
      const auto end = tab == std::string::npos ? line.size() : tab;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + end, v);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw IoError("'" + path + "' line " + std::to_string(line_no) + ": malformed value");
      }
      row.push_back(v);
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (row.size() != table.header.size()) {
      throw IoError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                    std::to_string(table.header.size()) + " columns");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "# quantity\tvalue\n";
  for (const auto& [key, value] : entries) out << key << '\t' << value << '\n';
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace dnls
