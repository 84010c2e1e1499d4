#include "mmdpath/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mmdpath::csv {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& path, std::size_t line, const std::string& cell) {
  if (cell.empty()) fail(path, line, "empty cell (missing values are not allowed)");
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail(path, line, "cannot parse numeric cell '" + cell + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

LabeledTable read_labeled_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  LabeledTable out;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw std::runtime_error(path + ": file is empty");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_line(line);
  if (header.size() < 2) fail(path, line_no, "header must be 'sample_id,<name1>,...'");
  if (header[0] != "sample_id") fail(path, line_no, "first header column must be 'sample_id'");
  out.column_ids.assign(header.begin() + 1, header.end());
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : out.column_ids) {
      if (id.empty()) fail(path, line_no, "empty column name in header");
      if (!seen.insert(id).second) fail(path, line_no, "duplicate column name '" + id + "'");
    }
  }

  const std::size_t n_cols = out.column_ids.size();
  std::vector<std::vector<double>> rows;
  std::unordered_set<std::string> seen_samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    auto cells = split_line(line);
    if (cells.size() != n_cols + 1) {
      fail(path, line_no, "expected " + std::to_string(n_cols + 1) + " cells, found " +
                              std::to_string(cells.size()));
    }
    if (cells[0].empty()) fail(path, line_no, "empty sample_id");
    if (!seen_samples.insert(cells[0]).second) {
      fail(path, line_no, "duplicate sample_id '" + cells[0] + "'");
    }
    out.sample_ids.push_back(cells[0]);
    std::vector<double> row(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) row[j] = parse_cell(path, line_no, cells[j + 1]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");

  out.values.resize(static_cast<int>(rows.size()), static_cast<int>(n_cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      out.values(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return out;
}

core::AbundanceTable read_abundance_csv(const std::string& path) {
  LabeledTable t = read_labeled_table(path);
  core::AbundanceTable out;
  out.values = std::move(t.values);
  out.taxa_ids = std::move(t.column_ids);
  out.sample_ids = std::move(t.sample_ids);
  out.validate();
  return out;
}

core::DesignMatrix read_design_csv(const std::string& path, std::vector<std::string>* sample_ids_out) {
  LabeledTable t = read_labeled_table(path);
  core::DesignMatrix out;
  out.values = std::move(t.values);
  out.taxa_ids = std::move(t.column_ids);
  out.centered = (out.values.rowwise().sum().cwiseAbs().maxCoeff() < 1e-6);
  out.validate();
  if (sample_ids_out) *sample_ids_out = std::move(t.sample_ids);
  return out;
}

core::Vector read_value_csv(const std::string& path, const std::vector<std::string>& sample_ids) {
  LabeledTable t = read_labeled_table(path);
  if (t.column_ids.size() != 1) {
    throw std::runtime_error(path + ": expected exactly one value column, found " +
                             std::to_string(t.column_ids.size()));
  }
  std::unordered_map<std::string, int> row_of;
  for (std::size_t i = 0; i < t.sample_ids.size(); ++i) {
    row_of[t.sample_ids[i]] = static_cast<int>(i);
  }
  core::Vector out(static_cast<int>(sample_ids.size()));
  for (std::size_t i = 0; i < sample_ids.size(); ++i) {
    auto it = row_of.find(sample_ids[i]);
    if (it == row_of.end()) {
      throw std::runtime_error(path + ": no row for sample_id '" + sample_ids[i] + "'");
    }
    out(static_cast<int>(i)) = t.values(it->second, 0);
    row_of.erase(it);
  }
  if (!row_of.empty()) {
    throw std::runtime_error(path + ": sample_id '" + row_of.begin()->first +
                             "' does not match any design row");
  }
  return out;
}

LabeledTable read_value_matrix_csv(const std::string& path, const std::vector<std::string>& sample_ids) {
  LabeledTable t = read_labeled_table(path);
  std::unordered_map<std::string, int> row_of;
  for (std::size_t i = 0; i < t.sample_ids.size(); ++i) {
    row_of[t.sample_ids[i]] = static_cast<int>(i);
  }
  LabeledTable out;
  out.column_ids = t.column_ids;
  out.sample_ids = sample_ids;
  out.values.resize(static_cast<int>(sample_ids.size()), t.values.cols());
  for (std::size_t i = 0; i < sample_ids.size(); ++i) {
    auto it = row_of.find(sample_ids[i]);
    if (it == row_of.end()) {
      throw std::runtime_error(path + ": no row for sample_id '" + sample_ids[i] + "'");
    }
    out.values.row(static_cast<int>(i)) = t.values.row(it->second);
    row_of.erase(it);
  }
  if (!row_of.empty()) {
    throw std::runtime_error(path + ": sample_id '" + row_of.begin()->first +
                             "' does not match any design row");
  }
  return out;
}

void write_design_csv(const std::string& path, const core::DesignMatrix& design,
                      const std::vector<std::string>& sample_ids) {
  if (static_cast<int>(sample_ids.size()) != design.n_samples()) {
    throw std::invalid_argument("write_design_csv: sample_ids length mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "sample_id";
  for (const auto& id : design.taxa_ids) out << ',' << id;
  out << '\n';
  for (int i = 0; i < design.n_samples(); ++i) {
    out << sample_ids[static_cast<std::size_t>(i)];
    for (int j = 0; j < design.n_taxa(); ++j) {
      out << ',' << format_double(design.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mmdpath::csv
