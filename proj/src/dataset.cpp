#include "grrf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "grrf/errors.hpp"

namespace grrf {

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<double> Dataset::row_values(std::size_t row) const {
  std::vector<double> out(cols());
  for (std::size_t c = 0; c < cols(); ++c) out[c] = value(row, c);
  return out;
}

void Dataset::validate() const {
  if (rows() < 1) throw InvalidParameter("dataset has no rows");
  if (cols() < 1) throw InvalidParameter("dataset has no feature columns");
  if (num_classes() < 2) throw InvalidParameter("dataset has fewer than 2 classes");
  if (feature_names.size() != cols())
    throw InvalidParameter("feature_names size does not match column count");
  for (const auto& col : columns)
    if (col.size() != rows())
      throw InvalidParameter("column length does not match row count");
  for (int y : labels)
    if (y < 0 || y >= num_classes())
      throw InvalidParameter("label out of range");
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names)
    if (!seen.insert(name).second)
      throw InvalidParameter("duplicate feature name: " + name);
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() || !in.eof()) lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw CsvError(path + ": file is empty");

  std::size_t first_data = 0;
  std::vector<std::string> header;
  if (has_header) {
    header = split_line(lines[0]);
    first_data = 1;
    std::unordered_set<std::string> seen;
    for (const auto& h : header)
      if (!seen.insert(h).second)
        throw CsvError(path + ": duplicate header name '" + h + "'");
  }

  const std::size_t ncols =
      has_header ? header.size() : split_line(lines[first_data]).size();
  if (ncols < 2) throw CsvError(path + ": need at least one feature column and a label column");

  // Resolve the label column: header name first, then 0-based index.
  std::size_t label_idx = ncols;
  if (has_header) {
    for (std::size_t i = 0; i < ncols; ++i)
      if (header[i] == label_column) label_idx = i;
  }
  if (label_idx == ncols) {
    std::size_t idx = 0;
    auto res = std::from_chars(label_column.data(),
                               label_column.data() + label_column.size(), idx);
    if (res.ec == std::errc() &&
        res.ptr == label_column.data() + label_column.size() && idx < ncols) {
      label_idx = idx;
    }
  }
  if (label_idx == ncols)
    throw CsvError(path + ": label column '" + label_column + "' not found");

  Dataset d;
  const std::size_t p = ncols - 1;
  d.columns.assign(p, {});
  if (has_header) {
    for (std::size_t i = 0; i < ncols; ++i)
      if (i != label_idx) d.feature_names.push_back(header[i]);
  } else {
    for (std::size_t i = 0; i < p; ++i)
      d.feature_names.push_back("X" + std::to_string(i + 1));
  }

  std::unordered_map<std::string, int> class_index;
  for (std::size_t li = first_data; li < lines.size(); ++li) {
    if (lines[li].empty()) throw CsvError(path + ": blank row " + std::to_string(li + 1));
    const auto cells = split_line(lines[li]);
    if (cells.size() != ncols)
      throw CsvError(path + ": row " + std::to_string(li + 1) + " has " +
                     std::to_string(cells.size()) + " cells, expected " +
                     std::to_string(ncols));
    std::size_t out_col = 0;
    for (std::size_t ci = 0; ci < ncols; ++ci) {
      if (ci == label_idx) {
        const std::string& tok = cells[ci];
        auto it = class_index.find(tok);
        if (it == class_index.end()) {
          it = class_index.emplace(tok, static_cast<int>(d.class_names.size())).first;
          d.class_names.push_back(tok);
        }
        d.labels.push_back(it->second);
      } else {
        double v;
        if (!parse_double(cells[ci], v))
          throw CsvError(path + ": non-numeric cell '" + cells[ci] + "' at row " +
                         std::to_string(li + 1) + ", column " + std::to_string(ci + 1));
        d.columns[out_col++].push_back(v);
      }
    }
  }

  if (d.labels.empty()) throw CsvError(path + ": no data rows");
  if (d.class_names.size() < 2)
    throw CsvError(path + ": label column has a single class '" + d.class_names[0] + "'");
  d.validate();
  return d;
}

void write_csv(const Dataset& d, std::ostream& out,
               const std::string& label_name) {
  for (const auto& name : d.feature_names) out << name << ',';
  out << label_name << '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c)
      out << format_double(d.columns[c][r]) << ',';
    out << d.class_names[d.labels[r]] << '\n';
  }
}

void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_name) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file: " + path);
  write_csv(d, out, label_name);
  if (!out) throw CsvError("write failed: " + path);
}

std::vector<std::size_t> sample_positions(std::size_t n, double fraction,
                                          bool replacement, Rng& rng) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw InvalidParameter("sample fraction must be in (0,1]");
  const auto k = static_cast<std::size_t>(fraction * static_cast<double>(n));
  if (k < 1) throw InvalidParameter("sample fraction too small: zero draws");

  std::vector<std::size_t> out;
  out.reserve(k);
  if (replacement) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(rng.uniform_index(n));
  } else {
    // partial Fisher-Yates: first k entries of a uniform permutation
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.uniform_index(n - i);
      std::swap(pool[i], pool[j]);
    }
    out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<std::size_t> subsample(const Dataset& d, double fraction,
                                   bool replacement, std::uint64_t seed) {
  Rng rng(seed);
  return sample_positions(d.rows(), fraction, replacement, rng);
}

SplitPlan train_test_split(const Dataset& d, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw InvalidParameter("train_fraction must be in (0,1)");
  const std::size_t n = d.rows();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw InvalidParameter("degenerate train/test partition");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);

  SplitPlan plan;
  plan.seed = seed;
  plan.train_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

Dataset generate_friedman(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidParameter("friedman generator needs n >= 2");
  Dataset d;
  d.columns.assign(15, std::vector<double>(n));
  Rng rng(seed);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t i = 0; i < n; ++i) d.columns[p][i] = rng.uniform_real();

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = d.columns[0][i], x2 = d.columns[1][i], x3 = d.columns[2][i];
    const double x4 = d.columns[3][i], x5 = d.columns[4][i];
    y[i] = 10.0 * std::sin(std::numbers::pi * x1 * x2) +
           20.0 * (x3 - 0.5) * (x3 - 0.5) + 10.0 * x4 + 5.0 * x5 + rng.normal();
  }

  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end());
  const double median = (n % 2 == 1)
                            ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  // class "2" strictly above the median, class "1" otherwise (ties included);
  // integer codes follow first-appearance order, matching load_csv
  std::unordered_map<std::string, int> class_index;
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string tok = y[i] > median ? "2" : "1";
    auto it = class_index.find(tok);
    if (it == class_index.end()) {
      it = class_index.emplace(tok, static_cast<int>(d.class_names.size())).first;
      d.class_names.push_back(tok);
    }
    d.labels[i] = it->second;
  }

  for (std::size_t p = 0; p < 5; ++p) d.columns[10 + p] = d.columns[p];
  for (std::size_t p = 0; p < 15; ++p)
    d.feature_names.push_back("X" + std::to_string(p + 1));
  d.validate();
  return d;
}

Dataset project(const Dataset& d, const std::vector<int>& selected) {
  if (selected.empty()) throw InvalidParameter("empty feature selection");
  std::unordered_set<int> seen;
  for (int idx : selected) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= d.cols())
      throw InvalidParameter("feature index out of range: " + std::to_string(idx));
    if (!seen.insert(idx).second)
      throw InvalidParameter("duplicate feature index: " + std::to_string(idx));
  }
  Dataset out;
  out.labels = d.labels;
  out.class_names = d.class_names;
  for (int idx : selected) {
    out.columns.push_back(d.columns[static_cast<std::size_t>(idx)]);
    out.feature_names.push_back(d.feature_names[static_cast<std::size_t>(idx)]);
  }
  return out;
}

}  // namespace grrf
