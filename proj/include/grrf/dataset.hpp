#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "grrf/rng.hpp"

namespace grrf {

// Records which rows have been read through Dataset::value()/label().
// Test instrumentation, normally absent. Stores are idempotent and atomic,
// so concurrent readers may share one log.
class AccessLog {
 public:
  explicit AccessLog(std::size_t rows)
      : flags_(new std::atomic<char>[rows]), rows_(rows) {
    for (std::size_t i = 0; i < rows; ++i) flags_[i].store(0);
  }
  void record(std::size_t row) noexcept {
    flags_[row].store(1, std::memory_order_relaxed);
  }
  bool touched(std::size_t row) const {
    return flags_[row].load(std::memory_order_relaxed) != 0;
  }
  std::vector<std::size_t> touched_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows_; ++i)
      if (touched(i)) out.push_back(i);
    return out;
  }

 private:
  std::unique_ptr<std::atomic<char>[]> flags_;
  std::size_t rows_;
};

// Column-major numeric feature matrix with dense integer class labels.
// Immutable once built; safe to share read-only across threads.
struct Dataset {
  std::vector<std::vector<double>> columns;  // P columns of length N
  std::vector<int> labels;                   // N values in 0..C-1
  std::vector<std::string> feature_names;    // P unique names
  std::vector<std::string> class_names;      // C original label tokens
  std::shared_ptr<AccessLog> access_log;     // normally null

  std::size_t rows() const { return labels.size(); }
  std::size_t cols() const { return columns.size(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }

  double value(std::size_t row, std::size_t col) const {
    if (access_log) access_log->record(row);
    return columns[col][row];
  }
  int label(std::size_t row) const {
    if (access_log) access_log->record(row);
    return labels[row];
  }
  std::vector<double> row_values(std::size_t row) const;

  // Throws InvalidParameter if any structural invariant is broken
  // (shape mismatch, label out of range, duplicate feature names, C < 2).
  void validate() const;
};

// Disjoint train/test row partition.
struct SplitPlan {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
};

// CSV ingestion. label_column is a header name or a 0-based column index
// (an integer token is tried as a name first when a header is present).
// Labels are re-encoded densely in first-appearance order; class_names
// keeps the original tokens. Throws CsvError with row/column context.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header = true);

// Writes header + rows. Values are printed with shortest round-trip
// formatting, so write + load reproduces the matrix bit-for-bit.
void write_csv(const Dataset& d, std::ostream& out,
               const std::string& label_name = "y");
void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_name = "y");

// floor(fraction*n) draws from {0..n-1}; without replacement the result is
// a sorted set of distinct indices, with replacement it is kept in draw
// order. Core used by the forest samplers; consumes draws from rng.
std::vector<std::size_t> sample_positions(std::size_t n, double fraction,
                                          bool replacement, Rng& rng);

// Seeded wrapper over sample_positions for a dataset's rows.
std::vector<std::size_t> subsample(const Dataset& d, double fraction,
                                   bool replacement, std::uint64_t seed);

// Unstratified random partition; n_train = round(train_fraction*N).
// Throws InvalidParameter when either side would be empty.
SplitPlan train_test_split(const Dataset& d, double train_fraction,
                           std::uint64_t seed);

// Friedman benchmark generator: X1..X10 ~ U[0,1] i.i.d.,
//   Y = 10*sin(pi*X1*X2) + 20*(X3-0.5)^2 + 10*X4 + 5*X5 + e,  e ~ N(0,1),
// binarized at the sample median (strictly above -> class "2"), and five
// duplicated columns X11=X1 .. X15=X5. Labels follow the first-appearance
// encoding used by load_csv.
Dataset generate_friedman(std::size_t n, std::uint64_t seed);

// Column projection preserving rows and labels; selected indices must be
// distinct, in range, and nonempty. The access log is not propagated.
Dataset project(const Dataset& d, const std::vector<int>& selected);

}  // namespace grrf
