#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <unistd.h>

#include "grrf/dataset.hpp"
#include "grrf/errors.hpp"
#include "grrf/serialize.hpp"

using namespace grrf;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("grrf_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".csv"))
               .string();
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv parses a small labeled file") {
  TempFile f("a,b,y\n1,2,p\n3,4,q\n5,6,p\n7,8,q\n");
  const Dataset d = load_csv(f.path, "y");
  CHECK(d.rows() == 4);
  CHECK(d.cols() == 2);
  CHECK(d.num_classes() == 2);
  CHECK(d.class_names == std::vector<std::string>{"p", "q"});
  CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(d.labels == std::vector<int>{0, 1, 0, 1});
  CHECK(d.columns[0] == std::vector<double>{1, 3, 5, 7});
  CHECK(d.columns[1] == std::vector<double>{2, 4, 6, 8});
}

TEST_CASE("load_csv rejects an unknown label column by name") {
  TempFile f("a,b,y\n1,2,p\n3,4,q\n");
  CHECK_THROWS_WITH_AS(load_csv(f.path, "cls"),
                       doctest::Contains("label column 'cls' not found"),
                       CsvError);
}

TEST_CASE("load_csv reports non-numeric cells with row and column") {
  TempFile f("a,b,y\n1,2,p\nNA,4,q\n");
  try {
    load_csv(f.path, "y");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("NA") != std::string::npos);
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
  }
}

TEST_CASE("load_csv rejects single-class files, duplicate headers, missing files") {
  TempFile single("a,y\n1,p\n2,p\n");
  CHECK_THROWS_AS(load_csv(single.path, "y"), CsvError);
  TempFile dup("a,a,y\n1,2,p\n3,4,q\n");
  CHECK_THROWS_AS(load_csv(dup.path, "y"), CsvError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y"), CsvError);
}

TEST_CASE("load_csv accepts a label column given as an index, without header") {
  TempFile f("1,2,p\n3,4,q\n");
  const Dataset d = load_csv(f.path, "2", false);
  CHECK(d.rows() == 2);
  CHECK(d.cols() == 2);
  CHECK(d.feature_names == std::vector<std::string>{"X1", "X2"});
  CHECK(d.class_names == std::vector<std::string>{"p", "q"});
}

TEST_CASE("csv round-trip reproduces values bit-for-bit") {
  Dataset d;
  d.columns = {{0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567},
               {1e300, -0.0, 7.0, 0.63}};
  d.labels = {0, 1, 1, 0};
  d.feature_names = {"f1", "f2"};
  d.class_names = {"neg", "pos"};
  d.validate();

  TempFile f("");
  write_csv(d, f.path, "cls");
  const Dataset r = load_csv(f.path, "cls");
  REQUIRE(r.cols() == d.cols());
  for (std::size_t c = 0; c < d.cols(); ++c)
    for (std::size_t i = 0; i < d.rows(); ++i) {
      // compare representations, so -0.0 vs 0.0 is also caught
      CHECK(std::memcmp(&r.columns[c][i], &d.columns[c][i], sizeof(double)) == 0);
    }
  CHECK(r.labels == d.labels);
  CHECK(r.class_names == d.class_names);
  CHECK(r.feature_names == d.feature_names);
}

TEST_CASE("subsample without replacement draws distinct sorted indices") {
  Dataset d = generate_friedman(100, 1);
  const auto idx = subsample(d, 0.63, false, 7);
  CHECK(idx.size() == 63);
  std::set<std::size_t> unique(idx.begin(), idx.end());
  CHECK(unique.size() == idx.size());
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(*std::max_element(idx.begin(), idx.end()) < 100);

  CHECK(subsample(d, 0.63, false, 7) == idx);  // deterministic
}

TEST_CASE("subsample with fraction 1 and no replacement is the full index set") {
  Dataset d = generate_friedman(5, 2);
  const auto idx = subsample(d, 1.0, false, 3);
  CHECK(idx == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("bootstrap subsample draws n with repetition") {
  Dataset d = generate_friedman(50, 3);
  const auto idx = subsample(d, 1.0, true, 9);
  CHECK(idx.size() == 50);
  std::set<std::size_t> unique(idx.begin(), idx.end());
  CHECK(unique.size() < idx.size());  // a repeat is essentially certain
}

TEST_CASE("subsample rejects a fraction that rounds to zero draws") {
  Dataset d = generate_friedman(10, 4);
  CHECK_THROWS_AS(subsample(d, 0.05, false, 1), InvalidParameter);
}

TEST_CASE("train_test_split honors 2/3 - 1/3 and determinism") {
  Dataset d = generate_friedman(9, 5);
  const SplitPlan plan = train_test_split(d, 2.0 / 3.0, 11);
  CHECK(plan.train_indices.size() == 6);
  CHECK(plan.test_indices.size() == 3);

  std::set<std::size_t> all(plan.train_indices.begin(), plan.train_indices.end());
  all.insert(plan.test_indices.begin(), plan.test_indices.end());
  CHECK(all.size() == 9);

  const SplitPlan again = train_test_split(d, 2.0 / 3.0, 11);
  CHECK(again.train_indices == plan.train_indices);
  const SplitPlan other = train_test_split(d, 2.0 / 3.0, 12);
  CHECK(other.train_indices != plan.train_indices);
}

TEST_CASE("train_test_split rejects degenerate partitions") {
  Dataset d = generate_friedman(3, 6);
  CHECK_THROWS_AS(train_test_split(d, 0.999, 1), InvalidParameter);
  CHECK_THROWS_AS(train_test_split(d, 1.0, 1), InvalidParameter);
}

TEST_CASE("friedman generator matches its documented layout") {
  const Dataset d = generate_friedman(1000, 42);
  CHECK(d.rows() == 1000);
  CHECK(d.cols() == 15);
  CHECK(d.num_classes() == 2);
  CHECK(d.feature_names[0] == "X1");
  CHECK(d.feature_names[14] == "X15");

  // continuous noise makes the median split exact: 500 strictly above
  int per_class[2] = {0, 0};
  for (int y : d.labels) ++per_class[y];
  CHECK(per_class[0] == 500);
  CHECK(per_class[1] == 500);

  // duplicated columns are exact copies
  for (std::size_t p = 0; p < 5; ++p) CHECK(d.columns[p + 10] == d.columns[p]);

  // reproducibility
  const Dataset again = generate_friedman(1000, 42);
  CHECK(again.columns == d.columns);
  CHECK(again.labels == d.labels);
}

TEST_CASE("friedman columns carry the systematic signal they should") {
  const Dataset d = generate_friedman(1000, 7);
  // oracle: rebuild the noise-free response from the columns
  std::vector<double> signal(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double x1 = d.columns[0][i], x2 = d.columns[1][i], x3 = d.columns[2][i];
    signal[i] = 10.0 * std::sin(std::numbers::pi * x1 * x2) +
                20.0 * (x3 - 0.5) * (x3 - 0.5) + 10.0 * d.columns[3][i] +
                5.0 * d.columns[4][i];
  }
  const auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) { ma += a[i]; mb += b[i]; }
    ma /= n; mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      cov += (a[i] - ma) * (b[i] - mb);
      va += (a[i] - ma) * (a[i] - ma);
      vb += (b[i] - mb) * (b[i] - mb);
    }
    return cov / std::sqrt(va * vb);
  };
  CHECK(corr(d.columns[3], signal) > corr(d.columns[5], signal));
}

TEST_CASE("project keeps rows and reorders columns as asked") {
  const Dataset d = generate_friedman(20, 8);
  const Dataset all = project(d, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14});
  CHECK(all.columns == d.columns);
  CHECK(all.labels == d.labels);

  const Dataset two = project(d, {2, 0});
  CHECK(two.cols() == 2);
  CHECK(two.columns[0] == d.columns[2]);
  CHECK(two.columns[1] == d.columns[0]);
  CHECK(two.feature_names == std::vector<std::string>{"X3", "X1"});

  CHECK_THROWS_AS(project(d, {}), InvalidParameter);
  CHECK_THROWS_AS(project(d, {15}), InvalidParameter);
  CHECK_THROWS_AS(project(d, {1, 1}), InvalidParameter);
}

TEST_CASE("split plan JSON round-trip") {
  Dataset d = generate_friedman(9, 5);
  const SplitPlan plan = train_test_split(d, 2.0 / 3.0, 11);
  const auto j = split_plan_to_json(plan);
  CHECK(j.at("seed") == 11);
  const SplitPlan back = split_plan_from_json(j);
  CHECK(back.train_indices == plan.train_indices);
  CHECK(back.test_indices == plan.test_indices);
  CHECK(back.seed == plan.seed);
}

TEST_CASE("access log records value and label reads") {
  Dataset d = generate_friedman(10, 9);
  d.access_log = std::make_shared<AccessLog>(d.rows());
  (void)d.value(3, 0);
  (void)d.label(7);
  const auto touched = d.access_log->touched_rows();
  CHECK(touched == std::vector<std::size_t>{3, 7});
  // projection must not carry the log over
  const Dataset p = project(d, {0});
  CHECK(p.access_log == nullptr);
  CHECK(d.access_log->touched_rows() == touched);
}
