#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "mmdpath/csv.hpp"

using namespace mmdpath;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("mmdpath_csv_test_" + std::to_string(counter++) + ".csv"))
               .string();
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("abundance CSV round trip with scientific notation") {
  TempFile f("sample_id,a,b\ns1,1e-3,2\ns2,0.5,3.25E+1\n");
  const auto t = csv::read_abundance_csv(f.path);
  CHECK(t.sample_ids == std::vector<std::string>{"s1", "s2"});
  CHECK(t.taxa_ids == std::vector<std::string>{"a", "b"});
  CHECK(t.values(0, 0) == doctest::Approx(1e-3));
  CHECK(t.values(1, 1) == doctest::Approx(32.5));
}

TEST_CASE("empty cells are errors, not zeros") {
  TempFile f("sample_id,a,b\ns1,1,\ns2,2,3\n");
  CHECK_THROWS_WITH_AS(csv::read_abundance_csv(f.path), doctest::Contains(":2:"),
                       std::runtime_error);
}

TEST_CASE("malformed numeric cells carry the line number") {
  TempFile f("sample_id,a\ns1,1\ns2,oops\n");
  CHECK_THROWS_WITH_AS(csv::read_abundance_csv(f.path), doctest::Contains(":3:"),
                       std::runtime_error);
}

TEST_CASE("ragged rows are rejected") {
  TempFile f("sample_id,a,b\ns1,1,2\ns2,3\n");
  CHECK_THROWS_WITH_AS(csv::read_abundance_csv(f.path), doctest::Contains("expected 3 cells"),
                       std::runtime_error);
}

TEST_CASE("duplicate ids are rejected") {
  TempFile dup_sample("sample_id,a\ns1,1\ns1,2\n");
  CHECK_THROWS(csv::read_abundance_csv(dup_sample.path));
  TempFile dup_taxon("sample_id,a,a\ns1,1,2\n");
  CHECK_THROWS(csv::read_abundance_csv(dup_taxon.path));
}

TEST_CASE("value CSV joins by sample id in design order") {
  TempFile f("sample_id,value\ns2,20\ns1,10\n");
  const auto v = csv::read_value_csv(f.path, {"s1", "s2"});
  CHECK(v(0) == 10.0);
  CHECK(v(1) == 20.0);
}

TEST_CASE("value CSV join mismatches are errors in both directions") {
  TempFile missing("sample_id,value\ns1,10\n");
  CHECK_THROWS_WITH_AS(csv::read_value_csv(missing.path, {"s1", "s2"}),
                       doctest::Contains("no row for sample_id 's2'"), std::runtime_error);
  TempFile extra("sample_id,value\ns1,10\ns2,20\nzz,30\n");
  CHECK_THROWS_WITH_AS(csv::read_value_csv(extra.path, {"s1", "s2"}),
                       doctest::Contains("'zz'"), std::runtime_error);
}

TEST_CASE("value CSV requires exactly one value column") {
  TempFile f("sample_id,a,b\ns1,1,2\n");
  CHECK_THROWS_WITH_AS(csv::read_value_csv(f.path, {"s1"}),
                       doctest::Contains("exactly one value column"), std::runtime_error);
}

TEST_CASE("design CSV write/read round trip is exact") {
  core::DesignMatrix d;
  d.values.resize(2, 3);
  d.values << 0.1, -2.5e-7, 3.0, 1.0 / 3.0, 0.0, -1.0;
  d.taxa_ids = {"x", "y", "z"};
  const std::string path =
      (std::filesystem::temp_directory_path() / "mmdpath_design_roundtrip.csv").string();
  csv::write_design_csv(path, d, {"s1", "s2"});
  const auto back = csv::read_design_csv(path);
  CHECK(back.taxa_ids == d.taxa_ids);
  CHECK((back.values - d.values).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("value matrix CSV joins panels by sample id") {
  TempFile f("sample_id,m1,m2\ns2,3,4\ns1,1,2\n");
  const auto panel = csv::read_value_matrix_csv(f.path, {"s1", "s2"});
  CHECK(panel.column_ids == std::vector<std::string>{"m1", "m2"});
  CHECK(panel.values(0, 0) == 1.0);
  CHECK(panel.values(1, 1) == 4.0);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e-7}) {
    const std::string s = csv::format_double(x);
    CHECK(std::stod(s) == x);
  }
}
