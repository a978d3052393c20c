#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "plspread/errors.hpp"
#include "plspread/io.hpp"

using namespace plspread;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "plspread_unit_io" / name;
  fs::remove_all(p);
  return p;
}
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("io") {

TEST_CASE("numbers round trip in shortest form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-17) == "-2.5e-17");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("column writer") {
  ColumnWriter w({"x", "z"});
  w.row({1.0, 0.5});
  w.row({2.0, 0.25});
  CHECK(w.rows() == 2);
  CHECK(w.text() == "x z\n1 0.5\n2 0.25\n");
  CHECK_THROWS_AS(w.row({1.0}), std::logic_error);
  const fs::path p = scratch("cols") / "sub" / "a.dat";
  w.save(p);
  CHECK(slurp(p) == w.text());
}

TEST_CASE("records") {
  Record r;
  r.set("name", "shot").set("y", 1.5).set("n", 3LL).set("ok", true);
  CHECK(r.line() == "name=shot y=1.5 n=3 ok=true");
  const fs::path p = scratch("rec") / "r.rec";
  save_records(p, {r, Record().set("k", 0.0)});
  CHECK(slurp(p) == "name=shot y=1.5 n=3 ok=true\nk=0\n");
}

TEST_CASE("key value files") {
  const fs::path p = scratch("kv") / "c.txt";
  save_text(p, "# comment\n\nlambda = 2\n  geometry=radial  \nname = a b\n");
  const auto kv = read_key_values(p);
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"lambda", "2"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"geometry", "radial"});
  CHECK(kv[2].second == "a b");
  save_text(p, "lambda 2\n");
  CHECK_THROWS_AS(read_key_values(p), DomainError);
  CHECK_THROWS_AS(read_key_values(scratch("kv") / "missing.txt"), DomainError);
}

}
