#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "arden/error.hpp"
#include "arden/io.hpp"
#include "support/oracles.hpp"

using namespace arden;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "arden_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an arden::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("csv parsing") {
  const TimeSeries one = parse_csv("1\n2\n3\n", false);
  CHECK(one.length() == 3);
  CHECK(one.channels() == 1);
  const TimeSeries two = parse_csv("1,2\n3,4\n", false);
  CHECK(two.values() == (Matrix(2, 2) << 1, 2, 3, 4).finished());

  const TimeSeries named = parse_csv("a, b\r\n1.5,-2e3\r\n\r\n0,4\r\n", true);
  CHECK(named.channel_names() == std::vector<std::string>{"a", "b"});
  CHECK(named.values()(0, 1) == -2000.0);
  CHECK(named.length() == 2);
}

TEST_CASE("csv errors carry locations") {
  try {
    parse_csv("1,2\n3,x\n", false);
    FAIL("bad number accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
  CHECK(kind_of([] { parse_csv("1,2\n3\n", false); }) == ErrorKind::RaggedRows);
  CHECK(kind_of([] { parse_csv("", false); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_csv("/nonexistent/file.csv", false); }) == ErrorKind::IoError);
}

TEST_CASE("csv round-trip is bit exact") {
  oracle::Gen g(81);
  Matrix m = g.normal_matrix(50, 3);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 1e-300;
  m(2, 2) = -123456789.123456789;
  const fs::path path = scratch("roundtrip.csv");
  write_csv(path, TimeSeries(m, std::nullopt, {"x", "y", "z"}));
  const TimeSeries back = load_csv(path, true);
  CHECK(back.values() == m);
  CHECK(back.channel_names() == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("first difference") {
  const TimeSeries d = first_difference(TimeSeries::scalar((Vector(3) << 1, 3, 6).finished()));
  CHECK(d.values() == (Matrix(2, 1) << 2, 3).finished());
  CHECK(first_difference(TimeSeries(Matrix::Constant(5, 2, 4.0))).values() == Matrix::Zero(4, 2));
  CHECK(kind_of([] { first_difference(TimeSeries::scalar(Vector::Ones(1))); }) == ErrorKind::HorizonTooShort);

  oracle::Gen g(82);
  const Matrix x = g.normal_matrix(30, 2);
  Matrix cumsum(31, 2);
  cumsum.row(0).setZero();
  for (Eigen::Index t = 0; t < 30; ++t) cumsum.row(t + 1) = cumsum.row(t) + x.row(t);
  CHECK(oracle::rel_error(first_difference(TimeSeries(cumsum)).values(), x) < 1e-14);
}

TEST_CASE("artefact injection") {
  const Matrix base = Matrix::Constant(20, 2, 5.0);
  const TimeSeries zeroed = inject_artefact(TimeSeries(base), 1, 4, 8, 0.0, 1);
  for (Eigen::Index t = 0; t < 20; ++t) {
    CHECK(zeroed.values()(t, 0) == 5.0);
    CHECK(zeroed.values()(t, 1) == ((t >= 3 && t <= 7) ? 0.0 : 5.0));
  }
  CHECK(kind_of([&] { inject_artefact(TimeSeries(base), 0, 0, 3, 1.0, 1); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { inject_artefact(TimeSeries(base), 0, 5, 21, 1.0, 1); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { inject_artefact(TimeSeries(base), 2, 1, 3, 1.0, 1); }) == ErrorKind::IndexOutOfRange);

  const TimeSeries big = inject_artefact(TimeSeries::scalar(Vector::Zero(10000)), 0, 1, 10000, 20.0, 9);
  const Vector v = big.column(0);
  const double sd = std::sqrt((v.array() - v.mean()).square().sum() / (v.size() - 1));
  CHECK(std::abs(sd / 20.0 - 1.0) < 0.03);
  CHECK(inject_artefact(TimeSeries::scalar(Vector::Zero(100)), 0, 10, 50, 2.0, 4).values() ==
        inject_artefact(TimeSeries::scalar(Vector::Zero(100)), 0, 10, 50, 2.0, 4).values());
}

TEST_CASE("experiment configuration") {
  ExperimentConfig c;
  c.set("rho", "0.25");
  c.set("out-dir", "results");
  c.set("measure_from_start", "false");
  c.set("r-max", "7");
  CHECK(*c.rho == 0.25);
  CHECK(c.out_dir == "results");
  CHECK_FALSE(c.measure_from_start);
  CHECK(c.r_max == 7);
  CHECK(kind_of([&] { c.set("nonsense", "1"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { c.set("order", "-3"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { c.set("header", "maybe"); }) == ErrorKind::ParseError);

  const fs::path path = scratch("run.cfg");
  {
    std::ofstream out(path);
    out << "# order scan\ncommand = order-scan\nseed = 42  # trailing comment\n\ntrials = 3\nlambda=0\n";
  }
  const ExperimentConfig f = ExperimentConfig::from_file(path);
  CHECK(f.command == "order-scan");
  CHECK(f.seed == 42);
  CHECK(f.trials == 3);
  CHECK(*f.lambda == 0.0);
  {
    std::ofstream out(path);
    out << "seed 42\n";
  }
  CHECK(kind_of([&] { ExperimentConfig::from_file(path); }) == ErrorKind::ParseError);
}
