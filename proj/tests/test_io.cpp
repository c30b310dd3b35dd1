#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "io/coordinate.hpp"
#include "io/eigout.hpp"
#include "io/runspec.hpp"
#include "io/session.hpp"
#include "support/fixtures.hpp"

using namespace spslice;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  fs::path old;
  TempDir() {
    old = fs::current_path();
    path = fs::temp_directory_path() /
           ("spslice_io_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
    fs::current_path(path);
  }
  ~TempDir() {
    fs::current_path(old);
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const char* kFixtureMtx =
    "4 4 14\n"
    "1 1 2.0\n1 2 -1.0\n1 3 -1.0\n"
    "2 1 -1.0\n2 2 3.0\n2 3 -1.0\n2 4 -1.0\n"
    "3 1 -1.0\n3 2 -1.0\n3 3 3.0\n3 4 -1.0\n"
    "4 2 -1.0\n4 3 -1.0\n4 4 2.0\n";

const char* kFixtureIn =
    "s       ! s: symmetric, h: hermitian, g: general\n"
    "e       ! e=standard or g=generalized eigenvalue problem\n"
    "d       ! (d,z) precision\n"
    "F       ! UPLO\n"
    "3.0d0   ! Emin\n"
    "5.0e0   ! Emax\n"
    "3       ! M0 search subspace\n"
    "1       !!!! changes from defaults\n"
    "2 4     !fpm(2)=4\n";

} // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("coordinate parsing reproduces the fixture CSR arrays") {
  TempDir dir;
  write_file(dir.file("a.mtx"), kFixtureMtx);
  const CsrReal m = read_coordinate_real(dir.file("a.mtx"));
  const CsrReal expect = fixtures::helloworld_csr();
  CHECK(m.n == 4);
  CHECK(m.row_ptr == expect.row_ptr); // (1,4,8,12,15) in 1-based form
  CHECK(m.col_idx == expect.col_idx);
  for (size_t k = 0; k < expect.values.size(); ++k) CHECK(m.values[k] == expect.values[k]);
}

TEST_CASE("one-by-one matrix and malformed entries") {
  TempDir dir;
  write_file(dir.file("tiny.mtx"), "1 1 1\n1 1 5.0\n");
  const CsrReal tiny = read_coordinate_real(dir.file("tiny.mtx"));
  CHECK(tiny.n == 1);
  CHECK(tiny.values[0] == 5.0);

  write_file(dir.file("bad.mtx"), "4 4 1\n5 1 1.0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_coordinate_real(dir.file("bad.mtx"))),
                       doctest::Contains("bad.mtx:2"), std::runtime_error);

  write_file(dir.file("short.mtx"), "2 2 3\n1 1 1.0\n");
  CHECK_THROWS(static_cast<void>(read_coordinate_real(dir.file("short.mtx"))));
}

TEST_CASE("coordinate round trip is exact") {
  TempDir dir;
  fixtures::TestRng rng(8);
  const CsrReal m = fixtures::dense_to_csr(fixtures::random_symmetric(9, rng));
  write_coordinate(dir.file("r.mtx"), m);
  const CsrReal back = read_coordinate_real(dir.file("r.mtx"));
  CHECK(back.row_ptr == m.row_ptr);
  CHECK(back.col_idx == m.col_idx);
  for (size_t k = 0; k < m.values.size(); ++k) CHECK(back.values[k] == m.values[k]);

  CsrComplex c;
  c.n = 2;
  c.row_ptr = {0, 1, 2};
  c.col_idx = {1, 0};
  c.values = {cplx(1.5, -2.25), cplx(-0.125, 3.0)};
  write_coordinate(dir.file("c.mtx"), c);
  const CsrComplex cb = read_coordinate_complex(dir.file("c.mtx"));
  for (size_t k = 0; k < c.values.size(); ++k) CHECK(cb.values[k] == c.values[k]);
}

TEST_CASE("run configuration parsing") {
  TempDir dir;
  write_file(dir.file("run.in"), kFixtureIn);
  const RunSpec spec = read_runspec(dir.file("run.in"));
  CHECK(spec.structure == 's');
  CHECK(spec.form == 'e');
  CHECK(spec.precision == 'd');
  CHECK(spec.uplo == Uplo::Full);
  CHECK(std::get<Interval>(spec.region).emin == doctest::Approx(3.0));
  CHECK(std::get<Interval>(spec.region).emax == doctest::Approx(5.0));
  CHECK(spec.m0 == 3);
  REQUIRE(spec.overrides.size() == 1);
  CHECK(spec.overrides[0] == std::pair<int, int>{2, 4});
  CHECK(spec.problem_structure() == Structure::RealSymmetric);
}

TEST_CASE("run configuration: zero overrides and whitespace tolerance") {
  TempDir dir;
  write_file(dir.file("run.in"), "  s\ng\n  d\nL\n0.18d0\n1.00d0\n25\n0\n");
  const RunSpec spec = read_runspec(dir.file("run.in"));
  CHECK(spec.form == 'g');
  CHECK(spec.uplo == Uplo::Lower);
  CHECK(std::get<Interval>(spec.region).emin == doctest::Approx(0.18));
  CHECK(spec.m0 == 25);
  CHECK(spec.overrides.empty());
}

TEST_CASE("run configuration: general problems use center/radius lines") {
  TempDir dir;
  write_file(dir.file("run.in"), "g\ne\nz\nF\n0.5\n-0.25\n2.0\n6\n0\n");
  const RunSpec spec = read_runspec(dir.file("run.in"));
  CHECK(spec.problem_structure() == Structure::ComplexGeneral);
  const auto& e = std::get<Ellipse>(spec.region);
  CHECK(e.center == cplx(0.5, -0.25));
  CHECK(e.radius == doctest::Approx(2.0));
}

TEST_CASE("run configuration: bad letters are rejected with context") {
  TempDir dir;
  write_file(dir.file("run.in"), "q\ne\nd\nF\n0\n1\n4\n0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_runspec(dir.file("run.in"))),
                       doctest::Contains("'q'"), std::runtime_error);
  write_file(dir.file("run2.in"), "s\ne\nd\nF\n0\n1\n4\n2\n1 1\n2 6\n");
  CHECK_NOTHROW(static_cast<void>(read_runspec(dir.file("run2.in"))));
  write_file(dir.file("run3.in"), "s\ne\nd\nF\n0\n1\n4\n1\n65 3\n");
  CHECK_THROWS(static_cast<void>(read_runspec(dir.file("run3.in"))));
}

TEST_CASE("eig.out formatting") {
  TempDir dir;
  EigResult r;
  r.n = 4;
  r.m0 = 3;
  r.m = 2;
  r.eigenvalues = {cplx(4.0, 0.0), cplx(3.9999999999999, 0.0), cplx(0, 0)};
  r.residuals = {1e-15, 2e-15, 0.0};
  write_eigout(r, dir.file("eig.out"), false);
  std::ifstream in(dir.file("eig.out"));
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l1.substr(0, 2) == "1 ");
  CHECK(l2.substr(0, 2) == "2 ");
  CHECK(l1.find("3.9999999999999") != std::string::npos); // ascending order
  CHECK(!std::getline(in, l3));

  EigResult empty;
  empty.m = 0;
  write_eigout(empty, dir.file("empty.out"), false);
  std::ifstream ein(dir.file("empty.out"));
  std::getline(ein, l1);
  CHECK(l1.rfind("#", 0) == 0);

  EigResult cpx;
  cpx.m = 1;
  cpx.eigenvalues = {cplx(1.5, -2.5)};
  cpx.residuals = {1e-12};
  write_eigout(cpx, dir.file("cpx.out"), true);
  std::ifstream cin2(dir.file("cpx.out"));
  std::getline(cin2, l1);
  CHECK(l1.find("-2.5000") != std::string::npos); // four columns for complex runs
}

TEST_CASE("file session: standard symmetric run end to end") {
  TempDir dir;
  write_file(dir.file("hello.mtx"), kFixtureMtx);
  write_file(dir.file("hello.in"), kFixtureIn);
  SessionOptions opts;
  opts.seed = 7;
  const SessionResult res = run_files(dir.file("hello"), opts);
  CHECK(res.error.empty());
  CHECK(res.exit_code == 0);
  CHECK(res.info.ok());
  std::ifstream eig("eig.out");
  REQUIRE(eig.good());
  int idx1 = 0, idx2 = 0;
  double v1 = 0, v2 = 0, r1 = 1, r2 = 1;
  REQUIRE((eig >> idx1 >> v1 >> r1));
  REQUIRE((eig >> idx2 >> v2 >> r2));
  CHECK(idx1 == 1);
  CHECK(idx2 == 2);
  CHECK(v1 == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(v2 == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(r1 < 1e-12);
  CHECK(r2 < 1e-12);
}

TEST_CASE("file session: deterministic output with a fixed seed") {
  TempDir dir;
  write_file(dir.file("hello.mtx"), kFixtureMtx);
  write_file(dir.file("hello.in"), kFixtureIn);
  SessionOptions opts;
  opts.seed = 12345;
  REQUIRE(run_files(dir.file("hello"), opts).exit_code == 0);
  const std::string body1 = slurp("eig.out");
  REQUIRE(run_files(dir.file("hello"), opts).exit_code == 0);
  CHECK(slurp("eig.out") == body1);

  opts.workers = 4;
  REQUIRE(run_files(dir.file("hello"), opts).exit_code == 0);
  CHECK(slurp("eig.out") == body1);
}

TEST_CASE("file session: missing mass matrix for a generalized run") {
  TempDir dir;
  write_file(dir.file("gen.mtx"), kFixtureMtx);
  write_file(dir.file("gen.in"), "s\ng\nd\nF\n3.0\n5.0\n3\n0\n");
  SessionOptions opts;
  const SessionResult res = run_files(dir.file("gen"), opts);
  CHECK(res.exit_code == 64);
  CHECK(res.error.find("genB.mtx") != std::string::npos);
}

TEST_CASE("file session: negative print level appends a log file") {
  TempDir dir;
  write_file(dir.file("hello.mtx"), kFixtureMtx);
  write_file(dir.file("hello.in"),
             "s\ne\nd\nF\n3.0\n5.0\n3\n1\n1 -3\n"); // print level -3
  SessionOptions opts;
  opts.seed = 3;
  REQUIRE(run_files(dir.file("hello"), opts).exit_code == 0);
  const std::string body = slurp("feast3.log");
  CHECK(body.find("spectral-slice") != std::string::npos);
  REQUIRE(run_files(dir.file("hello"), opts).exit_code == 0);
  CHECK(slurp("feast3.log").size() > body.size()); // append mode
}

TEST_CASE("file session: triangular storage letters engage expansion") {
  TempDir dir;
  write_file(dir.file("low.mtx"),
             "4 4 9\n1 1 2.0\n2 1 -1.0\n2 2 3.0\n3 1 -1.0\n3 2 -1.0\n3 3 3.0\n"
             "4 2 -1.0\n4 3 -1.0\n4 4 2.0\n");
  write_file(dir.file("low.in"), "s\ne\nd\nL\n3.0\n5.0\n3\n0\n");
  SessionOptions opts;
  opts.seed = 99;
  const SessionResult res = run_files(dir.file("low"), opts);
  CHECK(res.exit_code == 0);
  std::ifstream eig("eig.out");
  int idx = 0;
  double v = 0, rres = 1;
  REQUIRE((eig >> idx >> v >> rres));
  CHECK(v == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("file session: no eigenvalue in range still exits cleanly") {
  TempDir dir;
  write_file(dir.file("hello.mtx"), kFixtureMtx);
  write_file(dir.file("hello.in"), "s\ne\nd\nF\n10.0\n11.0\n3\n0\n");
  SessionOptions opts;
  opts.seed = 1;
  const SessionResult res = run_files(dir.file("hello"), opts);
  CHECK(res.exit_code == 0); // warning statuses stay usable
  CHECK(res.info == InfoCode::NoEigenvalueFound);
  const std::string body = slurp("eig.out");
  CHECK(body.rfind("#", 0) == 0);
}

TEST_SUITE_END();
