#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gendiff/errors.hpp"
#include "gendiff/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace gendiff;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gendiff_io_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

Signal random_signal(const GridSpec& g, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> s(g.size());
  for (auto& z : s) z = {d(rng), d(rng)};
  return Signal(g, s);
}

} // namespace

TEST_CASE("signal files roundtrip bit-exactly") {
  TempDir tmp;
  const auto g = make_grid(3.5, 64);
  const auto f = random_signal(g, 1);
  const auto path = tmp.path / "sub" / "f.csv";
  io::write_signal(path, f);
  CHECK(fs::exists(io::sidecar_path(path)));
  const auto back = io::read_signal(path);
  CHECK(back.grid() == g);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(back[j] == f[j]);
  const auto side = io::read_json(io::sidecar_path(path));
  CHECK(side.at("schema_version") == io::kSchemaVersion);
  CHECK(side.at("kind") == "signal");
}

TEST_CASE("spectrum files roundtrip bit-exactly") {
  TempDir tmp;
  const auto g = make_grid(2.0, 32);
  const auto F = forward_transform(random_signal(g, 2));
  const auto path = tmp.path / "F.csv";
  io::write_spectrum(path, F);
  const auto back = io::read_spectrum(path);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == F[i]);
  CHECK_THROWS_AS(io::read_signal(path), ParseError);
}

TEST_CASE("malformed signal files") {
  TempDir tmp;
  const auto g = make_grid(1.0, 4);
  const auto path = tmp.path / "f.csv";
  io::write_signal(path, Signal::zeros(g));
  auto line_of = [&](const std::string& body) -> std::size_t {
    spit(path, body);
    try {
      io::read_signal(path);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  SUBCASE("empty file") { CHECK(line_of("") != 999); }
  SUBCASE("bad header") { CHECK(line_of("i,a,b\n0,1,2\n") == 1); }
  SUBCASE("unparsable number") { CHECK(line_of("index,re,im\n0,1,2\n1,x,0\n2,0,0\n3,0,0\n") == 3); }
  SUBCASE("missing field") { CHECK(line_of("index,re,im\n0,1,2\n1,0,0\n2,0\n3,0,0\n") == 4); }
  SUBCASE("index out of sequence") { CHECK(line_of("index,re,im\n0,1,2\n2,0,0\n1,0,0\n3,0,0\n") == 3); }
  SUBCASE("row count disagrees with the sidecar") {
    spit(path, "index,re,im\n0,1,2\n1,0,0\n");
    CHECK_THROWS_WITH_AS(io::read_signal(path), doctest::Contains("grid mismatch"), ParseError);
  }
}

TEST_CASE("membership reports serialize to JSON") {
  MembershipReport r;
  r.integrals = {1.0, 2.0, 3.5};
  r.growth_exponent = 0.58;
  r.verdict = Verdict::non_member;
  r.excluded_mass = 1e-3;
  const auto j = io::to_json(r);
  CHECK(j.at("schema_version") == io::kSchemaVersion);
  CHECK(j.at("I").size() == 3);
  CHECK(j.at("verdict") == to_string(Verdict::non_member));
  const auto back = io::membership_report_from_json(j);
  CHECK(back.integrals == r.integrals);
  CHECK(back.growth_exponent == r.growth_exponent);
  CHECK(back.verdict == r.verdict);
  CHECK(back.excluded_mass == r.excluded_mass);

  r.growth_exponent = std::numeric_limits<double>::infinity();
  CHECK(io::to_json(r).at("q").is_null());
  CHECK(std::isinf(io::membership_report_from_json(io::to_json(r)).growth_exponent));
  CHECK_THROWS_AS(io::membership_report_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("decomposition directories roundtrip") {
  TempDir tmp;
  const auto g = make_grid(16.0, 1024);
  Params p;
  p.alpha = 1.0;
  p.beta = -1.0;
  const auto f = synthesize_test_member(g, 1.0, -1.0, 1, 3.0);
  const auto d = decompose(p, f, {0.3, -0.6, 0.9, 0.15, -0.2});
  const auto dir = tmp.path / "dec";
  io::write_decomposition(dir, d, {{"note", "x"}});
  for (const char* name : {"shifts.json", "component_1.csv", "component_5.csv", "residual.csv", "report.json"})
    CHECK(fs::exists(dir / name));
  const auto report = io::read_json(dir / "report.json");
  CHECK(report.at("relative_residual") == d.relative_residual);
  CHECK(report.at("component_count") == 5);
  CHECK(report.at("note") == "x");
  CHECK(report.contains("degenerate_nodes"));
  const auto back = io::read_decomposition(dir);
  CHECK(back.shifts == d.shifts);
  REQUIRE(back.components.size() == d.components.size());
  for (std::size_t k = 0; k < d.components.size(); ++k)
    for (std::size_t j = 0; j < g.size(); j += 17) CHECK(back.components[k][j] == d.components[k][j]);
  CHECK(back.relative_residual == d.relative_residual);
}

TEST_CASE("xy csv output") {
  TempDir tmp;
  const auto path = tmp.path / "xy.csv";
  io::write_xy_csv(path, {0.5, 1.0}, {2.0, std::nan("")});
  CHECK(slurp(path) == "x,value\n0.5,2\n1,nan\n");
  CHECK_THROWS_AS(io::write_xy_csv(path, {0.5}, {}), std::invalid_argument);
}

TEST_CASE("run configuration") {
  SUBCASE("defaults roundtrip") {
    const io::RunConfig c;
    CHECK(io::parse_config(io::serialize_config(c)) == c);
  }
  SUBCASE("random configurations roundtrip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-5.0, 5.0), pos(0.01, 3.0);
    for (int t = 0; t < 200; ++t) {
      io::RunConfig c;
      c.params.alpha = d(rng);
      c.params.beta = d(rng);
      c.params.order = 1 + t % 4;
      c.params.eps0 = pos(rng);
      c.params.tau = pos(rng) * 1e-13;
      c.params.q_tol = pos(rng) / 10;
      c.grid_l = 1.0 + pos(rng) * 10;
      c.grid_n = std::size_t{4} << (t % 10);
      c.shift_window = pos(rng);
      if (t % 2) c.shift_count = 1 + t % 17;
      c.seed = rng();
      c.output_dir = "runs/" + std::to_string(t);
      CHECK(io::parse_config(io::serialize_config(c)) == c);
    }
  }
  SUBCASE("comments, blank lines and partial files") {
    const auto c = io::parse_config("# header\n\nalpha = 0.5\n  order=2  # trailing\nshift_count = auto\n");
    CHECK(c.params.alpha == 0.5);
    CHECK(c.params.order == 2);
    CHECK_FALSE(c.shift_count.has_value());
    CHECK(c.effective_shift_count() == 9);
  }
  SUBCASE("errors carry the line number") {
    try {
      io::parse_config("alpha = 1\nwidth = 3\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(io::parse_config("alpha 1\n"), ParseError);
    CHECK_THROWS_AS(io::parse_config("order = two\n"), ParseError);
  }
  SUBCASE("validation") {
    io::RunConfig c;
    c.shift_window = 0.0;
    CHECK_THROWS(c.validate());
    c = {};
    c.shift_count = 0;
    CHECK_THROWS(c.validate());
    c = {};
    c.grid_n = 7;
    CHECK_THROWS(c.validate());
  }
  SUBCASE("load from disk") {
    TempDir tmp;
    io::RunConfig c;
    c.params.beta = 2.25;
    spit(tmp.path / "run.cfg", io::serialize_config(c));
    CHECK(io::load_config(tmp.path / "run.cfg") == c);
    CHECK_THROWS(io::load_config(tmp.path / "missing.cfg"));
  }
}
