#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gendiff/grid.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace gendiff;
using oracle::pi;

namespace {

Signal random_signal(const GridSpec& g, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  return Signal(g, oracle::random_complex(rng, g.size()));
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

} // namespace

TEST_CASE("grid geometry") {
  SUBCASE("L = pi, N = 4") {
    const auto g = make_grid(pi, 4);
    CHECK(g.spacing() == doctest::Approx(pi / 2));
    CHECK(g.frequency(0) == doctest::Approx(-2.0));
    CHECK(g.frequency(1) == doctest::Approx(-1.0));
    CHECK(g.frequency(2) == 0.0);
    CHECK(g.frequency(3) == doctest::Approx(1.0));
    CHECK(g.spacing() * 4 == doctest::Approx(2 * pi));
  }
  SUBCASE("L = 16, N = 1024") {
    const auto g = make_grid(16.0, 1024);
    CHECK(g.spacing() == 1.0 / 32.0);
    CHECK(g.frequency_step() == doctest::Approx(pi / 16));
    CHECK(g.min_frequency() == doctest::Approx(-32.0 * pi));
    CHECK(g.sample_point(0) == -16.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.frequency(i) > g.frequency(i - 1));
    // symmetric about zero up to the one-sided endpoint
    for (std::size_t i = 1; i < g.size(); ++i)
      CHECK(g.frequency(i) == doctest::Approx(-g.frequency(g.size() - i)));
  }
  SUBCASE("rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(pi, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(pi, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 8), std::invalid_argument);
  }
}

TEST_CASE("forward transform examples") {
  SUBCASE("constant on [-pi, pi)") {
    const auto g = make_grid(pi, 4);
    const auto F = forward_transform(Signal(g, std::vector<cplx>(4, 1.0)));
    CHECK(std::abs(F[2] - cplx(2 * pi)) < 1e-12);
    CHECK(std::abs(F[0]) < 1e-12);
    CHECK(std::abs(F[1]) < 1e-12);
    CHECK(std::abs(F[3]) < 1e-12);
  }
  SUBCASE("discrete delta at the origin") {
    const auto g = make_grid(pi, 64);
    auto f = Signal::zeros(g);
    f.mutable_samples()[32] = 1.0 / g.spacing();
    CHECK(g.sample_point(32) == 0.0);
    const auto F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) CHECK(std::abs(F[i] - cplx(1.0)) < 1e-12);
  }
  SUBCASE("Gaussian against the closed form") {
    const auto g = make_grid(16.0, 1024);
    std::vector<cplx> s(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) s[j] = std::exp(-0.5 * g.sample_point(j) * g.sample_point(j));
    const auto F = forward_transform(Signal(g, s));
    CHECK(std::abs(F[512] - std::sqrt(2 * pi)) < 1e-8);
    for (std::size_t i = 0; i < F.size(); i += 7) {
      const double x = F.frequency(i);
      CHECK(std::abs(F[i] - std::sqrt(2 * pi) * std::exp(-0.5 * x * x)) < 1e-8);
    }
  }
  SUBCASE("matches the direct Riemann sum at every node") {
    const auto g = make_grid(3.0, 64);
    const auto f = random_signal(g, 9);
    const auto F = forward_transform(f);
    const std::vector<cplx> s(f.samples().begin(), f.samples().end());
    for (std::size_t i = 0; i < F.size(); ++i)
      CHECK(std::abs(F[i] - oracle::direct_transform(s, 3.0, F.frequency(i))) < 1e-11);
  }
}

TEST_CASE("inverse transform examples") {
  const auto g = make_grid(5.0, 256);
  SUBCASE("roundtrip of a random signal") {
    const auto f = random_signal(g, 1);
    const auto back = inverse_transform(forward_transform(f));
    CHECK(max_abs_diff(back.samples(), f.samples()) <= 1e-12 * max_abs(f.samples()));
    const auto F = forward_transform(f);
    const auto F2 = forward_transform(inverse_transform(F));
    CHECK(max_abs_diff(F2.coeffs(), F.coeffs()) <= 1e-12 * max_abs(F.coeffs()));
  }
  SUBCASE("zero spectrum") {
    const auto f = inverse_transform(Spectrum::zeros(g));
    CHECK(max_abs(f.samples()) == 0.0);
  }
  SUBCASE("single mode synthesis") {
    auto F = Spectrum::zeros(g);
    const std::size_t i0 = 140;
    F.mutable_coeffs()[i0] = 1.0;
    const double x0 = g.frequency(i0);
    const auto f = inverse_transform(F);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const cplx expect = std::polar(1.0 / (2 * 5.0), x0 * g.sample_point(j));
      CHECK(std::abs(f[j] - expect) < 1e-14);
    }
  }
}

TEST_CASE("Plancherel defect") {
  SUBCASE("random signal") {
    const auto f = random_signal(make_grid(8.0, 1024), 3);
    CHECK(plancherel_defect(f) <= 1e-10 * f.energy());
  }
  SUBCASE("zero signal") { CHECK(plancherel_defect(Signal::zeros(make_grid(1.0, 16))) == 0.0); }
  SUBCASE("constant on [-pi, pi)") {
    const Signal f(make_grid(pi, 64), std::vector<cplx>(64, 1.0));
    CHECK(f.energy() == doctest::Approx(2 * pi));
    CHECK(plancherel_defect(f) <= 1e-10 * 2 * pi);
  }
  SUBCASE("1000 random signals") {
    const auto g = make_grid(4.0, 128);
    for (unsigned long long s = 0; s < 1000; ++s) {
      const auto f = random_signal(g, 100 + s);
      REQUIRE(plancherel_defect(f) <= 1e-10 * f.energy());
    }
  }
}

TEST_CASE("linearity and shift law") {
  const auto g = make_grid(6.0, 512);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_signal(g, rng());
    const auto h = random_signal(g, rng());
    const cplx a(std::normal_distribution<double>()(rng), 1.5), b(-0.25, std::normal_distribution<double>()(rng));
    const auto lhs = forward_transform(a * f + b * h);
    const auto Ff = forward_transform(f), Fh = forward_transform(h);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(lhs[i] - (a * Ff[i] + b * Fh[i])));
      scale = std::max(scale, std::abs(lhs[i]));
    }
    CHECK(err <= 1e-12 * scale);

    // circular shift by one step: (Sf)_j = f_{j-1}
    std::vector<cplx> shifted(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) shifted[j] = f[(j + g.size() - 1) % g.size()];
    const auto Fs = forward_transform(Signal(g, shifted));
    double serr = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      serr = std::max(serr, std::abs(Fs[i] - Ff[i] * std::polar(1.0, -g.frequency(i) * g.spacing())));
    CHECK(serr <= 1e-12 * max_abs(Ff.coeffs()));
  }
}

TEST_CASE("test member factory") {
  const auto g = make_grid(16.0, 4096);
  SUBCASE("spectrum is the polynomial times a positive bump") {
    const double alpha = 0.3, beta = 2.7;
    for (int p = 0; p <= 3; ++p) {
      const auto f = synthesize_test_member(g, alpha, beta, p, 3.0);
      const auto F = forward_transform(f);
      for (std::size_t i = 1990; i < 2120; i += 7) {
        const double x = F.frequency(i);
        const double poly = std::pow((x - alpha) * (x - beta), p);
        if (std::abs(poly) < 1e-6) continue;
        const cplx bump = F[i] / poly;
        CHECK(std::abs(bump.imag()) <= 1e-9 * std::abs(bump.real()) + 1e-12);
        CHECK(bump.real() > 0.0);
      }
      // decays at the spatial edges
      CHECK(std::abs(f[0]) <= 1e-12 * f.l2_norm());
    }
  }
  SUBCASE("bump is Gaussian in frequency") {
    const auto F = forward_transform(synthesize_test_member(g, 0.0, 0.0, 0, 2.0));
    const double peak = F[2048].real();
    for (std::size_t i = 2000; i < 2100; i += 5) {
      const double x = F.frequency(i);
      CHECK(F[i].real() == doctest::Approx(peak * std::exp(-x * x / 8.0)).epsilon(1e-9));
    }
  }
  SUBCASE("alpha or beta outside the frequency range") {
    CHECK_THROWS_AS(synthesize_test_member(g, 1e4, 0.0, 1, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_test_member(g, 0.0, -1e4, 1, 3.0), std::invalid_argument);
  }
}

TEST_CASE("random smooth signals decay inside the window") {
  const auto g = make_grid(16.0, 4096);
  for (unsigned long long s = 1; s <= 20; ++s) {
    const auto f = random_smooth_signal(g, s);
    CHECK(f.l2_norm() > 0.0);
    CHECK(std::abs(f[0]) <= 1e-12 * max_abs(f.samples()));
    CHECK(std::abs(f[g.size() - 1]) <= 1e-12 * max_abs(f.samples()));
  }
  CHECK(max_abs_diff(random_smooth_signal(g, 4).samples(), random_smooth_signal(g, 4).samples()) == 0.0);
}
