#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "arithvol/zariski.hpp"

using namespace arithvol;

namespace {

CoeffVector make(std::initializer_list<Rational> rs) {
  return CoeffVector(std::vector<Rational>(rs));
}

const CoeffVector a11 = make({Rational(1), Rational(1)});
const CoeffVector a21 = make({Rational(2), Rational(1, 2)});
const CoeffVector ahalf = make({Rational(1, 2), Rational(1, 2)});

}  // namespace

TEST_CASE("decomposition endpoints and radii, frozen values") {
  const ZariskiData z = decompose(a21);
  CHECK(z.vartheta == 0.0);
  CHECK(z.theta == Catch::Approx(0.829464339150).margin(1e-11));
  CHECK(z.r_low == 0.0);
  CHECK(z.r_high == Catch::Approx(4.410839458846).margin(1e-9));
  const ZariskiData full = decompose(a11);
  CHECK(full.vartheta == 0.0);
  CHECK(full.theta == 1.0);
  CHECK(full.r_low == 0.0);
  CHECK(std::isinf(full.r_high));
  CHECK_THROWS_AS(decompose(make({Rational(2, 5), Rational(2, 5)})),
                  NotPseudoEffective);
  CHECK_THROWS_AS(decompose(make({Rational(1), Rational(1), Rational(1)})),
                  WrongDimension);
}

TEST_CASE("boundary case |a| = 1 pins everything at the center") {
  const ZariskiData z = decompose(ahalf);
  CHECK(z.vartheta == 0.5);
  CHECK(z.theta == 0.5);
  CHECK(z.r_low == Catch::Approx(1.0).margin(1e-12));
  CHECK(z.r_high == Catch::Approx(1.0).margin(1e-12));
  CHECK(green_positive(z, 1.0) == 0.0);  // p(1) = log(a0 + a1) = log 1
  const Correction c = correction_r1_r2(z, 1.0);
  REQUIRE(c.r1.has_value());
  REQUIRE(c.r2.has_value());
  CHECK(*c.r1 == 0.0);
  CHECK(*c.r2 == 0.0);
  CHECK(z.coeff_H0 == Catch::Approx(0.5).margin(1e-12));
  CHECK(z.coeff_H1 == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("positive part: branch continuity and the two-sided envelope") {
  std::mt19937_64 rng(20260825);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  int done = 0;
  while (done < 20) {
    const Rational q0(static_cast<long>(u(rng) * 4096), 4096);
    const Rational q1(static_cast<long>(u(rng) * 4096), 4096);
    if (q0 <= 0 || q1 <= 0 || q0 + q1 < 1) continue;
    ++done;
    const CoeffVector a = make({q0, q1});
    const ZariskiData z = decompose(a);
    const auto check_radius = [&](double r) {
      if (!(r > 0) || !std::isfinite(r)) return;
      const double h = 1e-10 * std::max(1.0, r);
      const double jump =
          std::abs(green_positive(z, r + h) - green_positive(z, r - h));
      CHECK(jump <= 1e-9);
    };
    check_radius(z.r_low);
    check_radius(z.r_high);
    for (int k = 0; k <= 1000; ++k) {
      const double r = std::pow(10.0, -3.0 + 6.0 * k / 1000);
      const double g = green_ga(z, r);
      const double p = green_positive(z, r);
      CHECK(p <= g + 1e-12);
      CHECK(p - z.vartheta * 2 * std::log(r) >= -1e-12);
    }
  }
}

TEST_CASE("corrections live on their half-lines") {
  const ZariskiData z = decompose(a21);  // r_low = 0, r_high = 4.41...
  const Correction at2 = correction_r1_r2(z, 2.0);
  REQUIRE(at2.r1.has_value());
  REQUIRE(at2.r2.has_value());
  CHECK(*at2.r1 == Catch::Approx(green_ga(z, 2.0)).margin(1e-12));
  CHECK(*at2.r1 >= 0);
  CHECK(*at2.r2 >= 0);
  const Correction far = correction_r1_r2(z, 10.0);
  CHECK_FALSE(far.r1.has_value());  // past r_high
  REQUIRE(far.r2.has_value());
  CHECK(*far.r2 == 0.0);
  const Correction origin = correction_r1_r2(z, 0.0);
  REQUIRE(origin.r1.has_value());  // vartheta = 0 keeps r1 finite at 0
  CHECK(*origin.r1 == Catch::Approx(std::log(2.0)).margin(1e-12));
  CHECK_FALSE(origin.r2.has_value());
  // vartheta > 0: r1 is identically zero below r_low
  const ZariskiData zh = decompose(ahalf);
  const Correction low = correction_r1_r2(zh, 0.5);
  REQUIRE(low.r1.has_value());
  CHECK(*low.r1 == 0.0);
  CHECK_FALSE(low.r2.has_value());
}

TEST_CASE("correction r1 satisfies the circle sub-mean inequality") {
  // (2,1/2): r1 = log(2 + r^2/2) on (0, r_high], genuinely curved
  const ZariskiData z = decompose(a21);
  const double cx = 0.7, eps = 1e-3;
  const auto r1_at = [&](double x, double y) {
    return *correction_r1_r2(z, std::hypot(x, y)).r1;
  };
  double avg = 0;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * std::numbers::pi * k / 64;
    avg += r1_at(cx + eps * std::cos(t), eps * std::sin(t));
  }
  avg /= 64;
  CHECK(avg >= r1_at(cx, 0.0) - 1e-8);
}

TEST_CASE("asymptotic multiplicities equal (1 - theta, vartheta)") {
  const auto [m0, m1] = mu_multiplicities(a21);
  CHECK(m0 == Catch::Approx(1 - 0.829464339150).margin(1e-9));
  CHECK(m1 == Catch::Approx(0.0).margin(1e-12));
  const auto [h0, h1] = mu_multiplicities(ahalf);
  CHECK(h0 == Catch::Approx(0.5).margin(1e-9));
  CHECK(h1 == Catch::Approx(0.5).margin(1e-9));
  const auto [f0, f1] = mu_multiplicities(a11);
  CHECK(f0 == Catch::Approx(0.0).margin(1e-12));
  CHECK(f1 == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("scaling toward the boundary pinches the interval") {
  double lo_prev = -1;
  double hi_prev = 2;
  for (const Rational t : {Rational(11, 10), Rational(101, 100),
                           Rational(1001, 1000)}) {
    const ZariskiData z = decompose(ahalf.scaled(t));
    CHECK(z.vartheta > lo_prev);
    CHECK(z.theta < hi_prev);
    CHECK(z.vartheta < 0.5);
    CHECK(z.theta > 0.5);
    lo_prev = z.vartheta;
    hi_prev = z.theta;
  }
}
