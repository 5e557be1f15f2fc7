#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "arithvol/characteristic.hpp"
#include "arithvol/theta.hpp"

namespace arithvol {

// Decomposition data on the line: endpoints of the region, breakpoint
// radii, and the positive-part coefficients (theta on the zero section,
// -vartheta on the infinity section).  r_high is +inf when theta = 1.
struct ZariskiData {
  CoeffVector a;
  double vartheta = 0;
  double theta = 0;
  double r_low = 0;
  double r_high = 0;
  double coeff_H0 = 0;
  double coeff_H1 = 0;
};

inline ZariskiData decompose(const CoeffVector& a) {
  if (a.n() != 1) throw WrongDimension("decompose needs n = 1");
  if (a.sum_vs_one() < 0)
    throw NotPseudoEffective("decompose: |a| < 1, no decomposition");
  const auto [lo, hi] = endpoints_p1(ThetaRegion(a));
  ZariskiData z{a, lo, hi, 0, 0, hi, -lo};
  const double a0 = to_double(a.a(0)), a1 = to_double(a.a(1));
  z.r_low = lo == 0 ? 0.0 : std::sqrt(a0 * lo / (a1 * (1 - lo)));
  z.r_high = hi == 1 ? std::numeric_limits<double>::infinity()
                     : std::sqrt(a0 * hi / (a1 * (1 - hi)));
  return z;
}

// Original Green function log(a_0 + a_1 r^2) at radius r.
inline double green_ga(const ZariskiData& z, double r) {
  if (!(r >= 0)) throw OutOfDomain("green_ga: r must be >= 0");
  return std::log(to_double(z.a.a(0)) + to_double(z.a.a(1)) * r * r);
}

// Green function of the positive part:
//   vartheta log r^2          r < r_low
//   log(a_0 + a_1 r^2)        r_low <= r <= r_high
//   theta log r^2             r > r_high
// At r = 0 the first branch is a log pole (-inf) when vartheta > 0.
inline double green_positive(const ZariskiData& z, double r) {
  if (!(r >= 0)) throw OutOfDomain("green_positive: r must be >= 0");
  if (r == 0)
    return z.vartheta > 0 ? -std::numeric_limits<double>::infinity()
                          : std::log(to_double(z.a.a(0)));
  if (r < z.r_low) return z.vartheta * 2 * std::log(r);
  if (r <= z.r_high) return green_ga(z, r);
  return z.theta * 2 * std::log(r);
}

// Nonnegative correction terms from the decomposition proof:
//   r1 = p_a - vartheta log r^2   on [0, r_high]   (0 at and below r_low)
//   r2 = p_a - theta log r^2      on [r_low, inf)  (0 at and above r_high)
// evaluated branch-by-branch so the vanishing ends are exact.  Radii
// outside a domain leave that entry empty.
struct Correction {
  std::optional<double> r1;
  std::optional<double> r2;
};

inline Correction correction_r1_r2(const ZariskiData& z, double r) {
  if (!(r >= 0)) throw OutOfDomain("correction_r1_r2: r must be >= 0");
  Correction c;
  if (r <= z.r_high) {
    if (r == 0)
      // the pole of vartheta log r^2 cancels exactly when vartheta > 0
      c.r1 = z.vartheta > 0 ? 0.0 : green_ga(z, 0);
    else if (r <= z.r_low)
      c.r1 = 0.0;
    else
      c.r1 = green_ga(z, r) - z.vartheta * 2 * std::log(r);
  }
  if (r >= z.r_low && r > 0) {
    if (r >= z.r_high)
      c.r2 = 0.0;
    else
      c.r2 = green_ga(z, r) - z.theta * 2 * std::log(r);
  }
  return c;
}

// Asymptotic multiplicities on the two horizontal divisors:
//   mu_H0 = min over the region of 1 - x  = 1 - theta
//   mu_H1 = min over the region of x      = vartheta
// both produced by the linear minimizer, not read off the endpoints.
inline std::pair<double, double> mu_multiplicities(const CoeffVector& a) {
  if (a.n() != 1) throw WrongDimension("mu_multiplicities needs n = 1");
  if (a.sum_vs_one() < 0)
    throw NotPseudoEffective("mu_multiplicities: |a| < 1");
  const ThetaRegion T(a);
  const double mu0 = minimize_linear(T, std::vector<double>{1.0, 0.0}).value;
  const double mu1 = minimize_linear(T, std::vector<double>{0.0, 1.0}).value;
  return {mu0, mu1};
}

}  // namespace arithvol
