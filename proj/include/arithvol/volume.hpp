#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "arithvol/characteristic.hpp"
#include "arithvol/quadrature.hpp"
#include "arithvol/theta.hpp"

namespace arithvol {

struct GeographyReport {
  bool ample = false;
  bool nef = false;
  bool big = false;
  bool pseudo_effective = false;
  std::string label;
  std::string witness;
};

// All four flags come from exact rational comparisons: ample iff every
// a_i > 1, nef iff every a_i >= 1, big iff |a| > 1, pseudo-effective iff
// |a| >= 1.
inline GeographyReport classify(const CoeffVector& a) {
  GeographyReport r;
  r.ample = true;
  r.nef = true;
  int arg_min = 0;
  for (int i = 0; i <= a.n(); ++i) {
    if (a.a(i) <= 1) r.ample = false;
    if (a.a(i) < 1) r.nef = false;
    if (a.a(i) < a.a(arg_min)) arg_min = i;
  }
  r.big = a.sum_vs_one() > 0;
  r.pseudo_effective = a.sum_vs_one() >= 0;
  const std::string min_s = rational_string(a.a(arg_min));
  const std::string sum_s = rational_string(a.sum());
  if (r.ample) {
    r.label = "Ample";
    r.witness = "min a_i = " + min_s + " > 1";
  } else if (r.nef) {
    r.label = "NefNotAmple";
    r.witness = "min a_i = " + min_s + " >= 1, not all > 1";
  } else if (r.big) {
    r.label = "BigNotNef";
    r.witness = "min a_i = " + min_s + " < 1, |a| = " + sum_s + " > 1";
  } else if (r.pseudo_effective) {
    r.label = "OnPsefBoundary";
    r.witness = "|a| = " + sum_s + " = 1";
  } else {
    r.label = "NotPsef";
    r.witness = "|a| = " + sum_s + " < 1";
  }
  return r;
}

namespace detail {

struct Tri {
  double ax, ay, bx, by, cx, cy;
};

inline double tri_area(const Tri& t) {
  return 0.5 * std::abs((t.bx - t.ax) * (t.cy - t.ay) -
                        (t.cx - t.ax) * (t.by - t.ay));
}

inline std::array<Tri, 4> tri_split(const Tri& t) {
  const double mabx = 0.5 * (t.ax + t.bx), maby = 0.5 * (t.ay + t.by);
  const double mbcx = 0.5 * (t.bx + t.cx), mbcy = 0.5 * (t.by + t.cy);
  const double mcax = 0.5 * (t.cx + t.ax), mcay = 0.5 * (t.cy + t.ay);
  return {Tri{t.ax, t.ay, mabx, maby, mcax, mcay},
          Tri{mabx, maby, t.bx, t.by, mbcx, mbcy},
          Tri{mcax, mcay, mbcx, mbcy, t.cx, t.cy},
          Tri{mabx, maby, mbcx, mbcy, mcax, mcay}};
}

// degree-5 7-point rule (centroid + two symmetric orbits)
template <class F>
inline double tri_rule7(F&& f, const Tri& t) {
  static constexpr double kA = 0.059715871789769820;
  static constexpr double kB = 0.470142064105115090;
  static constexpr double kC = 0.101286507323456339;
  static constexpr double kD = 0.797426985353087322;
  static constexpr double kWc = 0.225;
  static constexpr double kW1 = 0.132394152788506181;
  static constexpr double kW2 = 0.125939180544827153;
  const auto at = [&](double u, double v, double w) {
    return f(u * t.ax + v * t.bx + w * t.cx, u * t.ay + v * t.by + w * t.cy);
  };
  double s = kWc * at(1.0 / 3, 1.0 / 3, 1.0 / 3);
  s += kW1 * (at(kB, kB, kA) + at(kB, kA, kB) + at(kA, kB, kB));
  s += kW2 * (at(kC, kC, kD) + at(kC, kD, kC) + at(kD, kC, kC));
  return s * tri_area(t);
}

// est-vs-children adaptive refinement of the 7-point rule
template <class F>
inline double tri_adapt(F&& f, const Tri& t, double tol, int depth,
                        int max_depth, double& err_acc) {
  const double est = tri_rule7(f, t);
  const auto kids = tri_split(t);
  double s = 0;
  for (const Tri& k : kids) s += tri_rule7(f, k);
  const double diff = std::abs(est - s);
  if (diff <= tol || depth >= max_depth) {
    err_acc += diff / 15;
    return s;
  }
  double out = 0;
  for (const Tri& k : kids) out += tri_adapt(f, k, tol / 4, depth + 1, max_depth, err_acc);
  return out;
}

inline double phi_tilde_xy(const CoeffVector& a, double x, double y) {
  return phi_tilde(a, SimplexPoint({x, y}));
}

struct RegionSplit {
  std::vector<Tri> inside;
  double straddle_value = 0;
  double straddle_err = 0;
};

// Sort cells of the standard 2-simplex into inside / outside / straddling.
// Inside cells (all corner values >= 0) are kept whole: concavity of
// phi_tilde puts the full triangle in the region.  A cell is discarded as
// outside when the supporting plane at its centroid stays <= 0 over the
// cell, which is an upper bound for a concave function.  Straddling cells
// split until the depth cap, then contribute the midpoint of their
// certified range [0, area * ub].
inline void region_classify(const CoeffVector& a, const Tri& t, int depth,
                            int cap, RegionSplit& out) {
  const double v0 = phi_tilde_xy(a, t.ax, t.ay);
  const double v1 = phi_tilde_xy(a, t.bx, t.by);
  const double v2 = phi_tilde_xy(a, t.cx, t.cy);
  if (v0 >= 0 && v1 >= 0 && v2 >= 0) {
    out.inside.push_back(t);
    return;
  }
  const double cx = (t.ax + t.bx + t.cx) / 3, cy = (t.ay + t.by + t.cy) / 3;
  const double vc = phi_tilde_xy(a, cx, cy);
  double ub = 1e300;
  const SimplexPoint c({cx, cy});
  if (c.strictly_interior()) {
    const std::vector<double> g = phi_grad(a, c);
    const double d0 = g[0] * (t.ax - cx) + g[1] * (t.ay - cy);
    const double d1 = g[0] * (t.bx - cx) + g[1] * (t.by - cy);
    const double d2 = g[0] * (t.cx - cx) + g[1] * (t.cy - cy);
    ub = vc + std::max({d0, d1, d2});
  }
  if (ub <= 0) return;
  if (depth >= cap) {
    const double box = tri_area(t) * std::max(ub, 0.0);
    out.straddle_value += box / 2;
    out.straddle_err += box / 2;
    return;
  }
  for (const Tri& k : tri_split(t)) region_classify(a, k, depth + 1, cap, out);
}

}  // namespace detail

// ((n+1)!/2) * integral of phi_tilde over the region, i.e. of
// max(phi_tilde, 0) over the simplex.  n = 1 integrates between the
// endpoints; n = 2 runs the cell scheme above, deepening the straddle cap
// from 12 while the boundary error exceeds half the tolerance; n >= 3 is
// seeded Monte Carlo with the sample count driven by the tolerance.
inline double vol_hat(const CoeffVector& a, double tol = 1e-8,
                      std::uint64_t seed = 20260825) {
  if (!(tol > 0)) throw DomainError("vol_hat: tolerance must be positive");
  if (a.sum_vs_one() <= 0) return 0.0;
  const int n = a.n();
  if (n == 1) {
    const auto [lo, hi] = endpoints_p1(ThetaRegion(a));
    const auto f = [&](double x) { return phi_tilde(a, SimplexPoint({x})); };
    return integrate(f, lo, hi, tol * 0.5).value;
  }
  if (n == 2) {
    const auto f = [&](double x, double y) { return detail::phi_tilde_xy(a, x, y); };
    for (int cap = 12; cap <= 20; cap += 2) {
      detail::RegionSplit split;
      detail::region_classify(a, detail::Tri{0, 0, 1, 0, 0, 1}, 0, cap, split);
      if (split.straddle_err > tol / 2) continue;
      double inside_area = 0;
      for (const detail::Tri& t : split.inside) inside_area += detail::tri_area(t);
      double value = split.straddle_value, err = split.straddle_err;
      for (const detail::Tri& t : split.inside) {
        const double share =
            (tol / 2) * (inside_area > 0 ? detail::tri_area(t) / inside_area : 1.0);
        value += detail::tri_adapt(f, t, share, 0, 24, err);
      }
      if (err > tol) throw QuadratureNotConverged("vol_hat: error above tolerance");
      return 3 * value;  // (n+1)!/2 = 3
    }
    throw QuadratureNotConverged("vol_hat: straddle cells did not converge");
  }
  // Monte Carlo over the simplex via normalized exponentials
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  const auto sample = [&]() {
    double s = 0;
    for (double& wi : w) {
      wi = -std::log(1 - uni(rng));
      s += wi;
    }
    double v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double x = w[i] / s;
      v += -xlogx(x) + x * a.log_a(static_cast<int>(i));
    }
    return std::max(v, 0.0);
  };
  const std::size_t pilot = 100'000;
  double mean = 0, m2 = 0;
  for (std::size_t i = 1; i <= pilot; ++i) {
    const double v = sample();
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  const double half = static_cast<double>(n + 1) / 2;
  const double sigma = std::sqrt(m2 / static_cast<double>(pilot - 1)) * half;
  const double need = 9 * sigma * sigma / (tol * tol);
  if (need > 5e7)
    throw QuadratureNotConverged("vol_hat: Monte Carlo budget below tolerance");
  const std::size_t total = static_cast<std::size_t>(std::max(need, 1e4));
  for (std::size_t i = pilot + 1; i <= pilot + total; ++i) {
    const double d = sample() - mean;
    mean += d / static_cast<double>(i);
  }
  return half * mean;
}

// ((n+1)!/2) * signed integral of phi_tilde over the whole simplex.
inline double deg_hat(const CoeffVector& a, double tol = 1e-8,
                      std::uint64_t seed = 20260825) {
  if (!(tol > 0)) throw DomainError("deg_hat: tolerance must be positive");
  const int n = a.n();
  if (n == 1) {
    const auto f = [&](double x) { return phi_tilde(a, SimplexPoint({x})); };
    return integrate(f, 0.0, 1.0, tol * 0.5).value;
  }
  if (n == 2) {
    const auto f = [&](double x, double y) { return detail::phi_tilde_xy(a, x, y); };
    double err = 0;
    const double v =
        detail::tri_adapt(f, detail::Tri{0, 0, 1, 0, 0, 1}, tol / 2, 0, 24, err);
    if (err > tol) throw QuadratureNotConverged("deg_hat: error above tolerance");
    return 3 * v;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  const auto sample = [&]() {
    double s = 0;
    for (double& wi : w) {
      wi = -std::log(1 - uni(rng));
      s += wi;
    }
    double v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double x = w[i] / s;
      v += -xlogx(x) + x * a.log_a(static_cast<int>(i));
    }
    return v;
  };
  const std::size_t pilot = 100'000;
  double mean = 0, m2 = 0;
  for (std::size_t i = 1; i <= pilot; ++i) {
    const double v = sample();
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  const double half = static_cast<double>(n + 1) / 2;
  const double sigma = std::sqrt(m2 / static_cast<double>(pilot - 1)) * half;
  const double need = 9 * sigma * sigma / (tol * tol);
  if (need > 5e7)
    throw QuadratureNotConverged("deg_hat: Monte Carlo budget below tolerance");
  const std::size_t total = static_cast<std::size_t>(std::max(need, 1e4));
  for (std::size_t i = pilot + 1; i <= pilot + total; ++i) {
    const double d = sample() - mean;
    mean += d / static_cast<double>(i);
  }
  return half * mean;
}

// Coefficients a with |a| > 1 whose region is so small that the levels
// 1..l carry no nonzero section: start from interior a' with a'_i < 1/(2l)
// quota, then push the scale lambda up through dyadic steps while the
// region stays inside (0, 1/l)^n.  Coordinate extremes over the region are
// certified by minimize_linear.
inline CoeffVector construct_big_without_sections(int n, long l) {
  if (n < 1) throw WrongDimension("construct_big_without_sections: n >= 1");
  if (l < 1) throw BadLevel("construct_big_without_sections: l >= 1");
  const Rational quota =
      n < 2 * l ? Rational(1, 2 * l) : Rational(1, 2 * static_cast<long>(n) * l);
  std::vector<Rational> base(static_cast<std::size_t>(n) + 1, quota);
  base[0] = 1 - Rational(n) * quota;
  const CoeffVector aprime{std::move(base)};
  const Rational box_edge(1, l);

  const auto feasible = [&](const Rational& lambda) {
    const ThetaRegion T(aprime.scaled(lambda));
    const double edge = to_double(box_edge);
    for (int i = 0; i < n; ++i) {
      std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
      unit[static_cast<std::size_t>(i)] = 1.0;
      if (!(minimize_linear(T, unit).value > 1e-9)) return false;
      std::vector<double> rest(static_cast<std::size_t>(n) + 1, 1.0);
      rest[static_cast<std::size_t>(i) + 1] = 0.0;
      const double max_i = 1.0 - minimize_linear(T, rest).value;
      if (!(max_i < edge - 1e-9)) return false;
    }
    return true;
  };

  Rational lambda(1);
  Rational step(1, 2);
  for (int k = 0; k < 40; ++k) {
    const Rational cand = lambda + step;
    if (cand <= 2 && feasible(cand)) lambda = cand;
    step /= 2;
  }
  if (lambda == 1)
    throw SearchFailed("construct_big_without_sections: no dyadic scale fits");
  const CoeffVector out = aprime.scaled(lambda);
  for (long k = 1; k <= l; ++k)
    if (!lattice_points(ThetaRegion(out), k).empty())
      throw SearchFailed("construct_big_without_sections: level has sections");
  return out;
}

struct GeographyCell {
  Rational a0, a1;
  GeographyReport report;
};

struct GeographyGrid {
  long resolution = 0;
  std::vector<GeographyCell> cells;  // row-major, a0 outer, a1 inner
};

// Classification over (0,2]^2 at cell centers ((2i+1)/R, (2j+1)/R); the
// class boundaries a_i = 1 and a_0 + a_1 = 1 then land within one cell.
inline GeographyGrid geography_grid(long resolution) {
  if (resolution < 8) throw DomainError("geography_grid: resolution >= 8");
  if (resolution > 4096)
    throw ResolutionExceeded("geography_grid: resolution above 4096");
  GeographyGrid grid;
  grid.resolution = resolution;
  grid.cells.reserve(static_cast<std::size_t>(resolution * resolution));
  for (long i = 0; i < resolution; ++i)
    for (long j = 0; j < resolution; ++j) {
      const Rational a0(2 * i + 1, resolution);
      const Rational a1(2 * j + 1, resolution);
      grid.cells.push_back(
          {a0, a1, classify(CoeffVector({a0, a1}))});
    }
  return grid;
}

}  // namespace arithvol
