#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "arithvol/characteristic.hpp"
#include "arithvol/exponent.hpp"

namespace arithvol {

// Informational counter: how often a membership test fell into the 256-bit
// tie band and was resolved in favour of membership (the region is closed).
inline std::atomic<std::uint64_t>& theta_tie_count() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}

// The compact convex region {x in the simplex : phi_tilde_a(x) >= 0}.
// Empty exactly when |a| < 1; a single point (a_1/|a|, ..., a_n/|a|)
// exactly when |a| = 1.  Both degeneracies are decided by exact rational
// comparison of |a| against 1.
class ThetaRegion {
 public:
  explicit ThetaRegion(CoeffVector a) : a_(std::move(a)) {}

  const CoeffVector& a() const { return a_; }
  int n() const { return a_.n(); }
  bool empty() const { return a_.sum_vs_one() < 0; }
  bool is_point() const { return a_.sum_vs_one() == 0; }

  // Membership ladder: exact rational points are decided exactly; float
  // points are decided in double with a 1e-12 slack, re-evaluated at 256
  // bits when |phi_tilde| < 1e-9, and ties below 1e-30 count as members.
  bool contains(const SimplexPoint& x) const {
    if (x.n() != n()) throw WrongDimension("contains: dimension mismatch");
    if (x.exact()) return phi_tilde_sign_exact(a_, x) >= 0;
    const double v = phi_tilde(a_, x);
    if (std::abs(v) >= 1e-9) return v >= -1e-12;
    const BigFloat vh = phi_tilde_hi(a_, x);
    static const BigFloat kTie("1e-30");
    if (abs(vh) < kTie) {
      ++theta_tie_count();
      return true;
    }
    return vh > 0;
  }

 private:
  CoeffVector a_;
};

// Lattice points of the dilate l * Theta_a: all integer e >= 0 with
// |e| <= l and e/l in the region, in lexicographic order.  Every
// membership test here is the exact rational one.
inline std::vector<ExponentVector> lattice_points(const ThetaRegion& T,
                                                  long l) {
  if (l < 1) throw BadLevel("lattice_points: level must be >= 1");
  std::vector<ExponentVector> out;
  if (T.empty()) return out;
  const int n = T.n();
  std::vector<long> e(static_cast<std::size_t>(n), 0);
  const auto member = [&]() {
    std::vector<Rational> x;
    x.reserve(e.size());
    for (long ei : e) x.emplace_back(ei, l);
    return T.contains(SimplexPoint(std::move(x)));
  };
  // odometer over {e >= 0 : |e| <= l}, lexicographic ascending
  while (true) {
    if (member()) out.emplace_back(e);
    int pos = n - 1;
    while (pos >= 0) {
      ++e[static_cast<std::size_t>(pos)];
      long s = 0;
      for (long ei : e) s += ei;
      if (s <= l) break;
      e[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

// n = 1 endpoints (inf Theta, sup Theta), each located by bisection to
// 1e-12.  The clamped cases theta = 0 / 1 are decided exactly via a_0, a_1
// against 1; concavity of phi_tilde makes each half monotone around the
// maximum at a_1/|a|.
inline std::pair<double, double> endpoints_p1(const ThetaRegion& T) {
  if (T.n() != 1) throw WrongDimension("endpoints_p1 needs n = 1");
  if (T.empty()) throw EmptyRegion("endpoints_p1: |a| < 1");
  const CoeffVector& a = T.a();
  if (T.is_point()) {
    const double p = to_double(a.a(1));
    return {p, p};
  }
  const double peak = to_double(a.a(1) / a.sum());
  const auto f = [&](double x) { return phi_tilde(a, SimplexPoint({x})); };
  const auto bisect = [&](double lo, double hi, bool rising) {
    // invariant: sign change between lo and hi
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      const bool inside = f(mid) >= 0;
      if (inside == rising)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  double lo, hi;
  if (a.a(0) >= 1)
    lo = 0.0;
  else
    lo = bisect(0.0, peak, true);
  if (a.a(1) >= 1)
    hi = 1.0;
  else
    hi = bisect(peak, 1.0, false);
  return {lo, hi};
}

struct LinearMinimum {
  SimplexPoint point;
  double value = 0;
};

namespace detail {

// argmin over the closed simplex of <c, x> - mu * phi_tilde(x), in lifted
// coordinates: softmax of (log a_i - c_i / mu).  Entropic structure gives
// the minimizer in closed form for every mu > 0.
inline std::vector<double> entropic_point(const CoeffVector& a,
                                          const std::vector<double>& c_lifted,
                                          double mu) {
  const std::size_t m = a.size();
  std::vector<double> u(m);
  double top = -1e300;
  for (std::size_t i = 0; i < m; ++i) {
    u[i] = a.log_a(static_cast<int>(i)) - c_lifted[i] / mu;
    top = std::max(top, u[i]);
  }
  double z = 0;
  for (std::size_t i = 0; i < m; ++i) {
    u[i] = std::exp(u[i] - top);
    z += u[i];
  }
  std::vector<double> x(m - 1);
  for (std::size_t i = 1; i < m; ++i) x[i - 1] = u[i] / z;
  return x;
}

}  // namespace detail

// Minimize a linear functional over Theta_a.  alpha has n entries, or n+1
// lifted entries reduced through x_0 = 1 - sum x; the given entries must be
// >= 0 and not all zero (the reduced coefficients may then have any sign).
// n = 1 reads the answer off the endpoints; n >= 2 runs a dual bisection on
// the entropic penalty weight, which is monotone in the constraint value.
inline LinearMinimum minimize_linear(const ThetaRegion& T,
                                     const std::vector<double>& alpha) {
  const int n = T.n();
  if (alpha.size() != static_cast<std::size_t>(n) &&
      alpha.size() != static_cast<std::size_t>(n) + 1)
    throw WrongDimension("minimize_linear: alpha must have n or n+1 entries");
  bool all_zero = true;
  for (double w : alpha) {
    if (!(w >= 0)) throw NegativeCoordinate("minimize_linear: alpha < 0");
    if (w != 0) all_zero = false;
  }
  if (all_zero) throw DomainError("minimize_linear: alpha is identically zero");
  if (T.empty()) throw EmptyRegion("minimize_linear: region is empty");

  double constant = 0;
  std::vector<double> c(static_cast<std::size_t>(n));
  if (alpha.size() == static_cast<std::size_t>(n) + 1) {
    constant = alpha[0];
    for (int i = 0; i < n; ++i)
      c[static_cast<std::size_t>(i)] = alpha[static_cast<std::size_t>(i) + 1] - alpha[0];
  } else {
    c = alpha;
  }

  const CoeffVector& a = T.a();
  const auto finish = [&](SimplexPoint p) {
    double v = constant;
    for (int i = 0; i < n; ++i) v += c[static_cast<std::size_t>(i)] * p.x(i);
    return LinearMinimum{std::move(p), v};
  };

  if (T.is_point()) return finish(phi_max(a).first);

  if (n == 1) {
    const auto [lo, hi] = endpoints_p1(T);
    return finish(SimplexPoint({c[0] >= 0 ? lo : hi}));
  }

  std::vector<double> cl(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) cl[static_cast<std::size_t>(i) + 1] = c[static_cast<std::size_t>(i)];
  const auto g = [&](double mu) {
    return phi_tilde(a, SimplexPoint(detail::entropic_point(a, cl, mu)));
  };

  double mu_lo = 1e-18;
  if (g(mu_lo) >= 0)
    return finish(SimplexPoint(detail::entropic_point(a, cl, mu_lo)));
  double mu_hi = 1.0;
  int grow = 0;
  while (g(mu_hi) < 0) {
    mu_hi *= 4;
    if (++grow > 64) throw SearchFailed("minimize_linear: dual growth failed");
  }
  for (int it = 0; it < 240; ++it) {
    const double mid = std::sqrt(mu_lo * mu_hi);
    (g(mid) >= 0 ? mu_hi : mu_lo) = mid;
  }
  return finish(SimplexPoint(detail::entropic_point(a, cl, mu_hi)));
}

// Supporting hyperplane of Theta_a at a boundary point b, with the region
// on the side alpha . x >= beta.  An interior boundary point (no zero
// lifted coordinate) uses the normalized gradient; a point with exactly one
// zero lifted coordinate gets the corresponding face.
struct Hyperplane {
  std::vector<double> alpha;
  double beta = 0;
  SimplexPoint anchor;
};

inline Hyperplane supporting_hyperplane(const ThetaRegion& T,
                                        const SimplexPoint& b) {
  const int n = T.n();
  if (b.n() != n) throw WrongDimension("supporting_hyperplane: dimension mismatch");
  if (T.a().sum_vs_one() <= 0)
    throw NotBig("supporting_hyperplane needs |a| > 1");
  int zero_index = -1, zeros = 0;
  for (int i = 0; i <= n; ++i) {
    const bool zero = b.exact() ? (b.lifted_q(i) == 0)
                                : (b.lifted(i) <= SimplexPoint::kTol);
    if (zero) {
      ++zeros;
      zero_index = i;
    }
  }
  if (zeros >= 2) throw TooManyZeros("supporting_hyperplane: two or more zeros");
  if (zeros == 1) {
    if (!T.contains(b))
      throw NotBoundary("supporting_hyperplane: point is not in the region");
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    double beta;
    if (zero_index == 0) {
      // face x_1 + ... + x_n = 1; the region lies in sum x <= 1
      const double s = -1.0 / std::sqrt(static_cast<double>(n));
      std::fill(alpha.begin(), alpha.end(), s);
      beta = s;
    } else {
      alpha[static_cast<std::size_t>(zero_index - 1)] = 1.0;
      beta = 0.0;
    }
    return {std::move(alpha), beta, b};
  }
  const double v = phi_tilde(T.a(), b);
  if (std::abs(v) > 1e-9)
    throw NotBoundary("supporting_hyperplane: phi_tilde(b) is not ~0");
  std::vector<double> gradient = phi_grad(T.a(), b);
  double norm = 0;
  for (double gi : gradient) norm += gi * gi;
  norm = std::sqrt(norm);
  if (!(norm > 1e-12))
    throw DomainError("supporting_hyperplane: vanishing gradient");
  double beta = 0;
  for (int i = 0; i < n; ++i) {
    gradient[static_cast<std::size_t>(i)] /= norm;
    beta += gradient[static_cast<std::size_t>(i)] * b.x(i);
  }
  return {std::move(gradient), beta, b};
}

// Grid points k/q, k >= 1, |k| <= q-1, that sit strictly inside the region
// (phi_tilde > 1e-9) and strictly inside the simplex.  Exact rational
// points are returned, in lexicographic order.
inline std::vector<SimplexPoint> interior_rational_points(const ThetaRegion& T,
                                                          long q) {
  if (q < 2) throw BadLevel("interior_rational_points: q must be >= 2");
  if (T.a().sum_vs_one() <= 0)
    throw EmptyRegion("interior_rational_points: interior is empty");
  const int n = T.n();
  std::vector<SimplexPoint> out;
  std::vector<long> k(static_cast<std::size_t>(n), 1);
  if (n > q - 1) return out;
  while (true) {
    std::vector<Rational> x;
    x.reserve(k.size());
    long total = 0;
    for (long ki : k) {
      x.emplace_back(ki, q);
      total += ki;
    }
    if (total <= q - 1) {
      SimplexPoint p(std::move(x));
      if (phi_tilde(T.a(), p) > 1e-9) out.push_back(std::move(p));
    }
    // advance odometer with minimum 1 per coordinate
    int pos = n - 1;
    while (pos >= 0) {
      ++k[static_cast<std::size_t>(pos)];
      long s = 0;
      for (long ki : k) s += ki;
      if (s <= q - 1) break;
      k[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

// Boundary polyline for n = 2: walk rays from the interior maximum point
// and bisect to the region boundary.  Used by the CLI outline output.
inline std::vector<std::pair<double, double>> boundary_polyline(
    const ThetaRegion& T, int samples) {
  if (T.n() != 2) throw WrongDimension("boundary_polyline needs n = 2");
  if (T.empty()) throw EmptyRegion("boundary_polyline: region is empty");
  const CoeffVector& a = T.a();
  const SimplexPoint center = phi_max(a).first;
  const double cx = center.x(0), cy = center.x(1);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(samples));
  if (T.is_point()) {
    out.assign(static_cast<std::size_t>(samples), {cx, cy});
    return out;
  }
  for (int j = 0; j < samples; ++j) {
    const double ang = 2 * std::numbers::pi * j / samples;
    const double dx = std::cos(ang), dy = std::sin(ang);
    // step to the simplex boundary along the ray
    double t_max = 1e300;
    if (dx < 0) t_max = std::min(t_max, -cx / dx);
    if (dy < 0) t_max = std::min(t_max, -cy / dy);
    if (dx + dy > 0) t_max = std::min(t_max, (1 - cx - cy) / (dx + dy));
    const auto inside = [&](double t) {
      return phi_tilde(a, SimplexPoint({cx + t * dx, cy + t * dy})) >= 0;
    };
    double lo = 0, hi = t_max;
    if (inside(hi)) {
      lo = hi;
    } else {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
      }
    }
    out.emplace_back(cx + lo * dx, cy + lo * dy);
  }
  return out;
}

}  // namespace arithvol
