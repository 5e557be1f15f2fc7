#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "arithvol/characteristic.hpp"
#include "arithvol/exponent.hpp"
#include "arithvol/quadrature.hpp"
#include "arithvol/theta.hpp"

namespace arithvol {

namespace detail {

// lexicographic walk over {e >= 0 : |e| <= l} in n coordinates
template <class Fn>
inline void for_each_exponent(int n, long l, Fn&& fn) {
  std::vector<long> e(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(static_cast<const std::vector<long>&>(e));
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
}

inline void check_exponent(const CoeffVector& a, long l,
                           const ExponentVector& e) {
  if (e.n() != a.n()) throw WrongDimension("exponent has wrong length");
  if (l < 0) throw BadExponent("negative level");
  if (e.sum() > l) throw BadExponent("degree exceeds level");
}

}  // namespace detail

// Exact L2 pairing of monomial sections at level l.  Distinct exponents are
// orthogonal; the diagonal entry is
//   1 / ( binom(n+l, n) * multinomial(l; lifted e) * a^{lifted e} ).
inline Rational inner_product(const CoeffVector& a, long l,
                              const ExponentVector& e,
                              const ExponentVector& ep) {
  detail::check_exponent(a, l, e);
  detail::check_exponent(a, l, ep);
  if (e != ep) return Rational(0);
  const std::vector<long> k = e.lifted(l);
  Rational denom(binomial(a.n() + l, a.n()) * multinomial(l, k));
  for (std::size_t i = 0; i < k.size(); ++i)
    denom *= rpow(a.a(static_cast<int>(i)), k[i]);
  return 1 / denom;
}

// Exact square of the sup norm of z^e at level l:
//   prod k_i^{k_i} / ( l^l * a^k ),  k the lifted exponent.
inline Rational sup_norm_sq_exact(const CoeffVector& a, long l,
                                  const ExponentVector& e) {
  detail::check_exponent(a, l, e);
  if (l == 0) return Rational(1);
  const std::vector<long> k = e.lifted(l);
  Rational v(1, 1);
  for (std::size_t i = 0; i < k.size(); ++i) {
    v *= Rational(ipow(BigInt(k[i]), k[i]));
    v /= rpow(a.a(static_cast<int>(i)), k[i]);
  }
  v /= Rational(ipow(BigInt(l), l));
  return v;
}

// Same value through the characteristic function: exp(-l phi_a(k/l)).
inline double sup_norm_sq(const CoeffVector& a, long l,
                          const ExponentVector& e) {
  detail::check_exponent(a, l, e);
  if (l == 0) return 1.0;
  const std::vector<long> k = e.lifted(l);
  std::vector<double> xt(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    xt[i] = static_cast<double>(k[i]) / static_cast<double>(l);
  return std::exp(-static_cast<double>(l) * phi(a, xt));
}

// Numeric maximization of |z^e|^2 exp(-l g_a) over the moduli x_i = |z_i|^2.
// Each axis is compactified by x = t/(1-t) and the value is evaluated in
// homogeneous form, smooth on [0,1]^n, so the point at infinity is an
// ordinary grid node.  Coarse grid, then coordinatewise golden-section.
inline double sup_norm_numeric(const CoeffVector& a, long l,
                               const ExponentVector& e, int grid = 65) {
  detail::check_exponent(a, l, e);
  const int n = a.n();
  if (n > 2) throw WrongDimension("sup_norm_numeric supports n <= 2");
  if (l == 0) return 1.0;
  std::vector<double> av(a.size());
  for (int i = 0; i <= n; ++i) av[static_cast<std::size_t>(i)] = to_double(a.a(i));

  const auto value = [&](const std::vector<double>& t) {
    double num = 1, den = av[0];
    for (int i = 0; i < n; ++i) den *= 1 - t[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      double other = av[static_cast<std::size_t>(i) + 1] * ti;
      for (int j = 0; j < n; ++j)
        if (j != i) other *= 1 - t[static_cast<std::size_t>(j)];
      den += other;
      const long ei = e.e[static_cast<std::size_t>(i)];
      num *= std::pow(ti, static_cast<double>(ei)) *
             std::pow(1 - ti, static_cast<double>(l - ei));
    }
    return num / std::pow(den, static_cast<double>(l));
  };

  // The log of the value is concave in the log-moduli, and t <-> log-modulus
  // is monotone per axis, so every one-axis slice is unimodal and so is the
  // partial maximum over the inner axis.  Nested golden section therefore
  // converges even when the maximum sits on (or in the limit toward) the
  // boundary of the square.
  const double gr = (std::sqrt(5.0) - 1) / 2;
  const auto golden = [&](auto&& f) {
    double lo = 0, hi = 1;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = f(x1);
      }
    }
    return std::max(std::max(f1, f2), std::max(f(lo), f(hi)));
  };

  std::vector<double> t(static_cast<std::size_t>(n));
  double refined;
  if (n == 1) {
    refined = golden([&](double t1) {
      t[0] = t1;
      return value(t);
    });
  } else {
    refined = golden([&](double t1) {
      t[0] = t1;
      return golden([&](double t2) {
        t[1] = t2;
        return value(t);
      });
    });
  }

  // a coarse scan floors the answer; `grid` only buys insurance, the nested
  // search above already reaches the boundary suprema
  double floor_val = 0;
  if (grid >= 2) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      for (int i = 0; i < n; ++i)
        t[static_cast<std::size_t>(i)] =
            static_cast<double>(idx[static_cast<std::size_t>(i)]) / (grid - 1);
      floor_val = std::max(floor_val, value(t));
      int pos = n - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == grid)
        idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  return std::max(refined, floor_val);
}

// Quadrature oracle for the diagonal inner product:
//   n! a_0...a_n  *  integral of x^e / (a_0 + sum a_i x_i)^{n+l+1}
// over [0, inf)^n, run through x = t/(1-t) per axis in homogeneous form.
// Off-diagonal pairs vanish by angular integration and return 0 directly.
inline double inner_product_numeric(const CoeffVector& a, long l,
                                    const ExponentVector& e,
                                    const ExponentVector& ep,
                                    double rel_tol = 1e-8) {
  detail::check_exponent(a, l, e);
  detail::check_exponent(a, l, ep);
  if (e != ep) return 0.0;
  const int n = a.n();
  if (n > 2) throw WrongDimension("inner_product_numeric supports n <= 2");
  std::vector<double> av(a.size());
  for (int i = 0; i <= n; ++i) av[static_cast<std::size_t>(i)] = to_double(a.a(i));
  double front = 1;
  for (int i = 1; i <= n; ++i) front *= static_cast<double>(i);
  for (double ai : av) front *= ai;

  if (n == 1) {
    const long e1 = e.e[0];
    const auto f = [&](double t) {
      const double d = av[0] * (1 - t) + av[1] * t;
      return front * std::pow(t, static_cast<double>(e1)) *
             std::pow(1 - t, static_cast<double>(l - e1)) /
             std::pow(d, static_cast<double>(l + 2));
    };
    const double rough = integrate(f, 0.0, 1.0, 1e-6).value;
    const double abs_tol = std::max(1e-15, rel_tol * std::abs(rough) * 0.5);
    return integrate(f, 0.0, 1.0, abs_tol).value;
  }

  const long e1 = e.e[0], e2 = e.e[1];
  const auto inner_at = [&](double t1, double abs_tol) {
    const double p1 = std::pow(t1, static_cast<double>(e1)) *
                      std::pow(1 - t1, static_cast<double>(l + 1 - e1));
    const auto f = [&](double t2) {
      const double d = av[0] * (1 - t1) * (1 - t2) + av[1] * t1 * (1 - t2) +
                       av[2] * t2 * (1 - t1);
      return front * p1 * std::pow(t2, static_cast<double>(e2)) *
             std::pow(1 - t2, static_cast<double>(l + 1 - e2)) /
             std::pow(d, static_cast<double>(l + 3));
    };
    return integrate(f, 0.0, 1.0, abs_tol).value;
  };
  const auto outer = [&](double abs_tol) {
    const auto f = [&](double t1) { return inner_at(t1, abs_tol * 0.25); };
    return integrate(f, 0.0, 1.0, abs_tol).value;
  };
  const double rough = outer(1e-6);
  return outer(std::max(1e-14, rel_tol * std::abs(rough) * 0.5));
}

enum class GramDomain { Full, Theta };

// Diagonal Gram matrix of the monomial basis at level l.  Full takes every
// exponent with |e| <= l; Theta restricts to the lattice points of the
// dilated region.  Entries are exact; logs go through 256-bit rounding.
class GramMatrix {
 public:
  GramMatrix(CoeffVector a, long l, GramDomain domain)
      : a_(std::move(a)), l_(l), domain_(domain) {
    if (l_ < 1) throw BadLevel("gram_matrix: level must be >= 1");
    if (domain == GramDomain::Theta) {
      basis_ = lattice_points(ThetaRegion(a_), l_);
    } else {
      detail::for_each_exponent(a_.n(), l_, [&](const std::vector<long>& e) {
        basis_.emplace_back(e);
      });
    }
    diag_.reserve(basis_.size());
    log_diag_.reserve(basis_.size());
    for (const ExponentVector& e : basis_) {
      diag_.push_back(inner_product(a_, l_, e, e));
      log_diag_.push_back(log_rational_d(diag_.back()));
    }
  }

  const CoeffVector& a() const { return a_; }
  long l() const { return l_; }
  GramDomain domain() const { return domain_; }
  std::size_t m() const { return basis_.size(); }
  const std::vector<ExponentVector>& basis() const { return basis_; }
  const Rational& diag(std::size_t i) const { return diag_[i]; }
  double log_diag(std::size_t i) const { return log_diag_[i]; }

 private:
  CoeffVector a_;
  long l_;
  GramDomain domain_;
  std::vector<ExponentVector> basis_;
  std::vector<Rational> diag_;
  std::vector<double> log_diag_;
};

inline GramMatrix gram_matrix(const CoeffVector& a, long l, GramDomain d) {
  return GramMatrix(a, l, d);
}

// log volume of the unit ball in R^m
inline double log_ball_volume(std::size_t m) {
  const double md = static_cast<double>(m);
  return (md / 2) * std::log(std::numbers::pi) - std::lgamma(md / 2 + 1);
}

// Arithmetic Euler characteristic proxy at level l:
//   sum over |e| <= l of log sqrt( binom(l+n,n) * multinomial * a^k )
//   plus the log unit-ball volume in the rank.
inline double chi_hat(const CoeffVector& a, long l) {
  if (l < 1) throw BadLevel("chi_hat: level must be >= 1");
  const int n = a.n();
  const double log_binom = std::lgamma(static_cast<double>(l + n) + 1) -
                           std::lgamma(static_cast<double>(l) + 1) -
                           std::lgamma(static_cast<double>(n) + 1);
  const double log_l_fact = std::lgamma(static_cast<double>(l) + 1);
  double total = 0;
  std::size_t m = 0;
  detail::for_each_exponent(n, l, [&](const std::vector<long>& e) {
    ++m;
    long s = 0;
    double term = log_binom + log_l_fact;
    for (std::size_t i = 0; i < e.size(); ++i) {
      s += e[i];
      term -= std::lgamma(static_cast<double>(e[i]) + 1);
      term += static_cast<double>(e[i]) * a.log_a(static_cast<int>(i) + 1);
    }
    const long e0 = l - s;
    term -= std::lgamma(static_cast<double>(e0) + 1);
    term += static_cast<double>(e0) * a.log_a(0);
    total += 0.5 * term;
  });
  return total + log_ball_volume(m);
}

}  // namespace arithvol
