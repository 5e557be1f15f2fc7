#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

#include "arithvol/errors.hpp"
#include "arithvol/numbers.hpp"

namespace arithvol {

// Strictly positive exact coefficients (a_0, ..., a_n), n >= 1.  Logs are
// cached once: computed at 256 bits, then rounded to double, so the double
// cache is a correctly rounded log of the exact value.
class CoeffVector {
 public:
  explicit CoeffVector(std::vector<Rational> a) : a_(std::move(a)) {
    if (a_.size() < 2) throw WrongDimension("CoeffVector needs n >= 1");
    sum_ = 0;
    for (const Rational& ai : a_) {
      if (ai <= 0) throw NegativeCoordinate("coefficients must be > 0");
      sum_ += ai;
    }
    log_hi_.reserve(a_.size());
    log_.reserve(a_.size());
    for (const Rational& ai : a_) {
      log_hi_.push_back(log_rational(ai));
      log_.push_back(static_cast<double>(log_hi_.back()));
    }
  }

  int n() const { return static_cast<int>(a_.size()) - 1; }
  std::size_t size() const { return a_.size(); }
  const Rational& a(int i) const { return a_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& coeffs() const { return a_; }
  double log_a(int i) const { return log_[static_cast<std::size_t>(i)]; }
  const BigFloat& log_a_hi(int i) const {
    return log_hi_[static_cast<std::size_t>(i)];
  }
  const Rational& sum() const { return sum_; }
  // sign of |a| - 1, decided exactly
  int sum_vs_one() const { return sum_ > 1 ? 1 : (sum_ == 1 ? 0 : -1); }

  CoeffVector scaled(const Rational& t) const {
    std::vector<Rational> b(a_);
    for (Rational& bi : b) bi *= t;
    return CoeffVector(std::move(b));
  }

 private:
  std::vector<Rational> a_;
  std::vector<double> log_;
  std::vector<BigFloat> log_hi_;
  Rational sum_;
};

// A point of the closed n-simplex {x >= 0, sum x <= 1}, stored either as
// doubles or as exact rationals.  Float input gets a 1e-12 slack at the
// walls; exact input is validated exactly.  lifted(i) prepends the slack
// coordinate x0 = 1 - sum x.
class SimplexPoint {
 public:
  static constexpr double kTol = 1e-12;

  SimplexPoint(std::initializer_list<double> x)
      : SimplexPoint(std::vector<double>(x)) {}

  explicit SimplexPoint(std::vector<double> x) : x_(std::move(x)) {
    if (x_.empty()) throw WrongDimension("empty simplex point");
    double s = 0;
    for (double& xi : x_) {
      if (!(xi >= -kTol)) throw NegativeCoordinate("simplex coordinate < 0");
      if (xi < 0) xi = 0;
      s += xi;
    }
    if (s > 1 + kTol) throw OutsideSimplex("simplex coordinates sum past 1");
    slack_ = s < 1 ? 1 - s : 0;
  }

  explicit SimplexPoint(std::vector<Rational> x)
      : xq_(std::move(x)), exact_(true) {
    if (xq_.empty()) throw WrongDimension("empty simplex point");
    Rational s = 0;
    x_.reserve(xq_.size());
    for (const Rational& xi : xq_) {
      if (xi < 0) throw NegativeCoordinate("simplex coordinate < 0");
      s += xi;
      x_.push_back(to_double(xi));
    }
    if (s > 1) throw OutsideSimplex("simplex coordinates sum past 1");
    slack_q_ = 1 - s;
    slack_ = to_double(slack_q_);
  }

  int n() const { return static_cast<int>(x_.size()); }
  bool exact() const { return exact_; }
  double x(int i) const { return x_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& coords() const { return x_; }
  double slack() const { return slack_; }
  // i in [0, n]; lifted(0) is the slack coordinate
  double lifted(int i) const {
    return i == 0 ? slack_ : x_[static_cast<std::size_t>(i - 1)];
  }
  const Rational& xq(int i) const {
    require_exact();
    return xq_[static_cast<std::size_t>(i)];
  }
  Rational lifted_q(int i) const {
    require_exact();
    return i == 0 ? slack_q_ : xq_[static_cast<std::size_t>(i - 1)];
  }

  bool strictly_interior() const {
    if (exact_) {
      if (slack_q_ <= 0) return false;
      for (const Rational& xi : xq_)
        if (xi <= 0) return false;
      return true;
    }
    if (slack_ <= kTol) return false;
    for (double xi : x_)
      if (xi <= kTol) return false;
    return true;
  }

 private:
  void require_exact() const {
    if (!exact_) throw DomainError("exact coordinates requested on a float point");
  }

  std::vector<double> x_;
  std::vector<Rational> xq_;
  double slack_ = 0;
  Rational slack_q_;
  bool exact_ = false;
};

inline double xlogx(double t) { return t > 0 ? t * std::log(t) : 0.0; }

// phi_a on the lifted simplex: xt has n+1 entries summing to 1.
inline double phi(const CoeffVector& a, const std::vector<double>& xt) {
  if (xt.size() != a.size())
    throw WrongDimension("phi: lifted point has wrong length");
  double total = 0, s = 0;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    if (!(xt[i] >= -1e-9)) throw NegativeCoordinate("phi: weight < 0");
    const double t = xt[i] > 0 ? xt[i] : 0;
    total += xt[i];
    s += -xlogx(t) + t * a.log_a(static_cast<int>(i));
  }
  if (std::abs(total - 1) > 1e-9)
    throw WeightsNotNormalized("phi: weights do not sum to 1");
  return s;
}

// phi_a composed with the lift x -> (1 - sum x, x).
inline double phi_tilde(const CoeffVector& a, const SimplexPoint& x) {
  if (x.n() != a.n()) throw WrongDimension("phi_tilde: dimension mismatch");
  double s = 0;
  for (int i = 0; i <= a.n(); ++i) {
    const double t = x.lifted(i);
    s += -xlogx(t) + t * a.log_a(i);
  }
  return s;
}

// 256-bit evaluation of phi_tilde; the float coordinates are promoted
// exactly, so this refines the double value of the same point.
inline BigFloat phi_tilde_hi(const CoeffVector& a, const SimplexPoint& x) {
  if (x.n() != a.n()) throw WrongDimension("phi_tilde_hi: dimension mismatch");
  BigFloat s = 0;
  for (int i = 0; i <= a.n(); ++i) {
    const BigFloat t =
        x.exact() ? to_bigfloat(x.lifted_q(i)) : BigFloat(x.lifted(i));
    if (t > 0) s += -t * log(t) + t * a.log_a_hi(i);
  }
  return s;
}

// Exact sign of phi_tilde at an exact rational point.  With q the common
// denominator of the lifted coordinates and p_i = q * x_i the lifted
// numerators, q * phi_tilde = log(a^p * q^q / prod p_i^{p_i}), so the sign
// reduces to one big-integer/rational comparison.
inline int phi_tilde_sign_exact(const CoeffVector& a, const SimplexPoint& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (x.n() != a.n())
    throw WrongDimension("phi_tilde_sign_exact: dimension mismatch");
  BigInt q = 1;
  for (int i = 0; i <= a.n(); ++i)
    q = boost::multiprecision::lcm(q, denominator(x.lifted_q(i)));
  if (q > BigInt(1) << 16)
    throw BudgetExceeded("phi_tilde_sign_exact: denominator too large");
  const long ql = q.convert_to<long>();
  Rational lhs = rpow(Rational(q), ql);
  BigInt rhs = 1;
  for (int i = 0; i <= a.n(); ++i) {
    const Rational pi_q = x.lifted_q(i) * q;
    const long pi = numerator(pi_q).convert_to<long>();
    lhs *= rpow(a.a(i), pi);
    rhs *= ipow(BigInt(pi), pi);
  }
  const Rational rhs_q(rhs);
  return lhs > rhs_q ? 1 : (lhs == rhs_q ? 0 : -1);
}

// Gradient of phi_tilde at a strictly interior point:
// d/dx_i = log(a_i / a_0) + log((1 - sum x) / x_i).
inline std::vector<double> phi_grad(const CoeffVector& a,
                                    const SimplexPoint& x) {
  if (x.n() != a.n()) throw WrongDimension("phi_grad: dimension mismatch");
  if (!x.strictly_interior())
    throw BoundaryPoint("phi_grad needs a strictly interior point");
  std::vector<double> g(static_cast<std::size_t>(a.n()));
  const double ls = std::log(x.slack());
  for (int i = 1; i <= a.n(); ++i)
    g[static_cast<std::size_t>(i - 1)] =
        a.log_a(i) - a.log_a(0) + ls - std::log(x.x(i - 1));
  return g;
}

// Global maximum of phi_tilde: value log|a| at x_i = a_i / |a|.
inline std::pair<SimplexPoint, double> phi_max(const CoeffVector& a) {
  std::vector<Rational> xs;
  xs.reserve(static_cast<std::size_t>(a.n()));
  for (int i = 1; i <= a.n(); ++i) xs.push_back(a.a(i) / a.sum());
  return {SimplexPoint(std::move(xs)), log_rational_d(a.sum())};
}

// Jensen gap log(sum beta_i t_i) + sum alpha_i log(alpha_i / beta_i)
//            - sum alpha_i log(t_i);  nonnegative, and zero exactly when
// the products (beta_i / alpha_i) t_i share one value across all i.
inline double weighted_log_gap(const std::vector<double>& alpha,
                               const std::vector<double>& beta,
                               const std::vector<double>& t) {
  if (alpha.size() != beta.size() || alpha.size() != t.size() || alpha.empty())
    throw WrongDimension("weighted_log_gap: length mismatch");
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 0)) throw NegativeCoordinate("alpha < 0");
    if (!(beta[i] > 0)) throw NegativeCoordinate("beta must be > 0");
    if (!(t[i] > 0)) throw NegativeCoordinate("t must be > 0");
    sa += alpha[i];
    sb += beta[i];
  }
  if (std::abs(sa - 1) > 1e-9 || std::abs(sb - 1) > 1e-9)
    throw WeightsNotNormalized("alpha and beta must sum to 1");
  double mix = 0, gap = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    mix += beta[i] * t[i];
    if (alpha[i] > 0)
      gap += alpha[i] * (std::log(alpha[i] / beta[i]) - std::log(t[i]));
  }
  return std::log(mix) + gap;
}

struct StirlingBracket {
  double center;  // (1/l) log( l!/prod k_i! * prod a_i^{k_i} ), via lgamma
  double radius;  // (A_n log l + B_n) / l
};

inline StirlingBracket stirling_bracket(const CoeffVector& a, long l,
                                        const std::vector<long>& k) {
  if (k.size() != a.size())
    throw WrongDimension("stirling_bracket: composition has wrong length");
  if (l < 1) throw BadComposition("stirling_bracket: level must be >= 1");
  long total = 0;
  for (long ki : k) {
    if (ki < 0) throw BadComposition("stirling_bracket: negative part");
    total += ki;
  }
  if (total != l) throw BadComposition("stirling_bracket: parts do not sum to l");
  double c = std::lgamma(static_cast<double>(l) + 1);
  for (std::size_t i = 0; i < k.size(); ++i) {
    c -= std::lgamma(static_cast<double>(k[i]) + 1);
    c += static_cast<double>(k[i]) * a.log_a(static_cast<int>(i));
  }
  c /= static_cast<double>(l);
  const double np2 = static_cast<double>(a.n()) + 2;
  const double A = np2 / 2;
  const double B =
      np2 * std::log(std::sqrt(2 * std::numbers::pi)) + np2 / 12;
  return {c, (A * std::log(static_cast<double>(l)) + B) / static_cast<double>(l)};
}

struct LegendreFenchel {
  double transform;      // sup_u <u, x> - log(a_0 + sum a_i e^{u_i}),
                         // evaluated at the stationary u
  double neg_phi_tilde;  // should match the transform exactly
};

inline LegendreFenchel legendre_fenchel_check(const CoeffVector& a,
                                              const SimplexPoint& x) {
  if (x.n() != a.n())
    throw WrongDimension("legendre_fenchel_check: dimension mismatch");
  if (!x.strictly_interior())
    throw BoundaryPoint("legendre_fenchel_check needs an interior point");
  const double ls = std::log(x.slack());
  double v = 0;
  for (int i = 1; i <= a.n(); ++i) {
    const double u = a.log_a(0) - a.log_a(i) + std::log(x.x(i - 1)) - ls;
    v += x.x(i - 1) * u;
  }
  v -= a.log_a(0) - ls;
  return {v, -phi_tilde(a, x)};
}

}  // namespace arithvol
