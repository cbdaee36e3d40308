#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_M).
//
// Elements are stored in the power basis 1, zeta, ..., zeta^{phi(M)-1}
// after reduction modulo the M-th cyclotomic polynomial, so equality is
// coefficient equality. Every scalar of the theory at a root of unity of
// order p lives in Q(zeta_M) with M = lcm(8, p).

#include <gmpxx.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abtqft {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised for inputs outside the supported set of orders (p = 2 mod 4, M not divisible by 8).
class UnsupportedOrder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for exact-arithmetic failures such as inverting zero.
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-negative residue of a modulo m (m > 0).
inline long long mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

inline int euler_phi(int n) {
  int result = n;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      result -= result / d;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline int mobius(int n) {
  int sign = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

namespace detail {

using Poly = std::vector<Integer>;  // low degree first

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

// Exact division by a monic divisor; throws if the remainder is nonzero.
inline Poly poly_divexact(Poly a, const Poly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) {
    if (a.empty()) return {};
    throw std::logic_error("poly_divexact: nonzero remainder");
  }
  Poly q(a.size() - db, Integer(0));
  for (std::size_t i = a.size(); i-- > db;) {
    Integer c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  trim(a);
  if (!a.empty()) throw std::logic_error("poly_divexact: nonzero remainder");
  trim(q);
  return q;
}

}  // namespace detail

/// Static data of Q(zeta_M): the cyclotomic polynomial and the reduction of
/// every power zeta^j, 0 <= j < M, to the power basis (sparse, small integers).
struct CyclotomicField {
  int order = 0;
  int degree = 0;
  std::vector<Integer> phi;  // monic, degree + 1 coefficients, low degree first
  std::vector<std::vector<std::pair<int, long>>> powers;

  explicit CyclotomicField(int M) : order(M), degree(euler_phi(M)) {
    // Phi_M = prod_{d | M} (x^{M/d} - 1)^{mu(d)}
    detail::Poly num{Integer(1)}, den{Integer(1)};
    for (int d = 1; d <= M; ++d) {
      if (M % d != 0) continue;
      int mu = mobius(d);
      if (mu == 0) continue;
      detail::Poly f(static_cast<std::size_t>(M / d) + 1, Integer(0));
      f[0] = -1;
      f[M / d] = 1;
      if (mu > 0)
        num = detail::poly_mul(num, f);
      else
        den = detail::poly_mul(den, f);
    }
    phi = detail::poly_divexact(num, den);
    if (static_cast<int>(phi.size()) != degree + 1) throw std::logic_error("cyclotomic polynomial degree mismatch");

    std::vector<long> cur(static_cast<std::size_t>(degree), 0);
    powers.resize(static_cast<std::size_t>(M));
    cur[0] = 1;
    for (int j = 0; j < M; ++j) {
      auto& entry = powers[static_cast<std::size_t>(j)];
      for (int i = 0; i < degree; ++i)
        if (cur[i] != 0) entry.emplace_back(i, cur[i]);
      // multiply by x and reduce the top coefficient with the monic relation
      long top = cur[static_cast<std::size_t>(degree - 1)];
      for (int i = degree - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0)
        for (int i = 0; i < degree; ++i) cur[i] -= top * phi[static_cast<std::size_t>(i)].get_si();
    }
  }
};

/// Shared, cached field data for order M (thread safe).
inline std::shared_ptr<const CyclotomicField> cyclotomic_field(int M) {
  if (M <= 0) throw std::invalid_argument("cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const CyclotomicField>(M);
  cache.emplace(M, f);
  return f;
}

/// Exact element of Q(zeta_M) in canonical form.
class CycNum {
 public:
  CycNum() = default;

  explicit CycNum(int M) : field_(cyclotomic_field(M)), c_(static_cast<std::size_t>(field_->degree), Rational(0)) {}

  CycNum(int M, const Rational& r) : CycNum(M) {
    c_[0] = r;
    c_[0].canonicalize();
  }

  /// Builds from power-basis coordinates (length must be phi(M)).
  CycNum(int M, std::vector<Rational> coeffs) : field_(cyclotomic_field(M)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != field_->degree)
      throw std::invalid_argument("CycNum: coefficient count must equal phi(M)");
    for (auto& c : c_) c.canonicalize();
  }

  static CycNum zero(int M) { return CycNum(M); }
  static CycNum one(int M) { return CycNum(M, Rational(1)); }

  /// Reduces an arbitrary exponent -> coefficient map sum c_j zeta^j.
  static CycNum from_powers(int M, const std::map<long long, Rational>& terms) {
    CycNum r(M);
    for (const auto& [j, c] : terms) {
      Rational cc = c;
      cc.canonicalize();
      r.add_power(j, cc);
    }
    return r;
  }

  /// Sum of counts[e] * zeta^{step * e}; used for exact color sums.
  static CycNum from_histogram(int M, const std::vector<long long>& counts, long long step) {
    CycNum r(M);
    for (std::size_t e = 0; e < counts.size(); ++e)
      if (counts[e] != 0) r.add_power(static_cast<long long>(e) * step, Rational(static_cast<long>(counts[e])));
    return r;
  }

  bool valid() const { return static_cast<bool>(field_); }
  int order() const { return field_ ? field_->order : 0; }
  int degree() const { return field_ ? field_->degree : 0; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (sgn(x) != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) return false;
    return true;
  }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    if (a.order() != b.order()) return false;
    return a.c_ == b.c_;
  }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  CycNum& operator+=(const CycNum& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CycNum& operator-=(const CycNum& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  CycNum operator-() const {
    CycNum r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  CycNum& operator*=(const Rational& r) {
    for (auto& x : c_) x *= r;
    return *this;
  }
  friend CycNum operator*(CycNum a, const Rational& r) { return a *= r; }
  friend CycNum operator*(const Rational& r, CycNum a) { return a *= r; }

  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    a.check(b);
    const int M = a.order();
    std::vector<Rational> acc(static_cast<std::size_t>(M), Rational(0));
    std::vector<bool> hit(static_cast<std::size_t>(M), false);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (sgn(b.c_[j]) == 0) continue;
        std::size_t k = (i + j) % static_cast<std::size_t>(M);
        acc[k] += a.c_[i] * b.c_[j];
        hit[k] = true;
      }
    }
    CycNum r(M);
    for (int k = 0; k < M; ++k)
      if (hit[static_cast<std::size_t>(k)]) r.add_power(k, acc[static_cast<std::size_t>(k)]);
    return r;
  }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  /// Multiplication by zeta_M^j (a relabelling followed by reduction).
  CycNum mul_root(long long j) const {
    CycNum r(order());
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) r.add_power(static_cast<long long>(i) + j, c_[i]);
    return r;
  }

  /// Galois automorphism zeta -> zeta^a, gcd(a, M) = 1.
  CycNum galois(long long a) const {
    const int M = order();
    if (std::gcd(mod(a, M), static_cast<long long>(M)) != 1) throw std::invalid_argument("galois: exponent not a unit");
    CycNum r(M);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) r.add_power(static_cast<long long>(i) * a, c_[i]);
    return r;
  }

  /// Complex conjugation zeta -> zeta^{M-1}.
  CycNum conj() const { return galois(order() - 1); }

  /// Multiplicative inverse, by solving the linear system x * y = 1 over Q.
  CycNum inverse() const {
    if (is_zero()) throw ArithmeticError("CycNum: inversion of zero");
    // fast path: if x * conj(x) is rational, x^{-1} = conj(x) / (x * conj(x))
    CycNum xc = conj();
    CycNum norm = *this * xc;
    if (norm.is_rational()) return xc * Rational(1 / norm.c_[0]);
    const int n = degree();
    // column i of the matrix is the coordinate vector of x * zeta^i
    std::vector<std::vector<Rational>> A(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i < n; ++i) {
      CycNum col = mul_root(i);
      for (int r = 0; r < n; ++r) A[r][i] = col.c_[r];
    }
    A[0][n] = 1;
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (sgn(A[r][col]) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) throw ArithmeticError("CycNum: singular multiplication matrix");
      std::swap(A[col], A[piv]);
      Rational inv = 1 / A[col][col];
      for (int c = col; c <= n; ++c) A[col][c] *= inv;
      for (int r = 0; r < n; ++r) {
        if (r == col || sgn(A[r][col]) == 0) continue;
        Rational f = A[r][col];
        for (int c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
      }
    }
    std::vector<Rational> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[i] = A[i][n];
    return CycNum(order(), std::move(y));
  }

  friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

  CycNum pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum base = *this, r = one(order());
    while (e > 0) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return r;
  }

  /// Coordinates as "n/d" strings (integers print without a denominator).
  std::vector<std::string> coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(x.get_str());
    return out;
  }

  /// Human-readable exact form, e.g. "1 + 2*z^8" with z = zeta_M.
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (sgn(c_[i]) == 0) continue;
      Rational v = c_[i];
      if (!first) os << (sgn(v) < 0 ? " - " : " + ");
      else if (sgn(v) < 0) os << "-";
      Rational a = abs(v);
      if (i == 0) os << a.get_str();
      else {
        if (a != 1) os << a.get_str() << "*";
        os << "z";
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  void check(const CycNum& o) const {
    if (!field_ || !o.field_) throw std::invalid_argument("CycNum: uninitialized operand");
    if (field_->order != o.field_->order) throw std::invalid_argument("CycNum: order mismatch");
  }

  void add_power(long long j, const Rational& c) {
    const auto& entry = field_->powers[static_cast<std::size_t>(mod(j, field_->order))];
    for (const auto& [i, v] : entry) c_[static_cast<std::size_t>(i)] += c * v;
  }

  std::shared_ptr<const CyclotomicField> field_;
  std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const CycNum& x) { return os << x.str() << " (order " << x.order() << ")"; }

/// zeta_M^j; M must be divisible by 8 so that eighth roots and sqrt(2) are available.
inline CycNum make_root(int M, long long j) {
  if (M <= 0 || M % 8 != 0) throw UnsupportedOrder("make_root: order must be a positive multiple of 8");
  CycNum r(M);
  return CycNum::from_powers(M, {{mod(j, M), Rational(1)}});
}

// ---------------------------------------------------------------------------
// Orders, Gauss sums, eta and kappa
// ---------------------------------------------------------------------------

/// p' = p for odd p, p/2 for even p.
inline int pprime_of(int p) { return p % 2 == 0 ? p / 2 : p; }

/// Order of the scalar field for the root of unity of order p.
inline int field_order(int p) { return std::lcm(8, p); }

/// True when p >= 3 and p is not 2 mod 4.
inline bool supported_order(int p) { return p >= 3 && p % 4 != 2; }

inline void require_supported(int p) {
  if (p < 3) throw UnsupportedOrder("p must be at least 3");
  if (p % 4 == 2) throw UnsupportedOrder("p = 2 (mod 4) is not supported: the Gauss sum g may vanish");
}

/// q^e for q = exp(2 pi i / p), inside Q(zeta_{lcm(8,p)}).
inline CycNum q_power(int p, long long e) {
  const int M = field_order(p);
  return make_root(M, (M / p) * mod(e, p));
}

struct GaussSums {
  CycNum G;  ///< sum_{k=0}^{p-1} q^{k^2}
  CycNum g;  ///< sum_{k=0}^{p'-1} q^{k^2}
};

inline GaussSums gauss_sum(int p) {
  if (p < 3) throw UnsupportedOrder("gauss_sum: p must be at least 3");
  const int M = field_order(p);
  std::vector<long long> full(static_cast<std::size_t>(p), 0), part(static_cast<std::size_t>(p), 0);
  const int pp = pprime_of(p);
  for (long long k = 0; k < p; ++k) {
    full[static_cast<std::size_t>(mod(k * k, p))]++;
    if (k < pp) part[static_cast<std::size_t>(mod(k * k, p))]++;
  }
  return {CycNum::from_histogram(M, full, M / p), CycNum::from_histogram(M, part, M / p)};
}

/// Exact positive square root of n inside Q(zeta_M); requires the odd part of n to divide M.
inline CycNum sqrt_integer(int n, int M) {
  if (n <= 0) throw std::invalid_argument("sqrt_integer: n must be positive");
  int a = 0, m = n;
  while (m % 2 == 0) {
    m /= 2;
    ++a;
  }
  if (M % 8 != 0 || M % m != 0) throw UnsupportedOrder("sqrt_integer: field does not contain the root");
  // classical Gauss sum over Z/m: sqrt(m) if m = 1 (mod 4), i sqrt(m) if m = 3 (mod 4)
  std::vector<long long> hist(static_cast<std::size_t>(m), 0);
  for (long long k = 0; k < m; ++k) hist[static_cast<std::size_t>(mod(k * k, m))]++;
  CycNum root_m = CycNum::from_histogram(M, hist, M / m);
  if (m % 4 == 3) root_m = -(root_m * make_root(M, M / 4));
  CycNum r = root_m * Rational(Integer(1) << (a / 2));
  if (a % 2 == 1) r *= make_root(M, M / 8) + make_root(M, -M / 8);
  return r;
}

struct EtaKappa {
  CycNum eta;    ///< 1 / sqrt(p')
  CycNum kappa;  ///< g / sqrt(p'), an eighth root of unity
};

/// eta and kappa for supported p (cached).
inline EtaKappa eta_kappa(int p) {
  require_supported(p);
  static std::mutex mu;
  static std::map<int, EtaKappa> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  const int M = field_order(p);
  CycNum s = sqrt_integer(pprime_of(p), M);
  CycNum eta = s.inverse();
  CycNum kappa = gauss_sum(p).g * eta;
  if (kappa.pow(8) != CycNum::one(M)) throw std::logic_error("eta_kappa: kappa is not an eighth root of unity");
  EtaKappa ek{eta, kappa};
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(p, ek);
  return ek;
}

// ---------------------------------------------------------------------------
// Approximation (display only)
// ---------------------------------------------------------------------------

using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline std::pair<BigFloat, BigFloat> approx_parts(const CycNum& x) {
  BigFloat re = 0, im = 0;
  if (!x.valid()) return {re, im};
  const BigFloat two_pi = 2 * boost::math::constants::pi<BigFloat>();
  const auto& c = x.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    BigFloat v = BigFloat(c[i].get_num().get_str()) / BigFloat(c[i].get_den().get_str());
    BigFloat t = two_pi * BigFloat(i) / BigFloat(x.order());
    re += v * cos(t);
    im += v * sin(t);
  }
  return {re, im};
}

/// Floating approximation; accurate to about 45 significant digits before rounding to double.
inline std::complex<double> to_complex(const CycNum& x) {
  auto [re, im] = approx_parts(x);
  return {static_cast<double>(re), static_cast<double>(im)};
}

/// Fixed-point rendering "re + im i" with the given number of decimals (1..40).
inline std::string to_complex(const CycNum& x, int digits) {
  if (digits < 1 || digits > 40) throw std::invalid_argument("to_complex: digits must be in 1..40");
  auto [re, im] = approx_parts(x);
  const BigFloat tiny = BigFloat(0.5) * pow(BigFloat(10), -digits);
  if (abs(re) < tiny) re = 0;
  if (abs(im) < tiny) im = 0;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << re;
  if (im != 0) {
    os << (im < 0 ? " - " : " + ");
    os << abs(im) << "i";
  }
  return os.str();
}

}  // namespace abtqft
