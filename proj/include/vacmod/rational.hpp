#pragma once

// Exact arithmetic in the coefficient field Q(k, c, lambda, mu): sparse
// multivariate polynomials over Q, reduced rational functions with a unique
// canonical form, substitution with pole detection, and Laurent expansion.

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vacmod/errors.hpp"

namespace vacmod {

using Rat = mpq_class;

// mpq_class built from a numerator/denominator pair is NOT canonical until
// told so; every fraction should go through here.
inline Rat rat_frac(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// The four global parameters. The order here is also the monomial-order
// precedence (k most significant) and the order used when printing.
enum class Param : int { k = 0, c = 1, lambda = 2, mu = 3 };
inline constexpr int kNumParams = 4;

const char* param_name(Param p);
std::optional<Param> param_from_name(std::string_view s);

// Exponent vector of one monomial in (k, c, lambda, mu).
struct Mono {
  std::array<int16_t, kNumParams> e{0, 0, 0, 0};

  int total_degree() const {
    int t = 0;
    for (auto x : e) t += x;
    return t;
  }
  bool is_unit() const { return e[0] == 0 && e[1] == 0 && e[2] == 0 && e[3] == 0; }
  friend bool operator==(const Mono&, const Mono&) = default;
};

// Graded-lex order, largest term first: higher total degree wins, ties broken
// lexicographically with k most significant.
struct MonoGradedLexGreater {
  bool operator()(const Mono& a, const Mono& b) const {
    int ta = a.total_degree(), tb = b.total_degree();
    if (ta != tb) return ta > tb;
    for (int i = 0; i < kNumParams; ++i)
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
  }
};

// Sparse multivariate polynomial over Q. Zero coefficients are never stored;
// the term map is ordered leading-term-first.
class Poly {
 public:
  using TermMap = std::map<Mono, Rat, MonoGradedLexGreater>;

  Poly() = default;  // zero
  explicit Poly(const Rat& constant);
  explicit Poly(long constant);
  static Poly variable(Param p, int exp = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;  // zero or a single unit-monomial term
  bool is_one() const;
  // pre: is_constant()
  Rat constant_value() const;

  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(Param p) const;
  bool depends_on(Param p) const;
  const TermMap& terms() const { return terms_; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& mul_scalar(const Rat& s);
  Poly pow(int e) const;  // pre: e >= 0
  friend bool operator==(const Poly&, const Poly&) = default;

  const Rat& leading_coeff() const;  // pre: !is_zero()
  const Mono& leading_mono() const;  // pre: !is_zero()

  // Content: gcd of coefficient numerators over lcm of denominators, carrying
  // the sign of the leading coefficient. content(0) = 0.
  Rat content() const;
  // this / content(): integer coefficients, gcd 1, positive leading coeff.
  Poly primitive_part() const;

  // Polynomial gcd (recursive primitive pseudo-remainder sequences). The
  // result is primitive with positive leading coefficient; gcd(0,0) = 0, and
  // any nonzero constant input gives 1.
  static Poly gcd(const Poly& a, const Poly& b);
  // Exact division; throws Error if b does not divide a.
  static Poly div_exact(const Poly& a, const Poly& b);

  // Canonical text, e.g. "k^2*c + 3*k - 2". Normative for reports/caches.
  std::string text() const;
  // Inverse of text(); also accepts rational coefficients like "1/2*k".
  // Throws DomainError on malformed input.
  static Poly parse(std::string_view s);

  // View as a univariate polynomial in p: coefficient of p^i, with p removed.
  std::vector<Poly> coeffs_in(Param p) const;
  static Poly from_coeffs(Param p, const std::vector<Poly>& coeffs);

 private:
  void add_term(const Mono& m, const Rat& coeff);
  TermMap terms_;
};

// Reduced rational function with a unique canonical form: numerator and
// denominator are integer-coefficient polynomials, coprime as polynomials,
// with coprime integer contents, and the denominator has positive leading
// coefficient under graded-lex.
class RationalFunction {
 public:
  RationalFunction() : den_(Poly(1)) {}  // zero
  RationalFunction(long v) : num_(Poly(v)), den_(Poly(1)) { canonicalize(); }
  RationalFunction(const Rat& v) : num_(Poly(v)), den_(Poly(1)) { canonicalize(); }
  explicit RationalFunction(Poly num) : num_(std::move(num)), den_(Poly(1)) { canonicalize(); }
  RationalFunction(Poly num, Poly den);  // throws ZeroDivisionError if den == 0
  static RationalFunction variable(Param p);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  // pre: is_constant()
  Rat constant_value() const;

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  // throws ZeroDivisionError
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
  RationalFunction inverse() const;
  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

  // Canonical text: "(num)/(den)", or just "num" when den == 1.
  std::string text() const;
  static RationalFunction parse(std::string_view s);

 private:
  // skip_gcd: caller guarantees num and den are already coprime polynomials,
  // so only the content/sign normalization runs.
  void canonicalize(bool skip_gcd = false);
  static RationalFunction from_reduced(Poly num, Poly den);
  Poly num_, den_;
};

using RF = RationalFunction;

// Spec-surface dispatch used by the harness.
enum class RfOp { add, sub, mul, div };
RF rf_arith(RfOp op, const RF& a, const RF& b);

// Simultaneous substitution; parameters absent from the map stay symbolic.
// Throws PoleError when the substituted denominator vanishes.
RF rf_eval(const RF& f, const std::map<Param, RF>& subst);

// Laurent expansion data: f = sum_{i >= 0} coefficients[i] * t^(leading_exponent + i)
// where t = param - center (or 1/param when center is infinity). For f == 0
// the zero flag is set and leading_exponent is meaningless.
struct SeriesExpansion {
  bool zero = false;
  int leading_exponent = 0;
  std::vector<RF> coefficients;  // order + 1 entries, in the remaining parameters
};

// center == nullopt means expansion at infinity. pre: order >= 0.
SeriesExpansion rf_series(const RF& f, Param param, const std::optional<Rat>& center, int order);

}  // namespace vacmod
