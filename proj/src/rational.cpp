#include "vacmod/rational.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace vacmod {

const char* param_name(Param p) {
  switch (p) {
    case Param::k: return "k";
    case Param::c: return "c";
    case Param::lambda: return "lambda";
    case Param::mu: return "mu";
  }
  return "?";
}

std::optional<Param> param_from_name(std::string_view s) {
  if (s == "k") return Param::k;
  if (s == "c") return Param::c;
  if (s == "lambda") return Param::lambda;
  if (s == "mu") return Param::mu;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly::Poly(const Rat& constant) {
  if (constant != 0) terms_.emplace(Mono{}, constant);
}

Poly::Poly(long constant) {
  if (constant != 0) terms_.emplace(Mono{}, Rat(constant));
}

Poly Poly::variable(Param p, int exp) {
  assert(exp >= 0);
  if (exp == 0) return Poly(1);
  Poly r;
  Mono m;
  m.e[static_cast<int>(p)] = static_cast<int16_t>(exp);
  r.terms_.emplace(m, Rat(1));
  return r;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

bool Poly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_unit() && terms_.begin()->second == 1;
}

Rat Poly::constant_value() const {
  if (terms_.empty()) return Rat(0);
  assert(is_constant());
  return terms_.begin()->second;
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  return terms_.begin()->first.total_degree();  // leading term has max total degree
}

int Poly::degree_in(Param p) const {
  int d = -1;
  const int i = static_cast<int>(p);
  for (const auto& [m, q] : terms_) d = std::max<int>(d, m.e[i]);
  return is_zero() ? -1 : d;
}

bool Poly::depends_on(Param p) const {
  const int i = static_cast<int>(p);
  for (const auto& [m, q] : terms_)
    if (m.e[i] != 0) return true;
  return false;
}

void Poly::add_term(const Mono& m, const Rat& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& [m, q] : r.terms_) q = -q;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, q] : o.terms_) add_term(m, q);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, q] : o.terms_) add_term(m, -q);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, qa] : a.terms_) {
    for (const auto& [mb, qb] : b.terms_) {
      Mono m;
      for (int i = 0; i < kNumParams; ++i)
        m.e[i] = static_cast<int16_t>(ma.e[i] + mb.e[i]);
      r.add_term(m, qa * qb);
    }
  }
  return r;
}

Poly& Poly::mul_scalar(const Rat& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, q] : terms_) q *= s;
  return *this;
}

Poly Poly::pow(int e) const {
  assert(e >= 0);
  Poly r(1);
  Poly base(*this);
  while (e > 0) {
    if (e & 1) r *= base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

const Rat& Poly::leading_coeff() const {
  assert(!is_zero());
  return terms_.begin()->second;
}

const Mono& Poly::leading_mono() const {
  assert(!is_zero());
  return terms_.begin()->first;
}

Rat Poly::content() const {
  if (is_zero()) return Rat(0);
  mpz_class num_gcd(0), den_lcm(1);
  for (const auto& [m, q] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
  }
  Rat c(num_gcd, den_lcm);
  c.canonicalize();
  if (leading_coeff() < 0) c = -c;
  return c;
}

Poly Poly::primitive_part() const {
  if (is_zero()) return Poly();
  Poly r(*this);
  Rat inv = 1 / content();
  return r.mul_scalar(inv);
}

std::vector<Poly> Poly::coeffs_in(Param p) const {
  const int i = static_cast<int>(p);
  std::vector<Poly> out(static_cast<size_t>(std::max(0, degree_in(p)) + 1));
  for (const auto& [m, q] : terms_) {
    Mono rest = m;
    int e = rest.e[i];
    rest.e[i] = 0;
    out[static_cast<size_t>(e)].add_term(rest, q);
  }
  return out;
}

Poly Poly::from_coeffs(Param p, const std::vector<Poly>& coeffs) {
  Poly r;
  const int i = static_cast<int>(p);
  for (size_t e = 0; e < coeffs.size(); ++e) {
    for (const auto& [m, q] : coeffs[e].terms_) {
      Mono me = m;
      me.e[i] = static_cast<int16_t>(me.e[i] + e);
      r.add_term(me, q);
    }
  }
  return r;
}

Poly Poly::div_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error("div_exact: division by zero polynomial");
  if (a.is_zero()) return Poly();
  if (b.is_constant()) {
    Poly r(a);
    return r.mul_scalar(1 / b.constant_value());
  }
  Poly rem(a), quot;
  const Mono& lb = b.leading_mono();
  while (!rem.is_zero()) {
    const Mono& lr = rem.leading_mono();
    Mono m;
    for (int i = 0; i < kNumParams; ++i) {
      int d = lr.e[i] - lb.e[i];
      if (d < 0) throw Error("div_exact: inexact polynomial division");
      m.e[i] = static_cast<int16_t>(d);
    }
    Rat coeff = rem.leading_coeff() / b.leading_coeff();
    Poly t;
    t.terms_.emplace(m, coeff);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

namespace {

// Pseudo-remainder of a by b, both viewed as univariate in p with Poly
// coefficients (prem in the primitive-PRS sense).
Poly prem_in(Param p, const Poly& a, const Poly& b) {
  std::vector<Poly> r = a.coeffs_in(p);
  std::vector<Poly> d = b.coeffs_in(p);
  const int db = static_cast<int>(d.size()) - 1;
  const Poly& lb = d.back();
  auto deg = [](const std::vector<Poly>& v) {
    int i = static_cast<int>(v.size()) - 1;
    while (i >= 0 && v[static_cast<size_t>(i)].is_zero()) --i;
    return i;
  };
  int dr = deg(r);
  while (dr >= db) {
    Poly lr = r[static_cast<size_t>(dr)];
    // r := lb * r - lr * x^{dr-db} * b
    for (auto& ri : r) ri = ri * lb;
    for (int i = 0; i <= db; ++i)
      r[static_cast<size_t>(dr - db + i)] -= lr * d[static_cast<size_t>(i)];
    r.resize(static_cast<size_t>(std::max(dr, 1)));  // top coefficient cancelled
    dr = deg(r);
  }
  r.resize(static_cast<size_t>(dr + 1));
  return Poly::from_coeffs(p, r);
}

// Content of a with respect to p: gcd of the univariate coefficients.
Poly content_in(Param p, const Poly& a) {
  Poly g;
  for (const Poly& ci : a.coeffs_in(p)) {
    if (ci.is_zero()) continue;
    g = Poly::gcd(g, ci);
    if (g.is_one()) break;
  }
  return g;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  auto normalize = [](const Poly& x) { return x.is_zero() ? Poly() : x.primitive_part(); };
  if (a.is_zero()) return normalize(b);
  if (b.is_zero()) return normalize(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return normalize(a);

  // Main variable: first parameter either polynomial depends on.
  Param v = Param::k;
  for (int i = 0; i < kNumParams; ++i) {
    v = static_cast<Param>(i);
    if (a.depends_on(v) || b.depends_on(v)) break;
  }

  Poly ca = content_in(v, a);
  Poly cb = content_in(v, b);
  Poly gc = gcd(ca, cb);
  // primitive_part also strips the rational content, which content_in (a
  // gcd of primitive polynomials) does not see; without it the integer
  // factors picked up from pseudo-division leading coefficients pile up.
  Poly pa = div_exact(a, ca).primitive_part();
  Poly pb = div_exact(b, cb).primitive_part();

  if (!pa.depends_on(v) || !pb.depends_on(v)) {
    // One primitive part is free of v, hence a unit times 1 in the PRS sense.
    return normalize(gc);
  }

  // Primitive pseudo-remainder sequence in v.
  Poly p = pa, q = pb;
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  while (true) {
    Poly r = prem_in(v, p, q);
    if (r.is_zero()) break;
    p = q;
    q = div_exact(r, content_in(v, r)).primitive_part();
    if (!q.depends_on(v)) return normalize(gc);  // gcd of primitive parts is trivial
  }
  return normalize(gc * q);
}

std::string Poly::text() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, q] : terms_) {
    Rat aq = abs(q);
    if (first) {
      if (q < 0) os << "-";
      first = false;
    } else {
      os << (q < 0 ? " - " : " + ");
    }
    bool need_coeff = (aq != 1) || m.is_unit();
    if (need_coeff) os << aq.get_str();
    bool printed = need_coeff;
    for (int i = 0; i < kNumParams; ++i) {
      if (m.e[i] == 0) continue;
      if (printed) os << "*";
      os << param_name(static_cast<Param>(i));
      if (m.e[i] > 1) os << "^" << m.e[i];
      printed = true;
    }
  }
  return os.str();
}

namespace {

struct PolyParser {
  std::string_view s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& why) {
    throw DomainError("parse error at offset " + std::to_string(i) + ": " + why +
                      " in \"" + std::string(s) + "\"");
  }

  mpz_class parse_int() {
    skip_ws();
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) fail("expected integer");
    mpz_class v(std::string(s.substr(i, j - i)), 10);
    i = j;
    return v;
  }

  std::optional<Param> try_param() {
    skip_ws();
    size_t j = i;
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) return std::nullopt;
    auto p = param_from_name(s.substr(i, j - i));
    if (p) i = j;
    return p;
  }

  // term := coeff ['*' factors] | factors ; factor := param ['^' int]
  Poly parse_term() {
    Rat coeff(1);
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      mpz_class n = parse_int();
      mpz_class d(1);
      if (peek() == '/') {
        ++i;
        d = parse_int();
        if (d == 0) fail("zero denominator in coefficient");
      }
      coeff = Rat(n, d);
      coeff.canonicalize();
      have_coeff = true;
      if (peek() != '*') return Poly(coeff);  // pure constant term
      ++i;  // consume '*', a factor must follow
    }
    Poly mono(1);
    bool any_factor = false;
    while (true) {
      auto p = try_param();
      if (!p) {
        if (!any_factor) fail(have_coeff ? "expected parameter after '*'"
                                         : "expected parameter or coefficient");
        break;
      }
      any_factor = true;
      int exp = 1;
      if (peek() == '^') {
        ++i;
        exp = static_cast<int>(parse_int().get_si());
        if (exp <= 0) fail("exponent must be positive");
      }
      mono *= Poly::variable(*p, exp);
      if (peek() == '*') {
        ++i;
        continue;
      }
      break;
    }
    mono.mul_scalar(coeff);
    return mono;
  }

  Poly parse_poly() {
    Poly acc;
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++i;
    } else if (peek() == '+') {
      ++i;
    }
    while (true) {
      Poly t = parse_term();
      t.mul_scalar(Rat(sign));
      acc += t;
      char ch = peek();
      if (ch == '+') {
        sign = 1;
        ++i;
      } else if (ch == '-') {
        sign = -1;
        ++i;
      } else {
        break;
      }
    }
    return acc;
  }
};

}  // namespace

Poly Poly::parse(std::string_view sv) {
  PolyParser p{sv};
  if (p.eof()) throw DomainError("parse error: empty polynomial text");
  Poly r = p.parse_poly();
  if (!p.eof()) p.fail("trailing characters");
  return r;
}

// ---------------------------------------------------------------------------
// RationalFunction
// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ZeroDivisionError("rational function with zero denominator");
  canonicalize();
}

RationalFunction RationalFunction::variable(Param p) {
  return RationalFunction(Poly::variable(p));
}

Rat RationalFunction::constant_value() const {
  assert(is_constant());
  if (num_.is_zero()) return Rat(0);
  return num_.constant_value() / den_.constant_value();
}

RationalFunction RationalFunction::from_reduced(Poly num, Poly den) {
  RationalFunction r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  r.canonicalize(/*skip_gcd=*/true);
  return r;
}

void RationalFunction::canonicalize(bool skip_gcd) {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (!skip_gcd && !den_.is_constant() && !num_.is_constant()) {
    Poly g = Poly::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = Poly::div_exact(num_, g);
      den_ = Poly::div_exact(den_, g);
    }
  }
  // Scale so both parts have integer coefficients with coprime contents and
  // the denominator has positive leading coefficient.
  Rat cn = num_.content();
  Rat cd = den_.content();
  Rat ratio = cn / cd;  // reduced p/q with q > 0 when cd > 0; sign from cn
  num_ = num_.primitive_part();
  den_ = den_.primitive_part();
  num_.mul_scalar(Rat(ratio.get_num()));
  den_.mul_scalar(Rat(ratio.get_den()));
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    canonicalize();
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = -o;
  if (den_ == o.den_) {
    num_ -= o.num_;
    canonicalize();
    return *this;
  }
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  // Cross-reduce so the product is already coprime and parts stay small.
  bool a_triv = a.num_.is_constant() || b.den_.is_constant();
  bool b_triv = b.num_.is_constant() || a.den_.is_constant();
  Poly g1 = a_triv ? Poly(1) : Poly::gcd(a.num_, b.den_);
  Poly g2 = b_triv ? Poly(1) : Poly::gcd(b.num_, a.den_);
  Poly n1 = g1.is_one() ? a.num_ : Poly::div_exact(a.num_, g1);
  Poly d2 = g1.is_one() ? b.den_ : Poly::div_exact(b.den_, g1);
  Poly n2 = g2.is_one() ? b.num_ : Poly::div_exact(b.num_, g2);
  Poly d1 = g2.is_one() ? a.den_ : Poly::div_exact(a.den_, g2);
  return RationalFunction::from_reduced(n1 * n2, d1 * d2);
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw ZeroDivisionError("inverse of zero");
  return from_reduced(den_, num_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw ZeroDivisionError("division by zero rational function");
  return a * b.inverse();
}

std::string RationalFunction::text() const {
  if (den_.is_one()) return num_.text();
  return "(" + num_.text() + ")/(" + den_.text() + ")";
}

RationalFunction RationalFunction::parse(std::string_view s) {
  // Either "(num)/(den)" or a bare polynomial.
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string_view t = s.substr(a, b - a);
  if (!t.empty() && t.front() == '(') {
    int depth = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] == '(') ++depth;
      else if (t[i] == ')') {
        --depth;
        if (depth == 0) {
          if (i + 2 < t.size() && t[i + 1] == '/' && t[i + 2] == '(' && t.back() == ')') {
            Poly num = Poly::parse(t.substr(1, i - 1));
            Poly den = Poly::parse(t.substr(i + 3, t.size() - i - 4));
            return RationalFunction(std::move(num), std::move(den));
          }
          break;
        }
      }
    }
  }
  return RationalFunction(Poly::parse(t));
}

RF rf_arith(RfOp op, const RF& a, const RF& b) {
  switch (op) {
    case RfOp::add: return a + b;
    case RfOp::sub: return a - b;
    case RfOp::mul: return a * b;
    case RfOp::div: return a / b;
  }
  throw Error("rf_arith: bad op");
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

// Evaluate a polynomial under a simultaneous substitution, as an RF.
RF poly_eval(const Poly& p, const std::map<Param, RF>& subst) {
  // Power cache per parameter.
  std::array<std::vector<RF>, kNumParams> powers;
  auto power = [&](Param par, int e) -> RF {
    auto it = subst.find(par);
    if (it == subst.end()) return RF(Poly::variable(par, e));
    auto& cache = powers[static_cast<size_t>(par)];
    if (cache.empty()) cache.push_back(RF(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * it->second);
    return cache[static_cast<size_t>(e)];
  };
  RF acc;
  for (const auto& [m, q] : p.terms()) {
    RF term{q};
    for (int i = 0; i < kNumParams; ++i)
      if (m.e[i] != 0) term *= power(static_cast<Param>(i), m.e[i]);
    acc += term;
  }
  return acc;
}

// Try to isolate the vanishing factor (p - value)^mult of den for the error
// payload. Only exact when the substitutions are plain rationals; otherwise
// the full denominator is reported.
std::string diagnose_pole(const Poly& den, const std::map<Param, RF>& subst) {
  Poly current = den;
  for (int ip = 0; ip < kNumParams; ++ip) {
    Param p = static_cast<Param>(ip);
    auto it = subst.find(p);
    if (it == subst.end() || !current.depends_on(p)) continue;
    if (!it->second.is_constant()) break;  // give up on exact isolation
    Rat v = it->second.constant_value();
    // Substitute p = v alone; if the result vanishes, (p - v) divides.
    std::map<Param, RF> single{{p, RF(v)}};
    RF r = poly_eval(current, single);
    if (r.is_zero()) {
      Poly factor = Poly::variable(p) - Poly(v);
      int mult = 0;
      Poly rem = current;
      while (true) {
        // synthetic trial division by (p - v)
        try {
          Poly q = Poly::div_exact(rem, factor);
          rem = q;
          ++mult;
        } catch (const Error&) {
          break;
        }
        if (poly_eval(rem, single).is_zero()) continue;
        break;
      }
      std::string t = "(" + factor.text() + ")";
      if (mult > 1) t += "^" + std::to_string(mult);
      return t;
    }
    // Partial substitution did not vanish alone: substitute and continue
    // looking at the remaining parameters.
    if (r.is_polynomial()) {
      current = r.num();
      // den of r is a constant here; scaling does not affect vanishing
    } else {
      break;
    }
  }
  return "(" + den.text() + ")";
}

}  // namespace

RF rf_eval(const RF& f, const std::map<Param, RF>& subst) {
  if (subst.empty()) return f;
  RF denv = poly_eval(f.den(), subst);
  if (denv.is_zero()) {
    std::string factor = diagnose_pole(f.den(), subst);
    throw PoleError("substitution vanishes on denominator factor " + factor, factor);
  }
  RF numv = poly_eval(f.num(), subst);
  return numv / denv;
}

// ---------------------------------------------------------------------------
// Laurent expansion
// ---------------------------------------------------------------------------

SeriesExpansion rf_series(const RF& f, Param param, const std::optional<Rat>& center, int order) {
  if (order < 0) throw DomainError("rf_series: order must be >= 0");
  SeriesExpansion out;
  out.coefficients.assign(static_cast<size_t>(order) + 1, RF());
  if (f.is_zero()) {
    out.zero = true;
    return out;
  }

  auto expand = [&](const Poly& p) -> std::pair<std::vector<Poly>, int> {
    // Returns coefficients of t^j (j = 0..) and an extra valuation shift.
    std::vector<Poly> coeffs = p.coeffs_in(param);
    if (!center) {
      // t = 1/param: p = t^{-deg} * sum_j coeffs[deg - j] t^j ; shift -deg.
      int deg = static_cast<int>(coeffs.size()) - 1;
      std::vector<Poly> rev(coeffs.rbegin(), coeffs.rend());
      return {rev, -deg};
    }
    // t = param - center: binomial shift.
    const Rat& a = *center;
    size_t n = coeffs.size();
    std::vector<Poly> shifted(n);
    // shifted[j] = sum_{i>=j} C(i,j) a^{i-j} coeffs[i]
    for (size_t i = 0; i < n; ++i) {
      if (coeffs[i].is_zero()) continue;
      for (size_t j = 0; j <= i; ++j) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(j));
        Rat ap(1);
        for (size_t t = 0; t < i - j; ++t) ap *= a;
        Poly contrib = coeffs[i];
        contrib.mul_scalar(Rat(b) * ap);
        shifted[j] += contrib;
      }
    }
    return {shifted, 0};
  };

  auto [ncoeffs, nshift] = expand(f.num());
  auto [dcoeffs, dshift] = expand(f.den());

  auto valuation = [](const std::vector<Poly>& v) {
    for (size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) return static_cast<int>(i);
    return -1;
  };
  int vn = valuation(ncoeffs);
  int vd = valuation(dcoeffs);
  assert(vn >= 0 && vd >= 0);  // f != 0 and den != 0

  out.leading_exponent = (vn + nshift) - (vd + dshift);

  // Power-series division of (ncoeffs shifted down by vn) by (dcoeffs by vd).
  const Poly& d0 = dcoeffs[static_cast<size_t>(vd)];
  RF d0rf{d0};
  auto ncoef = [&](int i) -> RF {
    int idx = vn + i;
    if (idx < 0 || idx >= static_cast<int>(ncoeffs.size())) return RF();
    return RF(ncoeffs[static_cast<size_t>(idx)]);
  };
  auto dcoef = [&](int i) -> RF {
    int idx = vd + i;
    if (idx < 0 || idx >= static_cast<int>(dcoeffs.size())) return RF();
    return RF(dcoeffs[static_cast<size_t>(idx)]);
  };
  for (int i = 0; i <= order; ++i) {
    RF acc = ncoef(i);
    for (int j = 0; j < i; ++j) acc -= out.coefficients[static_cast<size_t>(j)] * dcoef(i - j);
    out.coefficients[static_cast<size_t>(i)] = acc / d0rf;
  }
  return out;
}

}  // namespace vacmod
