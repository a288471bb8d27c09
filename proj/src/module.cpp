// Vacuum module implementation: canonical PBW words, the insertion-based
// normal-ordering rewriter, weight-graded basis enumeration, and the
// commutative product used in the classical regime.

#include "vacmod/module.hpp"

#include <algorithm>
#include <sstream>

namespace vacmod {

namespace {

using Terms = ModuleVector::Terms;

void add_to(Terms& acc, const PBWMonomial& m, const RF& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = acc.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

// One summand of a commutator [s, t]: a generator symbol, or (when sym is
// empty) a scalar multiple of the identity coming from the central element.
struct BracketTerm {
  std::optional<GeneratorSymbol> sym;
  RF coeff;
};

// The defining relations. Central elements act by the module parameters.
std::vector<BracketTerm> bracket_terms(const VacuumModuleSpec& spec, const GeneratorSymbol& s,
                                       const GeneratorSymbol& t) {
  std::vector<BracketTerm> out;
  if (s.is_j() && t.is_j()) {
    // [J^a_p, J^b_q] = [J^a,J^b]_{p+q} + p (J^a,J^b) delta_{p+q,0} K
    const SimpleLieAlgebra& g = *spec.lie();
    for (const LieTerm& bt : g.bracket_row(s.a, t.a))
      out.push_back({GeneratorSymbol::make_j(bt.index, s.m + t.m), RF(bt.coeff)});
    if (s.m + t.m == 0 && s.m != 0) {
      Rat pairing = g.form_matrix[static_cast<size_t>(s.a)][static_cast<size_t>(t.a)];
      if (pairing != 0) out.push_back({std::nullopt, RF(pairing * s.m) * spec.params().level});
    }
  } else if (s.is_l() && t.is_l()) {
    // [L_p, L_q] = (p-q) L_{p+q} + (1/12)(p^3-p) delta_{p+q,0} C
    if (s.m != t.m) out.push_back({GeneratorSymbol::make_l(s.m + t.m), RF(Rat(s.m - t.m))});
    if (s.m + t.m == 0) {
      long p = s.m;
      Rat central = rat_frac(p * p * p - p, 12);
      if (central != 0) out.push_back({std::nullopt, RF(central) * spec.params().central});
    }
  } else if (s.is_l()) {
    // [L_p, J^a_q] = -q J^a_{p+q}
    if (t.m != 0) out.push_back({GeneratorSymbol::make_j(t.a, s.m + t.m), RF(Rat(-t.m))});
  } else {
    // [J^a_q, L_p] = +q J^a_{p+q}
    if (s.m != 0) out.push_back({GeneratorSymbol::make_j(s.a, s.m + t.m), RF(Rat(s.m))});
  }
  return out;
}

// Straightens sym * word * vac into canonical terms. Placement is only legal
// for a creation symbol that fits before the current head; everything else
// commutes inward, producing bracket terms on the shorter suffix. The head is
// re-inserted recursively because merged symbols may sort below it.
class Rewriter {
 public:
  explicit Rewriter(const VacuumModuleSpec& spec) : spec_(spec) {}

  Terms apply(const GeneratorSymbol& sym, const std::vector<GeneratorSymbol>& word) {
    Terms out;
    if (word.empty()) {
      if (!spec_.annihilates_vacuum(sym)) out.emplace(PBWMonomial{{sym}}, RF(1));
      return out;
    }
    const GeneratorSymbol head = word.front();
    if (spec_.is_creation(sym) && !symbol_less(head, sym)) {
      PBWMonomial m;
      m.word.reserve(word.size() + 1);
      m.word.push_back(sym);
      m.word.insert(m.word.end(), word.begin(), word.end());
      out.emplace(std::move(m), RF(1));
      return out;
    }
    std::vector<GeneratorSymbol> rest(word.begin() + 1, word.end());
    Terms inner = apply(sym, rest);
    for (const auto& [mono, c] : inner) {
      Terms outer = apply(head, mono.word);
      for (const auto& [m2, c2] : outer) add_to(out, m2, c * c2);
    }
    for (const BracketTerm& bt : bracket_terms(spec_, sym, head)) {
      if (!bt.sym) {
        add_to(out, PBWMonomial{rest}, bt.coeff);
      } else {
        Terms br = apply(*bt.sym, rest);
        for (const auto& [m2, c2] : br) add_to(out, m2, bt.coeff * c2);
      }
    }
    return out;
  }

 private:
  const VacuumModuleSpec& spec_;
};

bool modules_match(const ModuleSpecPtr& a, const ModuleSpecPtr& b) {
  if (!a || !b) return true;  // bare zero vector
  if (a == b) return true;
  return a->fingerprint() == b->fingerprint();
}

}  // namespace

std::string algebra_kind_name(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::KacMoody: return "kac-moody";
    case AlgebraKind::Virasoro: return "virasoro";
    case AlgebraKind::Semidirect: return "semidirect";
  }
  return "?";
}

std::string regime_name(Regime r) { return r == Regime::Quantum ? "quantum" : "classical"; }

bool symbol_less(const GeneratorSymbol& s, const GeneratorSymbol& t) {
  if (s.kind != t.kind) return s.is_j();
  if (s.m != t.m) return s.m < t.m;
  return s.is_j() && s.a < t.a;
}

VacuumModuleSpec::VacuumModuleSpec(AlgebraKind kind, Regime regime, AlgebraPtr lie,
                                   int level_structure, ParamAssignment params,
                                   int truncation_degree)
    : kind_(kind), regime_(regime), lie_(std::move(lie)), n_(level_structure),
      params_(std::move(params)), degree_cap_(truncation_degree) {
  if (n_ < 0) throw DomainError("level structure must be nonnegative");
  if (degree_cap_ < 0) throw DomainError("truncation degree must be nonnegative");
  if (kind_ == AlgebraKind::Virasoro) {
    if (lie_) throw DomainError("a Virasoro module carries no Lie algebra");
  } else if (!lie_) {
    throw DomainError("current-algebra modules need a Lie algebra");
  }
}

bool VacuumModuleSpec::admits(const GeneratorSymbol& s) const {
  if (s.is_j()) return kind_ != AlgebraKind::Virasoro;
  return kind_ != AlgebraKind::KacMoody;
}

bool VacuumModuleSpec::annihilates_vacuum(const GeneratorSymbol& s) const {
  return s.is_j() ? s.m >= n_ : s.m >= 2 * n_ - 1;
}

int VacuumModuleSpec::weight(const GeneratorSymbol& s) const {
  return s.is_j() ? n_ - s.m : 2 * n_ - s.m;
}

std::string VacuumModuleSpec::fingerprint() const {
  std::ostringstream os;
  os << algebra_kind_name(kind_) << ";" << regime_name(regime_) << ";n=" << n_
     << ";D=" << degree_cap_ << ";level=" << params_.level.text()
     << ";central=" << params_.central.text() << ";lie=" << (lie_ ? lie_->fingerprint() : "none");
  return os.str();
}

ModuleSpecPtr make_module_spec(AlgebraKind kind, Regime regime, AlgebraPtr lie,
                               int level_structure, ParamAssignment params,
                               int truncation_degree) {
  return std::make_shared<const VacuumModuleSpec>(kind, regime, std::move(lie), level_structure,
                                                  std::move(params), truncation_degree);
}

int PBWMonomial::deg0() const {
  int d = 0;
  for (const GeneratorSymbol& s : word) d -= s.m;
  return d;
}

int PBWMonomial::weight(const VacuumModuleSpec& spec) const {
  int w = 0;
  for (const GeneratorSymbol& s : word) w += spec.weight(s);
  return w;
}

int PBWMonomial::j_count() const {
  int c = 0;
  for (const GeneratorSymbol& s : word) c += s.is_j() ? 1 : 0;
  return c;
}

bool PBWMonomial::is_canonical(const VacuumModuleSpec& spec) const {
  for (size_t i = 0; i < word.size(); ++i) {
    if (spec.annihilates_vacuum(word[i])) return false;
    if (i + 1 < word.size() && symbol_less(word[i + 1], word[i])) return false;
  }
  return true;
}

std::string PBWMonomial::text(const VacuumModuleSpec& spec) const {
  std::ostringstream os;
  for (const GeneratorSymbol& s : word) {
    if (s.is_j())
      os << "J[a=" << spec.lie()->basis_labels[static_cast<size_t>(s.a)] << ",m=" << s.m << "] ";
    else
      os << "L[m=" << s.m << "] ";
  }
  os << "|0;n=" << spec.level_structure() << ">";
  return os.str();
}

bool MonomialOrder::operator()(const PBWMonomial& x, const PBWMonomial& y) const {
  return std::lexicographical_compare(x.word.begin(), x.word.end(), y.word.begin(), y.word.end(),
                                      [](const GeneratorSymbol& s, const GeneratorSymbol& t) {
                                        return symbol_less(s, t);
                                      });
}

ModuleVector ModuleVector::vacuum(ModuleSpecPtr spec) {
  ModuleVector v(std::move(spec));
  v.terms_.emplace(PBWMonomial{}, RF(1));
  return v;
}

RF ModuleVector::coefficient(const PBWMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RF() : it->second;
}

void ModuleVector::add_term(const PBWMonomial& m, const RF& coeff) { add_to(terms_, m, coeff); }

std::optional<int> ModuleVector::degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = terms_.begin()->first.deg0();
  for (const auto& [m, c] : terms_)
    if (m.deg0() != d) return std::nullopt;
  return d;
}

int ModuleVector::max_weight() const {
  int w = 0;
  for (const auto& [m, c] : terms_) w = std::max(w, m.weight(*spec_));
  return w;
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o) {
  if (!modules_match(spec_, o.spec_)) throw AlgebraMismatchError("cannot add vectors over different modules");
  if (!spec_) spec_ = o.spec_;
  for (const auto& [m, c] : o.terms_) add_to(terms_, m, c);
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& o) {
  if (!modules_match(spec_, o.spec_)) throw AlgebraMismatchError("cannot subtract vectors over different modules");
  if (!spec_) spec_ = o.spec_;
  for (const auto& [m, c] : o.terms_) add_to(terms_, m, RF(0) - c);
  return *this;
}

ModuleVector& ModuleVector::operator*=(const RF& q) {
  if (q.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= q;
  return *this;
}

bool ModuleVector::operator==(const ModuleVector& o) const {
  return modules_match(spec_, o.spec_) && terms_ == o.terms_;
}

std::string ModuleVector::text() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.text() << " * " << m.text(*spec_);
  }
  return os.str();
}

std::vector<PBWMonomial> enumerate_basis(const ModuleSpecPtr& spec, int degree) {
  if (degree < 0 || degree > spec->truncation_degree())
    throw TruncationError("basis degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(spec->truncation_degree()) + "]");
  const int n = spec->level_structure();
  const bool has_j = spec->kind() != AlgebraKind::Virasoro;
  const bool has_l = spec->kind() != AlgebraKind::KacMoody;
  const int dim = has_j ? spec->lie()->dimension : 0;

  std::vector<PBWMonomial> out;
  PBWMonomial cur;

  // L block: weights >= 2, mode 2n - w, modes ascending as weights descend.
  auto grow_l = [&](auto&& self, int remaining, std::optional<GeneratorSymbol> last) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    if (!has_l) return;
    for (int w = remaining; w >= 2; --w) {
      GeneratorSymbol s = GeneratorSymbol::make_l(2 * n - w);
      if (last && symbol_less(s, *last)) continue;
      cur.word.push_back(s);
      self(self, remaining - w, s);
      cur.word.pop_back();
    }
  };

  // J block first (weights >= 1, mode n - w), then hand off to the L block.
  auto grow_j = [&](auto&& self, int remaining, std::optional<GeneratorSymbol> last) -> void {
    grow_l(grow_l, remaining, std::nullopt);
    if (!has_j) return;
    for (int w = remaining; w >= 1; --w) {
      int m = n - w;
      for (int a = 0; a < dim; ++a) {
        GeneratorSymbol s = GeneratorSymbol::make_j(a, m);
        if (last && symbol_less(s, *last)) continue;
        cur.word.push_back(s);
        self(self, remaining - w, s);
        cur.word.pop_back();
      }
    }
  };
  grow_j(grow_j, degree, std::nullopt);

  std::sort(out.begin(), out.end(), [](const PBWMonomial& a, const PBWMonomial& b) {
    return MonomialOrder{}(a, b);
  });
  return out;
}

ModuleVector apply_generator_exact(const GeneratorSymbol& gen, const ModuleVector& v) {
  if (!v.module()) return v;
  if (!v.module()->admits(gen))
    throw AlgebraMismatchError("module of kind " + algebra_kind_name(v.module()->kind()) +
                               " does not admit this generator");
  if (v.module()->regime() != Regime::Quantum)
    throw DomainError("generator action is defined in the quantum regime");
  Rewriter rw(*v.module());
  ModuleVector out(v.module());
  for (const auto& [mono, coeff] : v.terms()) {
    Terms t = rw.apply(gen, mono.word);
    for (const auto& [m, c] : t) out.add_term(m, coeff * c);
  }
  return out;
}

ModuleVector apply_generator(const GeneratorSymbol& gen, const ModuleVector& v) {
  if (v.is_zero()) return v;
  int worst = v.terms().begin()->first.deg0();
  for (const auto& [m, c] : v.terms()) worst = std::max(worst, m.deg0());
  if (worst - gen.m > v.module()->truncation_degree())
    throw TruncationError("action of mode " + std::to_string(gen.m) + " leaves the degree-" +
                          std::to_string(v.module()->truncation_degree()) + " truncation");
  return apply_generator_exact(gen, v);
}

ModuleVector normal_order(const std::vector<GeneratorSymbol>& word, const ModuleSpecPtr& spec) {
  int deg = 0;
  for (const GeneratorSymbol& s : word) {
    if (!spec->admits(s))
      throw AlgebraMismatchError("module of kind " + algebra_kind_name(spec->kind()) +
                                 " does not admit every symbol of this word");
    deg -= s.m;
  }
  if (deg > spec->truncation_degree())
    throw TruncationError("word of degree " + std::to_string(deg) + " exceeds the degree-" +
                          std::to_string(spec->truncation_degree()) + " truncation");
  ModuleVector v = ModuleVector::vacuum(spec);
  for (size_t i = word.size(); i-- > 0;) v = apply_generator_exact(word[i], v);
  return v;
}

ModuleVector classical_product(const ModuleVector& v, const ModuleVector& w) {
  if (!modules_match(v.module(), w.module()))
    throw AlgebraMismatchError("cannot multiply vectors over different modules");
  ModuleSpecPtr spec = v.module() ? v.module() : w.module();
  if (!spec) return ModuleVector();
  if (spec->regime() != Regime::Classical)
    throw DomainError("classical_product is defined in the classical regime");
  ModuleVector out(spec);
  for (const auto& [m1, c1] : v.terms())
    for (const auto& [m2, c2] : w.terms()) {
      if (m1.deg0() + m2.deg0() > spec->truncation_degree())
        throw TruncationError("classical product leaves the degree-" +
                              std::to_string(spec->truncation_degree()) + " truncation");
      PBWMonomial prod;
      prod.word.reserve(m1.word.size() + m2.word.size());
      prod.word.insert(prod.word.end(), m1.word.begin(), m1.word.end());
      prod.word.insert(prod.word.end(), m2.word.begin(), m2.word.end());
      std::sort(prod.word.begin(), prod.word.end(), symbol_less);
      out.add_term(prod, c1 * c2);
    }
  return out;
}

}  // namespace vacmod
