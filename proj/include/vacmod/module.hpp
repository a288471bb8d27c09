#pragma once
// Graded vacuum modules: PBW monomial bases and the normal-ordering rewriter
// that implements the defining commutation relations of the affine, Virasoro,
// and semidirect-product algebras.
//
// Grading conventions. Two integer gradings coexist:
//   * conformal degree  deg0 = sum(-m) over the symbols of a monomial. The
//     action of a mode-m generator shifts deg0 by exactly -m. Truncation
//     gates (TruncationError) are expressed in this grading.
//   * weight = sum of per-symbol weights n - m (J) and 2n - m (L), where n is
//     the level structure. Every creation symbol has weight >= 1, so each
//     weight-d slice of the basis is finite for every n, with graded
//     dimensions independent of n. Basis enumeration is by weight; at n = 0
//     the two gradings coincide.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vacmod/errors.hpp"
#include "vacmod/lie.hpp"
#include "vacmod/rational.hpp"

namespace vacmod {

enum class AlgebraKind { KacMoody, Virasoro, Semidirect };
enum class Regime { Quantum, Classical };

std::string algebra_kind_name(AlgebraKind k);
std::string regime_name(Regime r);

// A current mode J^a_m or a Virasoro mode L_m. The central elements are not
// symbols: they are folded into coefficients as the scalars below.
struct GeneratorSymbol {
  enum class Kind : std::uint8_t { J, L };
  Kind kind;
  int a;  // basis index into the Lie algebra; unused for L
  int m;  // mode

  static GeneratorSymbol make_j(int a, int m) { return {Kind::J, a, m}; }
  static GeneratorSymbol make_l(int m) { return {Kind::L, 0, m}; }
  bool is_j() const { return kind == Kind::J; }
  bool is_l() const { return kind == Kind::L; }
  friend bool operator==(const GeneratorSymbol&, const GeneratorSymbol&) = default;
};

// Within-word order: J symbols before L symbols; J by (mode, basis index)
// ascending; L by mode ascending.
bool symbol_less(const GeneratorSymbol& s, const GeneratorSymbol& t);

// Values taken by the central elements: K acts by `level`, C by `central`.
// Symbolic k and c by default; a Sugawara-source module carries the shifted
// central charge here, and numeric evaluations substitute rationals.
struct ParamAssignment {
  RF level = RF::variable(Param::k);
  RF central = RF::variable(Param::c);
};

class VacuumModuleSpec;
using ModuleSpecPtr = std::shared_ptr<const VacuumModuleSpec>;

// Immutable description of one vacuum module.
class VacuumModuleSpec {
 public:
  VacuumModuleSpec(AlgebraKind kind, Regime regime, AlgebraPtr lie, int level_structure,
                   ParamAssignment params, int truncation_degree);

  AlgebraKind kind() const { return kind_; }
  Regime regime() const { return regime_; }
  const AlgebraPtr& lie() const { return lie_; }
  int level_structure() const { return n_; }
  const ParamAssignment& params() const { return params_; }
  int truncation_degree() const { return degree_cap_; }

  bool admits(const GeneratorSymbol& s) const;

  // Annihilation law: J^a_m kills the vacuum iff m >= n, L_m iff m >= 2n-1.
  bool annihilates_vacuum(const GeneratorSymbol& s) const;
  bool is_creation(const GeneratorSymbol& s) const { return !annihilates_vacuum(s); }

  // Weight grading of a single symbol: n - m for J, 2n - m for L.
  int weight(const GeneratorSymbol& s) const;

  // Deterministic content summary (algebra constants included); cache key
  // material.
  std::string fingerprint() const;

 private:
  AlgebraKind kind_;
  Regime regime_;
  AlgebraPtr lie_;
  int n_;
  ParamAssignment params_;
  int degree_cap_;
};

ModuleSpecPtr make_module_spec(AlgebraKind kind, Regime regime, AlgebraPtr lie,
                               int level_structure, ParamAssignment params,
                               int truncation_degree);

// Canonical PBW word: creation symbols only, J block before L block, each
// block sorted by symbol_less. The empty word is the vacuum.
struct PBWMonomial {
  std::vector<GeneratorSymbol> word;

  int deg0() const;
  int weight(const VacuumModuleSpec& spec) const;
  int j_count() const;
  bool is_vacuum() const { return word.empty(); }
  bool is_canonical(const VacuumModuleSpec& spec) const;
  // Normative report form: `J[a=<label>,m=<int>] ... L[m=<int>] |0;n=<n>>`.
  std::string text(const VacuumModuleSpec& spec) const;
  friend bool operator==(const PBWMonomial&, const PBWMonomial&) = default;
};

// Strict total order on monomials: lexicographic by symbol_less, prefixes
// first. Fixes the basis order used in reports and vector text.
struct MonomialOrder {
  bool operator()(const PBWMonomial& x, const PBWMonomial& y) const;
};

// Sparse vector over one module with RationalFunction coefficients and no
// stored zeros.
class ModuleVector {
 public:
  using Terms = std::map<PBWMonomial, RF, MonomialOrder>;

  ModuleVector() = default;
  explicit ModuleVector(ModuleSpecPtr spec) : spec_(std::move(spec)) {}
  static ModuleVector vacuum(ModuleSpecPtr spec);

  const ModuleSpecPtr& module() const { return spec_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  RF coefficient(const PBWMonomial& m) const;
  void add_term(const PBWMonomial& m, const RF& coeff);

  // Conformal degree shared by every term, when the vector is homogeneous
  // and nonzero.
  std::optional<int> degree() const;
  // Largest term weight; 0 for the zero vector.
  int max_weight() const;

  ModuleVector& operator+=(const ModuleVector& o);
  ModuleVector& operator-=(const ModuleVector& o);
  ModuleVector& operator*=(const RF& q);
  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator*(ModuleVector a, const RF& q) { return a *= q; }
  friend ModuleVector operator*(const RF& q, ModuleVector a) { return a *= q; }
  bool operator==(const ModuleVector& o) const;

  // `coeff * monomial` terms in basis order, joined with " + "; "0" when zero.
  std::string text() const;

 private:
  ModuleSpecPtr spec_;
  Terms terms_;
};

// All canonical monomials of the given weight, sorted by MonomialOrder.
// degree < 0 or degree > truncation cap raises TruncationError.
std::vector<PBWMonomial> enumerate_basis(const ModuleSpecPtr& spec, int degree);

// word applied to the vacuum, expanded in the canonical basis. Rejects words
// whose conformal degree exceeds the truncation cap (TruncationError) and
// symbols the module does not admit (AlgebraMismatchError).
ModuleVector normal_order(const std::vector<GeneratorSymbol>& word, const ModuleSpecPtr& spec);

// Module action of one generator. Gated: the result's conformal degree must
// stay within the truncation cap.
ModuleVector apply_generator(const GeneratorSymbol& gen, const ModuleVector& v);

// Same action without the truncation gate. Exact and total; internal sums
// (for instance quadratic-operator windows) pass through degrees beyond the
// cap transiently and use this entry point.
ModuleVector apply_generator_exact(const GeneratorSymbol& gen, const ModuleVector& v);

// Commutative product in a Classical-regime module (DomainError otherwise).
ModuleVector classical_product(const ModuleVector& v, const ModuleVector& w);

}  // namespace vacmod
