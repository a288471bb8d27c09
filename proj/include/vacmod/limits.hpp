#pragma once
// Rees-rescaled relations and the two degenerations of the Sugawara
// construction: the critical level k = -h_dual, where the scaled shifted
// modes become a commuting family with a Poisson-Virasoro linear term, and
// the infinite level k -> infinity with c = k*mu/lambda, where they turn into
// the classical quadratic symbols. All limits are extracted from exact
// symbolic operator matrices through Laurent expansion; nothing is numeric.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vacmod/sugawara.hpp"

namespace vacmod {

// One verified comparison, the unit the harness aggregates into reports.
struct CheckEntry {
  std::string lhs;      // description of the computed side
  std::string rhs;      // description of the expected side
  bool pass = false;
  std::string witness;  // first mismatch (basis monomial and both values), empty on pass
};

// Coefficient-wise substitution; parameters absent from the map stay
// symbolic. PoleError propagates from any coefficient.
ModuleVector substitute_params(const ModuleVector& v, const std::map<Param, RF>& subst);

// True when every coefficient of v, expanded at the center (nullopt means
// infinity), starts at exponent >= order. Vacuously true for v == 0.
bool vanishes_to_order(const ModuleVector& v, Param p, const std::optional<Rat>& center,
                       int order);

// Coefficient-wise extraction of the Laurent coefficient at the given
// exponent (of param - center, or of 1/param at infinity).
ModuleVector series_coefficient(const ModuleVector& v, Param p, const std::optional<Rat>& center,
                                int exponent);

// (lambda/k)^{#J} * (mu/c)^{#L} for a basis monomial: the change of scale
// between the plain PBW basis and the rescaled (barred) one.
RF bar_scale(const PBWMonomial& m);

// Checks one rescaled defining relation [x-bar, y-bar] = prefactor * (barred
// right-hand side) as an exact operator identity on the basis of weight <= D,
// where J-bar = (lambda/k) J, L-bar = (mu/c) L, the prefactor is lambda/k for
// a current pair and mu/c when a Virasoro mode is involved, and the central
// terms take their barred forms lambda*p*(x,y) delta resp.
// (mu/12)(p^3-p) delta. Requires the fully symbolic parameter assignment.
CheckEntry rees_relation_check(const ModuleSpecPtr& spec, const GeneratorSymbol& x,
                               const GeneratorSymbol& y);

// (k + h_dual) S_mode v: the critical rescaling of the shifted mode. Exact;
// all coefficients are polynomial in k and c.
ModuleVector scaled_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v);

// The same operator evaluated at k = -h_dual (the level parameter must be
// the symbolic k). PoleError if v itself has a pole there.
ModuleVector critical_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v);

// Verifies, on the whole basis of weight <= D, that [S~_l, S~_m] with
// S~ = (k+h_dual) S (a) vanishes at k = -h_dual and (b) has linear expansion
// coefficient (l-m) S~_{l+m}|_{k=-h_dual} + (mu_g/12)(l^3-l) delta_{l+m,0}
// with mu_g = h_dual * dim g. The central constant comes from expanding
// (k+h_dual)^2 c_k = (k+h_dual)^2 c - (k+h_dual) k dim g directly; its
// c-dependence only enters at order two.
CheckEntry critical_bracket(const SugawaraConfig& cfg, int l, int m);

// Verifies [S~_{s_mode}, J^a_{j_mode}] = 0 for every basis index a, as exact
// symbolic operators (so in particular at the critical level).
CheckEntry critical_invariance(const SugawaraConfig& cfg, int s_mode, int j_mode);

// Verifies [L_l, S~_m] at k = -h_dual equals
// (l-m) S~_{l+m}|_{k=-h_dual} + (mu_g/12)(l^3-l) delta_{l+m,0}.
CheckEntry critical_conformal(const SugawaraConfig& cfg, int l, int m);

// The Classical-regime module with the same kind, algebra, level structure,
// parameters and truncation.
ModuleSpecPtr classical_counterpart(const ModuleSpecPtr& spec);

// The k -> infinity limit of the rescaled shifted operator S-bar =
// (lambda^2/k) S in barred coordinates with c = k*mu/lambda substituted,
// applied to a vector of the classical counterpart module. DomainError if
// any matrix entry fails to be regular at infinity.
ModuleVector classical_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v);

// Verifies, on the basis of weight <= D: every matrix entry of
// [S-bar_l, S-bar_m] (barred coordinates, c = k*mu/lambda) decays at
// infinity, so the family commutes in the limit; the order-0 value of
// (k/lambda) [S-bar_l, S-bar_m] equals
// lambda ((l-m) S-bar^inf_{l+m} + (lambda*mu/12)(l^3-l) delta_{l+m,0}); and
// the internal central charge term (lambda^2/k)(k dim g/(k+h_dual))
// contributes nothing in the limit.
CheckEntry classical_bracket(const SugawaraConfig& cfg, int l, int m);

// Generator-level Poisson brackets on a Classical-regime module:
//   {J-bar^a_p, J-bar^b_q} = [J^a,J^b]-bar_{p+q} + lambda p (J^a,J^b) delta_{p+q,0}
//   {L-bar_p,   L-bar_q}   = (p-q) L-bar_{p+q} + (mu/12)(p^3-p) delta_{p+q,0}
//   {L-bar_p,   J-bar^a_q} = -q J-bar^a_{p+q}
// The mode factor in the current central term is forced by antisymmetry.
class PoissonBracketTable {
 public:
  explicit PoissonBracketTable(ModuleSpecPtr spec);  // DomainError unless Classical

  const ModuleSpecPtr& spec() const { return spec_; }

  struct GeneratorBracket {
    std::vector<std::pair<GeneratorSymbol, RF>> terms;
    RF central;
  };
  // DomainError if the module does not admit one of the symbols.
  GeneratorBracket generator_bracket(const GeneratorSymbol& x, const GeneratorSymbol& y) const;

 private:
  ModuleSpecPtr spec_;
};

// The Poisson bracket of two module elements, extended from the generator
// table by Leibniz in both arguments; creation symbols act by multiplication
// and annihilation symbols act as derivations. Bilinear and antisymmetric.
// TruncationError when a combined conformal degree exceeds the cap.
ModuleVector classical_poisson(const ModuleVector& v, const ModuleVector& w,
                               const PoissonBracketTable& table);

}  // namespace vacmod
