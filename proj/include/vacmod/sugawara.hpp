#pragma once
// Quadratic Segal-Sugawara operators and the structures built from them: the
// internal Virasoro modes L^S_n, the shifted modes S_n = L_n - L^S_n, the
// degree-2 singular vector, the Virasoro-module embedding, and the tensor
// factorization of the semidirect vacuum module.

#include <memory>
#include <vector>

#include "vacmod/module.hpp"

namespace vacmod {

// Wraps a quantum current-carrying module (KacMoody or Semidirect) and
// precomputes the Sugawara normalization 1/(2(level + h_dual)). Construction
// fails with CriticalLevelError when the level parameter equals -h_dual, the
// one point where the normalization is undefined; a symbolic level is never
// critical. Copies share one memo of per-monomial operator applications.
class SugawaraConfig {
 public:
  explicit SugawaraConfig(ModuleSpecPtr spec);

  const ModuleSpecPtr& spec() const { return spec_; }
  const AlgebraPtr& lie() const { return spec_->lie(); }
  bool symbolic_level() const { return !spec_->params().level.is_constant(); }

  RF level() const { return spec_->params().level; }
  // 1/(2(level + h_dual))
  const RF& inverse_prefactor() const { return inv_; }
  // Central charge of the internal Virasoro action: level*dim/(level+h_dual).
  RF sugawara_central() const;
  // c_k: the module's central parameter minus sugawara_central().
  RF shifted_central() const;

  // The source module of the Virasoro embedding: a Virasoro vacuum module
  // over the same truncation whose L_m annihilate the vacuum for m >= 2n-1
  // (matching the vanishing thresholds of the shifted modes on this module)
  // and whose central parameter is the formal expression c_k.
  ModuleSpecPtr virasoro_source() const;

  struct Memo;  // opaque shared cache

  const std::shared_ptr<Memo>& memo() const { return memo_; }

 private:
  ModuleSpecPtr spec_;
  RF inv_;
  std::shared_ptr<Memo> memo_;
};

// L^S_{mode} applied to v. Gated like apply_generator: the result's conformal
// degree must stay within the truncation cap.
ModuleVector sugawara_mode(const SugawaraConfig& cfg, int mode, const ModuleVector& v);

// The raw normal-ordered double sum (no 1/(2(k+h)) prefactor), i.e.
// 2(level+h_dual) * L^S_{mode} v. Ungated; coefficient growth stays
// polynomial, which the degeneration analysis relies on. extra_margin widens
// the summation window beyond the derived bound (the output must not change;
// widening bypasses the memo).
ModuleVector sugawara_quadratic(const SugawaraConfig& cfg, int mode, const ModuleVector& v,
                                int extra_margin = 0);

// S_{mode} = L_{mode} - L^S_{mode} on a Semidirect module (DomainError on a
// plain current module). Gated like sugawara_mode.
ModuleVector shifted_mode(const SugawaraConfig& cfg, int mode, const ModuleVector& v);

// The degree-2 singular vector S_{-2} vac of a level-structure-0 Semidirect
// module (DomainError otherwise).
ModuleVector singular_vector(const SugawaraConfig& cfg);

// Image of a source Virasoro monomial L_{n_1}...L_{n_l} vac under the
// embedding: S_{n_1}...S_{n_l} vac. The monomial must be canonical with every
// mode < 2n-1 (DomainError) and fit in the truncation (TruncationError).
ModuleVector embed_virasoro(const PBWMonomial& source, const SugawaraConfig& cfg);

// Tensor factorization: (J-monomial, source Virasoro monomial) -> the J word
// applied after the S word. Same validity and truncation rules.
ModuleVector tensor_iso(const PBWMonomial& jm, const PBWMonomial& vm, const SugawaraConfig& cfg);

struct TensorTerm {
  PBWMonomial jm;  // current-algebra factor
  PBWMonomial vm;  // Virasoro factor
  RF coeff;
};

// Expands v over the images tensor_iso(jm, vm); summing the returned terms
// through tensor_iso reproduces v exactly. Works by peeling leading terms in
// the triangular order certified by tensor_iso_peel_less.
std::vector<TensorTerm> tensor_iso_inverse(const ModuleVector& v, const SugawaraConfig& cfg);

// Strict order in which tensor_iso is unit-triangular: by weight, then
// L-symbol count, then J-symbol count, then the canonical monomial order.
// Every non-leading term of tensor_iso(jm, vm) sits strictly below the
// concatenated monomial in this order; the harness uses it to certify
// change-of-basis determinants without elimination.
bool tensor_iso_peel_less(const VacuumModuleSpec& spec, const PBWMonomial& a, const PBWMonomial& b);

// Splits a canonical semidirect monomial into its J and L blocks, the inverse
// of concatenation (the L block is reinterpreted in the embedding source).
std::pair<PBWMonomial, PBWMonomial> split_blocks(const PBWMonomial& m);

}  // namespace vacmod
