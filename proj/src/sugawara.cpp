// Segal-Sugawara operators: finite-window normal-ordered quadratic sums, the
// shifted Virasoro modes, the singular vector, and the tensor factorization
// with its peeling inverse.

#include "vacmod/sugawara.hpp"

#include <algorithm>
#include <mutex>
#include <utility>

namespace vacmod {

namespace {

GeneratorSymbol J(int a, int m) { return GeneratorSymbol::make_j(a, m); }
GeneratorSymbol L(int m) { return GeneratorSymbol::make_l(m); }

// Total excitation of a monomial: sum of max(-m, 0). The action of J_p kills
// a monomial w outright once p >= excitation(w) + max(n, 1): commuting J_p to
// the vacuum only ever lowers its mode by merged negative modes (at most
// excitation(w) in total), so the surviving mode is >= p - excitation(w) >= n
// and annihilates; a central pairing needs p + m_i = 0 for some symbol, which
// forces p <= excitation(w). This bound justifies the finite summation
// window below.
int excitation(const PBWMonomial& m) {
  int e = 0;
  for (const GeneratorSymbol& s : m.word) e += std::max(-s.m, 0);
  return e;
}

ModuleVector apply_dual(const SugawaraConfig& cfg, int a, int mode, const ModuleVector& v) {
  ModuleVector out(v.module());
  for (const LieTerm& t : cfg.lie()->dual_coeffs[static_cast<size_t>(a)])
    out += apply_generator_exact(J(t.index, mode), v) * RF(t.coeff);
  return out;
}

void require_same_module(const SugawaraConfig& cfg, const ModuleVector& v) {
  if (!v.module()) return;
  if (v.module() == cfg.spec()) return;
  if (v.module()->fingerprint() != cfg.spec()->fingerprint())
    throw AlgebraMismatchError("vector does not live in the configured module");
}

void require_semidirect(const SugawaraConfig& cfg, const char* what) {
  if (cfg.spec()->kind() != AlgebraKind::Semidirect)
    throw DomainError(std::string(what) + " needs the semidirect module");
}

// Degree gate shared by the public mode operators.
void gate_result_degree(const ModuleVector& v, int mode) {
  if (v.is_zero()) return;
  int worst = v.terms().begin()->first.deg0();
  for (const auto& [m, c] : v.terms()) worst = std::max(worst, m.deg0());
  if (worst - mode > v.module()->truncation_degree())
    throw TruncationError("mode " + std::to_string(mode) + " leaves the degree-" +
                          std::to_string(v.module()->truncation_degree()) + " truncation");
}

// Raw double sum on a single monomial over the conservative window.
ModuleVector quadratic_on_monomial(const SugawaraConfig& cfg, int n0, const PBWMonomial& mono,
                                   int margin) {
  const ModuleSpecPtr& spec = cfg.spec();
  const int dim = cfg.lie()->dimension;
  const int window = excitation(mono) + spec->level_structure() + std::abs(n0) + 2 + margin;
  ModuleVector base(spec);
  base.add_term(mono, RF(1));
  ModuleVector acc(spec);
  for (int a = 0; a < dim; ++a) {
    for (int m = n0 - window; m < 0; ++m) {
      // J^a_m J_{a,n0-m}: the rightmost factor acts first
      ModuleVector t = apply_dual(cfg, a, n0 - m, base);
      if (t.is_zero()) continue;
      acc += apply_generator_exact(J(a, m), t);
    }
    for (int m = 0; m <= window; ++m) {
      // J_{a,n0-m} J^a_m
      ModuleVector t = apply_generator_exact(J(a, m), base);
      if (t.is_zero()) continue;
      acc += apply_dual(cfg, a, n0 - m, t);
    }
  }
  return acc;
}

ModuleVector shifted_exact(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  return apply_generator_exact(L(mode), v) -
         sugawara_quadratic(cfg, mode, v) * cfg.inverse_prefactor();
}

}  // namespace

struct SugawaraConfig::Memo {
  struct KeyLess {
    bool operator()(const std::pair<int, PBWMonomial>& x,
                    const std::pair<int, PBWMonomial>& y) const {
      if (x.first != y.first) return x.first < y.first;
      return MonomialOrder{}(x.second, y.second);
    }
  };
  std::mutex mu;
  std::map<std::pair<int, PBWMonomial>, ModuleVector::Terms, KeyLess> results;
};

SugawaraConfig::SugawaraConfig(ModuleSpecPtr spec) : spec_(std::move(spec)) {
  if (spec_->kind() == AlgebraKind::Virasoro)
    throw DomainError("Sugawara operators need current generators");
  if (spec_->regime() != Regime::Quantum)
    throw DomainError("Sugawara operators live in the quantum regime");
  RF shifted = spec_->params().level + RF(static_cast<long>(spec_->lie()->dual_coxeter));
  if (shifted.is_zero())
    throw CriticalLevelError("level equals minus the dual Coxeter number " +
                             std::to_string(spec_->lie()->dual_coxeter));
  inv_ = RF(1) / (RF(2) * shifted);
  memo_ = std::make_shared<Memo>();
}

RF SugawaraConfig::sugawara_central() const {
  RF lvl = spec_->params().level;
  RF dim(static_cast<long>(spec_->lie()->dimension));
  RF h(static_cast<long>(spec_->lie()->dual_coxeter));
  return lvl * dim / (lvl + h);
}

RF SugawaraConfig::shifted_central() const { return spec_->params().central - sugawara_central(); }

ModuleSpecPtr SugawaraConfig::virasoro_source() const {
  ParamAssignment p;
  p.level = spec_->params().level;
  p.central = shifted_central();
  return make_module_spec(AlgebraKind::Virasoro, Regime::Quantum, nullptr,
                          spec_->level_structure(), std::move(p), spec_->truncation_degree());
}

ModuleVector sugawara_quadratic(const SugawaraConfig& cfg, int mode, const ModuleVector& v,
                                int extra_margin) {
  require_same_module(cfg, v);
  ModuleVector out(cfg.spec());
  if (v.is_zero()) return out;
  for (const auto& [mono, coeff] : v.terms()) {
    if (extra_margin != 0) {
      out += quadratic_on_monomial(cfg, mode, mono, extra_margin) * coeff;
      continue;
    }
    std::pair<int, PBWMonomial> key{mode, mono};
    {
      std::lock_guard<std::mutex> lock(cfg.memo()->mu);
      auto it = cfg.memo()->results.find(key);
      if (it != cfg.memo()->results.end()) {
        for (const auto& [m, c] : it->second) out.add_term(m, coeff * c);
        continue;
      }
    }
    ModuleVector one = quadratic_on_monomial(cfg, mode, mono, 0);
    {
      std::lock_guard<std::mutex> lock(cfg.memo()->mu);
      cfg.memo()->results.emplace(std::move(key), one.terms());
    }
    out += one * coeff;
  }
  return out;
}

ModuleVector sugawara_mode(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  require_same_module(cfg, v);
  gate_result_degree(v, mode);
  return sugawara_quadratic(cfg, mode, v) * cfg.inverse_prefactor();
}

ModuleVector shifted_mode(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  require_semidirect(cfg, "the shifted Virasoro mode");
  require_same_module(cfg, v);
  gate_result_degree(v, mode);
  return shifted_exact(cfg, mode, v);
}

ModuleVector singular_vector(const SugawaraConfig& cfg) {
  require_semidirect(cfg, "the singular vector");
  if (cfg.spec()->level_structure() != 0)
    throw DomainError("the singular vector lives in the level-structure-0 module");
  return shifted_exact(cfg, -2, ModuleVector::vacuum(cfg.spec()));
}

namespace {

void check_source_monomial(const PBWMonomial& source, const SugawaraConfig& cfg) {
  const int bound = 2 * cfg.spec()->level_structure() - 1;
  const GeneratorSymbol* prev = nullptr;
  for (const GeneratorSymbol& s : source.word) {
    if (!s.is_l() || s.m >= bound)
      throw DomainError("source monomial is not a creation word of the embedded Virasoro module");
    if (prev && symbol_less(s, *prev)) throw DomainError("source monomial is not in canonical order");
    prev = &s;
  }
}

void check_current_monomial(const PBWMonomial& jm, const SugawaraConfig& cfg) {
  const int bound = cfg.spec()->level_structure();
  const GeneratorSymbol* prev = nullptr;
  for (const GeneratorSymbol& s : jm.word) {
    if (!s.is_j() || s.m >= bound)
      throw DomainError("current factor is not a creation word of the current subalgebra");
    if (prev && symbol_less(s, *prev)) throw DomainError("current factor is not in canonical order");
    prev = &s;
  }
}

}  // namespace

ModuleVector embed_virasoro(const PBWMonomial& source, const SugawaraConfig& cfg) {
  require_semidirect(cfg, "the Virasoro embedding");
  check_source_monomial(source, cfg);
  if (source.deg0() > cfg.spec()->truncation_degree())
    throw TruncationError("source monomial exceeds the truncation degree");
  ModuleVector w = ModuleVector::vacuum(cfg.spec());
  for (size_t i = source.word.size(); i-- > 0;) w = shifted_exact(cfg, source.word[i].m, w);
  return w;
}

ModuleVector tensor_iso(const PBWMonomial& jm, const PBWMonomial& vm, const SugawaraConfig& cfg) {
  require_semidirect(cfg, "the tensor factorization");
  check_current_monomial(jm, cfg);
  check_source_monomial(vm, cfg);
  if (jm.deg0() + vm.deg0() > cfg.spec()->truncation_degree())
    throw TruncationError("factor pair exceeds the truncation degree");
  ModuleVector w = ModuleVector::vacuum(cfg.spec());
  for (size_t i = vm.word.size(); i-- > 0;) w = shifted_exact(cfg, vm.word[i].m, w);
  for (size_t i = jm.word.size(); i-- > 0;) w = apply_generator_exact(jm.word[i], w);
  return w;
}

bool tensor_iso_peel_less(const VacuumModuleSpec& spec, const PBWMonomial& a, const PBWMonomial& b) {
  int wa = a.weight(spec), wb = b.weight(spec);
  if (wa != wb) return wa < wb;
  int la = static_cast<int>(a.word.size()) - a.j_count();
  int lb = static_cast<int>(b.word.size()) - b.j_count();
  if (la != lb) return la < lb;
  if (a.j_count() != b.j_count()) return a.j_count() < b.j_count();
  return MonomialOrder{}(a, b);
}

std::pair<PBWMonomial, PBWMonomial> split_blocks(const PBWMonomial& m) {
  PBWMonomial jm, vm;
  for (const GeneratorSymbol& s : m.word) (s.is_j() ? jm : vm).word.push_back(s);
  return {std::move(jm), std::move(vm)};
}

std::vector<TensorTerm> tensor_iso_inverse(const ModuleVector& v, const SugawaraConfig& cfg) {
  require_semidirect(cfg, "the tensor factorization");
  require_same_module(cfg, v);
  std::vector<TensorTerm> out;
  ModuleVector rem = v;
  while (!rem.is_zero()) {
    auto best = rem.terms().begin();
    for (auto it = std::next(best); it != rem.terms().end(); ++it)
      if (tensor_iso_peel_less(*cfg.spec(), best->first, it->first)) best = it;
    PBWMonomial lead = best->first;
    RF coeff = best->second;
    auto [jm, vm] = split_blocks(lead);
    rem -= tensor_iso(jm, vm, cfg) * coeff;
    if (!rem.coefficient(lead).is_zero())
      throw Error("tensor factorization failed to peel its leading term");
    out.push_back({std::move(jm), std::move(vm), std::move(coeff)});
  }
  std::sort(out.begin(), out.end(), [](const TensorTerm& x, const TensorTerm& y) {
    MonomialOrder lt;
    if (lt(x.jm, y.jm)) return true;
    if (lt(y.jm, x.jm)) return false;
    return lt(x.vm, y.vm);
  });
  return out;
}

}  // namespace vacmod
