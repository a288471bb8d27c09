// Rees rescalings, the critical-level degeneration, the infinite-level
// (classical) degeneration, and the Poisson structure of the classical
// modules. Every limit is a Laurent-coefficient extraction from exact
// symbolic matrix entries.

#include "vacmod/limits.hpp"

#include <algorithm>
#include <cstdlib>

namespace vacmod {

namespace {

GeneratorSymbol J(int a, int m) { return GeneratorSymbol::make_j(a, m); }
GeneratorSymbol L(int m) { return GeneratorSymbol::make_l(m); }

RF var(Param p) { return RF::variable(p); }

std::string sym_text(const VacuumModuleSpec& spec, const GeneratorSymbol& s) {
  if (s.is_l()) return "L[m=" + std::to_string(s.m) + "]";
  return "J[a=" + spec.lie()->basis_labels[static_cast<size_t>(s.a)] +
         ",m=" + std::to_string(s.m) + "]";
}

std::string mismatch(const VacuumModuleSpec& spec, const PBWMonomial& b, const ModuleVector& got,
                     const ModuleVector& want) {
  return "on " + b.text(spec) + ": got " + got.text() + ", expected " + want.text();
}

// (mu_g/12)(l^3 - l) with mu_g = h_dual * dim g.
Rat critical_central(const AlgebraPtr& lie, int l) {
  long mu_g = static_cast<long>(lie->dual_coxeter) * lie->dimension;
  return rat_frac(mu_g * (static_cast<long>(l) * l * l - l), 12);
}

void require_symbolic_level(const ModuleSpecPtr& spec) {
  const RF& central = spec->params().central;
  if (spec->params().level != var(Param::k) || central.num().depends_on(Param::k) ||
      central.den().depends_on(Param::k))
    throw DomainError("limit extraction needs the level to be the symbolic parameter k");
}

void require_fully_symbolic(const ModuleSpecPtr& spec) {
  if (spec->params().level != var(Param::k) || spec->params().central != var(Param::c))
    throw DomainError("rescaling needs the fully symbolic parameter assignment");
}

ModuleVector single(const ModuleSpecPtr& spec, const PBWMonomial& b) {
  ModuleVector v(spec);
  v.add_term(b, RF(1));
  return v;
}

// Valuation of one coefficient at the expansion center.
bool coeff_vanishes_to(const RF& f, Param p, const std::optional<Rat>& center, int order) {
  SeriesExpansion se = rf_series(f, p, center, 0);
  return se.zero || se.leading_exponent >= order;
}

RF laurent_coefficient(const RF& f, Param p, const std::optional<Rat>& center, int exponent) {
  SeriesExpansion probe = rf_series(f, p, center, 0);
  if (probe.zero) return RF(0);
  int idx = exponent - probe.leading_exponent;
  if (idx < 0) return RF(0);
  SeriesExpansion se = rf_series(f, p, center, idx);
  return se.coefficients[static_cast<size_t>(idx)];
}

// Value at k = infinity; DomainError when the function grows there.
RF value_at_infinity(const RF& f) {
  SeriesExpansion se = rf_series(f, Param::k, std::nullopt, 0);
  if (se.zero || se.leading_exponent > 0) return RF(0);
  if (se.leading_exponent < 0)
    throw DomainError("no infinite-level limit: " + f.text() + " grows at k = infinity");
  return se.coefficients[0];
}

}  // namespace

ModuleVector substitute_params(const ModuleVector& v, const std::map<Param, RF>& subst) {
  ModuleVector out(v.module());
  for (const auto& [m, f] : v.terms()) out.add_term(m, rf_eval(f, subst));
  return out;
}

bool vanishes_to_order(const ModuleVector& v, Param p, const std::optional<Rat>& center,
                       int order) {
  for (const auto& [m, f] : v.terms())
    if (!coeff_vanishes_to(f, p, center, order)) return false;
  return true;
}

ModuleVector series_coefficient(const ModuleVector& v, Param p, const std::optional<Rat>& center,
                                int exponent) {
  ModuleVector out(v.module());
  for (const auto& [m, f] : v.terms()) out.add_term(m, laurent_coefficient(f, p, center, exponent));
  return out;
}

RF bar_scale(const PBWMonomial& m) {
  int j = m.j_count();
  int l = static_cast<int>(m.word.size()) - j;
  Poly num(1), den(1);
  if (j > 0) {
    num *= Poly::variable(Param::lambda, j);
    den *= Poly::variable(Param::k, j);
  }
  if (l > 0) {
    num *= Poly::variable(Param::mu, l);
    den *= Poly::variable(Param::c, l);
  }
  return RF(std::move(num), std::move(den));
}

CheckEntry rees_relation_check(const ModuleSpecPtr& spec, const GeneratorSymbol& x,
                               const GeneratorSymbol& y) {
  if (spec->regime() != Regime::Quantum)
    throw DomainError("the rescaled relations compare quantum operators");
  require_fully_symbolic(spec);
  if (!spec->admits(x) || !spec->admits(y))
    throw DomainError("module does not admit the generator pair");

  const RF current_scale = RF(Poly::variable(Param::lambda), Poly::variable(Param::k));
  const RF virasoro_scale = RF(Poly::variable(Param::mu), Poly::variable(Param::c));
  auto scale_of = [&](const GeneratorSymbol& s) { return s.is_j() ? current_scale : virasoro_scale; };
  const RF prefactor = (x.is_l() || y.is_l()) ? virasoro_scale : current_scale;

  // Barred right-hand side: symbol terms (each carrying its own rescaling)
  // plus a central scalar, everything under the single prefactor.
  std::vector<std::pair<GeneratorSymbol, RF>> terms;
  RF central(0);
  if (x.is_j() && y.is_j()) {
    for (const LieTerm& t : spec->lie()->bracket_row(x.a, y.a))
      terms.emplace_back(J(t.index, x.m + y.m), RF(t.coeff) * current_scale);
    if (x.m + y.m == 0 && x.m != 0)
      central = var(Param::lambda) *
                RF(Rat(x.m) * spec->lie()->form_matrix[static_cast<size_t>(x.a)]
                                                      [static_cast<size_t>(y.a)]);
  } else if (x.is_l() && y.is_l()) {
    if (x.m != y.m)
      terms.emplace_back(L(x.m + y.m), RF(static_cast<long>(x.m - y.m)) * virasoro_scale);
    if (x.m + y.m == 0)
      central = var(Param::mu) * RF(rat_frac(static_cast<long>(x.m) * x.m * x.m - x.m, 12));
  } else if (x.is_l()) {
    if (y.m != 0)
      terms.emplace_back(J(y.a, x.m + y.m), RF(static_cast<long>(-y.m)) * current_scale);
  } else {
    if (x.m != 0)
      terms.emplace_back(J(x.a, x.m + y.m), RF(static_cast<long>(x.m)) * current_scale);
  }

  CheckEntry entry;
  entry.lhs = "[bar " + sym_text(*spec, x) + ", bar " + sym_text(*spec, y) + "]";
  entry.rhs = "prefactor times the barred defining relation";
  entry.pass = true;
  const RF lhs_scale = scale_of(x) * scale_of(y);
  for (int w = 0; w <= spec->truncation_degree(); ++w)
    for (const PBWMonomial& b : enumerate_basis(spec, w)) {
      ModuleVector vb = single(spec, b);
      ModuleVector lhs = (apply_generator_exact(x, apply_generator_exact(y, vb)) -
                          apply_generator_exact(y, apply_generator_exact(x, vb))) *
                         lhs_scale;
      ModuleVector rhs = vb * central;
      for (const auto& [u, cu] : terms) rhs += apply_generator_exact(u, vb) * cu;
      rhs *= prefactor;
      if (lhs != rhs) {
        entry.pass = false;
        entry.witness = mismatch(*spec, b, lhs, rhs);
        return entry;
      }
    }
  return entry;
}

ModuleVector scaled_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  if (cfg.spec()->kind() != AlgebraKind::Semidirect)
    throw DomainError("the scaled shifted mode needs the semidirect module");
  RF shift = cfg.level() + RF(static_cast<long>(cfg.lie()->dual_coxeter));
  return apply_generator_exact(L(mode), v) * shift -
         sugawara_quadratic(cfg, mode, v) * RF(rat_frac(1, 2));
}

ModuleVector critical_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  require_symbolic_level(cfg.spec());
  RF at{Rat(-static_cast<long>(cfg.lie()->dual_coxeter))};
  return substitute_params(scaled_shifted(cfg, mode, v), {{Param::k, at}});
}

CheckEntry critical_bracket(const SugawaraConfig& cfg, int l, int m) {
  require_symbolic_level(cfg.spec());
  const ModuleSpecPtr& spec = cfg.spec();
  const Rat center(-static_cast<long>(cfg.lie()->dual_coxeter));
  const Rat central = critical_central(cfg.lie(), l);

  CheckEntry entry;
  entry.lhs = "[S~_" + std::to_string(l) + ", S~_" + std::to_string(m) +
              "] expanded at the critical level";
  entry.rhs = "vanishing constant term, linear term (l-m) S~_{l+m}|crit";
  if (l + m == 0)
    entry.rhs += " + (h dim g/12)(l^3-l) = " + RF(central).text() + " (central from direct expansion)";
  entry.pass = true;

  for (int w = 0; w <= spec->truncation_degree(); ++w)
    for (const PBWMonomial& b : enumerate_basis(spec, w)) {
      ModuleVector vb = single(spec, b);
      ModuleVector com = scaled_shifted(cfg, l, scaled_shifted(cfg, m, vb)) -
                         scaled_shifted(cfg, m, scaled_shifted(cfg, l, vb));
      if (!vanishes_to_order(com, Param::k, center, 1)) {
        entry.pass = false;
        entry.witness = "bracket does not vanish at the critical level " +
                        mismatch(*spec, b, com, ModuleVector(spec));
        return entry;
      }
      ModuleVector lin = series_coefficient(com, Param::k, center, 1);
      ModuleVector target = critical_shifted(cfg, l + m, vb) * RF(static_cast<long>(l - m));
      if (l + m == 0) target += vb * RF(central);
      if (lin != target) {
        entry.pass = false;
        entry.witness = "linear coefficient mismatch " + mismatch(*spec, b, lin, target);
        return entry;
      }
    }
  return entry;
}

CheckEntry critical_invariance(const SugawaraConfig& cfg, int s_mode, int j_mode) {
  const ModuleSpecPtr& spec = cfg.spec();
  CheckEntry entry;
  entry.lhs = "[S~_" + std::to_string(s_mode) + ", J^a_" + std::to_string(j_mode) +
              "] for every basis index a";
  entry.rhs = "0 (exact, hence in particular at the critical level)";
  entry.pass = true;
  for (int a = 0; a < cfg.lie()->dimension; ++a)
    for (int w = 0; w <= spec->truncation_degree(); ++w)
      for (const PBWMonomial& b : enumerate_basis(spec, w)) {
        ModuleVector vb = single(spec, b);
        ModuleVector com =
            scaled_shifted(cfg, s_mode, apply_generator_exact(J(a, j_mode), vb)) -
            apply_generator_exact(J(a, j_mode), scaled_shifted(cfg, s_mode, vb));
        if (!com.is_zero()) {
          entry.pass = false;
          entry.witness = "a = " + std::to_string(a) + ", " +
                          mismatch(*spec, b, com, ModuleVector(spec));
          return entry;
        }
      }
  return entry;
}

CheckEntry critical_conformal(const SugawaraConfig& cfg, int l, int m) {
  require_symbolic_level(cfg.spec());
  const ModuleSpecPtr& spec = cfg.spec();
  const RF at{Rat(-static_cast<long>(cfg.lie()->dual_coxeter))};
  const Rat central = critical_central(cfg.lie(), l);

  CheckEntry entry;
  entry.lhs = "[L_" + std::to_string(l) + ", S~_" + std::to_string(m) + "] at the critical level";
  entry.rhs = "(l-m) S~_{l+m}|crit + (h dim g/12)(l^3-l) delta_{l+m,0}";
  entry.pass = true;
  for (int w = 0; w <= spec->truncation_degree(); ++w)
    for (const PBWMonomial& b : enumerate_basis(spec, w)) {
      ModuleVector vb = single(spec, b);
      ModuleVector com = apply_generator_exact(L(l), scaled_shifted(cfg, m, vb)) -
                         scaled_shifted(cfg, m, apply_generator_exact(L(l), vb));
      com = substitute_params(com, {{Param::k, at}});
      ModuleVector target = critical_shifted(cfg, l + m, vb) * RF(static_cast<long>(l - m));
      if (l + m == 0) target += vb * RF(central);
      if (com != target) {
        entry.pass = false;
        entry.witness = mismatch(*spec, b, com, target);
        return entry;
      }
    }
  return entry;
}

ModuleSpecPtr classical_counterpart(const ModuleSpecPtr& spec) {
  return make_module_spec(spec->kind(), Regime::Classical, spec->lie(), spec->level_structure(),
                          spec->params(), spec->truncation_degree());
}

namespace {

void require_classical_match(const SugawaraConfig& cfg, const ModuleVector& v) {
  if (!v.module() || v.module()->regime() != Regime::Classical ||
      v.module()->fingerprint() != classical_counterpart(cfg.spec())->fingerprint())
    throw AlgebraMismatchError("vector does not live in the classical counterpart module");
}

// Barred matrix entry of an operator column out of basis monomial b, with
// c = k*mu/lambda substituted.
RF barred_entry(const RF& f, const PBWMonomial& from, const PBWMonomial& to, const RF& rescale,
                const std::map<Param, RF>& subst) {
  return rf_eval(f * rescale * bar_scale(from) / bar_scale(to), subst);
}

std::map<Param, RF> infinite_level_substitution() {
  return {{Param::c, RF(Poly::variable(Param::k) * Poly::variable(Param::mu),
                        Poly::variable(Param::lambda))}};
}

}  // namespace

ModuleVector classical_shifted(const SugawaraConfig& cfg, int mode, const ModuleVector& v) {
  require_fully_symbolic(cfg.spec());
  require_classical_match(cfg, v);
  const std::map<Param, RF> subst = infinite_level_substitution();
  // (lambda^2/k) S = scaled_shifted * lambda^2/(k (k+h_dual)).
  const RF rescale =
      RF(Poly::variable(Param::lambda, 2),
         Poly::variable(Param::k) * (Poly::variable(Param::k) +
                                     Poly(static_cast<long>(cfg.lie()->dual_coxeter))));
  ModuleVector out(v.module());
  for (const auto& [b, coeff] : v.terms()) {
    ModuleVector col = scaled_shifted(cfg, mode, single(cfg.spec(), b));
    for (const auto& [to, f] : col.terms())
      out.add_term(to, coeff * value_at_infinity(barred_entry(f, b, to, rescale, subst)));
  }
  return out;
}

CheckEntry classical_bracket(const SugawaraConfig& cfg, int l, int m) {
  require_fully_symbolic(cfg.spec());
  const ModuleSpecPtr& spec = cfg.spec();
  if (spec->kind() != AlgebraKind::Semidirect)
    throw DomainError("the classical degeneration needs the semidirect module");
  ModuleSpecPtr clspec = classical_counterpart(spec);
  const std::map<Param, RF> subst = infinite_level_substitution();
  const RF lam = var(Param::lambda);
  const Poly kp = Poly::variable(Param::k);
  const Poly shiftp = kp + Poly(static_cast<long>(cfg.lie()->dual_coxeter));
  const RF rescale2 = RF(Poly::variable(Param::lambda, 4), kp * kp * shiftp * shiftp);
  const RF k_over_lambda = RF(kp, Poly::variable(Param::lambda));

  CheckEntry entry;
  entry.lhs = "(k/lambda) [S-bar_" + std::to_string(l) + ", S-bar_" + std::to_string(m) +
              "] at k = infinity";
  entry.rhs = "lambda ((l-m) S-bar^inf_{l+m} + (lambda mu/12)(l^3-l) delta_{l+m,0})";
  entry.pass = true;

  // The internal central charge (lambda^2/k)(k dim g/(k+h_dual)) must die in
  // the limit; checked once, not per column.
  RF internal = RF(Poly::variable(Param::lambda, 2) * Poly(static_cast<long>(cfg.lie()->dimension)),
                   shiftp);
  if (!value_at_infinity(internal).is_zero()) {
    entry.pass = false;
    entry.witness = "internal central term " + internal.text() + " survives the limit";
    return entry;
  }

  for (int w = 0; w <= spec->truncation_degree(); ++w)
    for (const PBWMonomial& b : enumerate_basis(spec, w)) {
      ModuleVector vb = single(spec, b);
      ModuleVector com = scaled_shifted(cfg, l, scaled_shifted(cfg, m, vb)) -
                         scaled_shifted(cfg, m, scaled_shifted(cfg, l, vb));

      ModuleVector limit(clspec);
      for (const auto& [to, f] : com.terms()) {
        RF e = barred_entry(f, b, to, rescale2, subst);
        // The commutator itself must vanish in the limit.
        if (!coeff_vanishes_to(e, Param::k, std::nullopt, 1)) {
          entry.pass = false;
          entry.witness = "bracket does not commute in the limit on " + b.text(*spec) + ": " +
                          e.text();
          return entry;
        }
        limit.add_term(to, value_at_infinity(k_over_lambda * e));
      }

      ModuleVector target =
          classical_shifted(cfg, l + m, single(clspec, b)) * (lam * RF(static_cast<long>(l - m)));
      if (l + m == 0)
        target += single(clspec, b) *
                  (lam * lam * var(Param::mu) *
                   RF(rat_frac(static_cast<long>(l) * l * l - l, 12)));
      if (limit != target) {
        entry.pass = false;
        entry.witness = mismatch(*spec, b, limit, target);
        return entry;
      }
    }
  return entry;
}

PoissonBracketTable::PoissonBracketTable(ModuleSpecPtr spec) : spec_(std::move(spec)) {
  if (spec_->regime() != Regime::Classical)
    throw DomainError("the Poisson bracket table lives on classical modules");
}

PoissonBracketTable::GeneratorBracket PoissonBracketTable::generator_bracket(
    const GeneratorSymbol& x, const GeneratorSymbol& y) const {
  if (!spec_->admits(x) || !spec_->admits(y))
    throw DomainError("module does not admit the generator pair");
  GeneratorBracket out;
  out.central = RF(0);
  if (x.is_j() && y.is_j()) {
    for (const LieTerm& t : spec_->lie()->bracket_row(x.a, y.a))
      out.terms.emplace_back(J(t.index, x.m + y.m), RF(t.coeff));
    // The mode factor is forced by antisymmetry of the bracket.
    if (x.m + y.m == 0 && x.m != 0)
      out.central = var(Param::lambda) *
                    RF(Rat(x.m) * spec_->lie()->form_matrix[static_cast<size_t>(x.a)]
                                                           [static_cast<size_t>(y.a)]);
  } else if (x.is_l() && y.is_l()) {
    if (x.m != y.m) out.terms.emplace_back(L(x.m + y.m), RF(static_cast<long>(x.m - y.m)));
    if (x.m + y.m == 0)
      out.central =
          var(Param::mu) * RF(rat_frac(static_cast<long>(x.m) * x.m * x.m - x.m, 12));
  } else if (x.is_l()) {
    if (y.m != 0) out.terms.emplace_back(J(y.a, x.m + y.m), RF(static_cast<long>(-y.m)));
  } else {
    if (x.m != 0) out.terms.emplace_back(J(x.a, x.m + y.m), RF(static_cast<long>(x.m)));
  }
  return out;
}

namespace {

ModuleVector poisson_symbol(const PoissonBracketTable& table, const GeneratorSymbol& z,
                            const PBWMonomial& m);

// One bracket-result symbol applied to a classical monomial: creation symbols
// multiply, annihilation symbols differentiate further.
ModuleVector poisson_apply(const PoissonBracketTable& table, const GeneratorSymbol& u,
                           const PBWMonomial& m) {
  if (table.spec()->is_creation(u)) {
    PBWMonomial p = m;
    p.word.push_back(u);
    std::sort(p.word.begin(), p.word.end(), symbol_less);
    ModuleVector out(table.spec());
    out.add_term(p, RF(1));
    return out;
  }
  return poisson_symbol(table, u, m);
}

// {z, m} for a single symbol against a monomial, by Leibniz over the factors.
ModuleVector poisson_symbol(const PoissonBracketTable& table, const GeneratorSymbol& z,
                            const PBWMonomial& m) {
  ModuleVector out(table.spec());
  for (size_t i = 0; i < m.word.size(); ++i) {
    PBWMonomial rest;
    rest.word.reserve(m.word.size() - 1);
    for (size_t j = 0; j < m.word.size(); ++j)
      if (j != i) rest.word.push_back(m.word[j]);
    PoissonBracketTable::GeneratorBracket gb = table.generator_bracket(z, m.word[i]);
    if (!gb.central.is_zero()) out.add_term(rest, gb.central);
    for (const auto& [u, cu] : gb.terms) out += poisson_apply(table, u, rest) * cu;
  }
  return out;
}

}  // namespace

ModuleVector classical_poisson(const ModuleVector& v, const ModuleVector& w,
                               const PoissonBracketTable& table) {
  const ModuleSpecPtr& spec = table.spec();
  for (const ModuleVector* arg : {&v, &w})
    if (arg->module() && arg->module() != spec &&
        arg->module()->fingerprint() != spec->fingerprint())
      throw AlgebraMismatchError("vector does not live in the table's module");

  ModuleVector out(spec);
  for (const auto& [a, ca] : v.terms())
    for (const auto& [b, cb] : w.terms()) {
      if (a.deg0() + b.deg0() > spec->truncation_degree())
        throw TruncationError("combined degree " + std::to_string(a.deg0() + b.deg0()) +
                              " exceeds the degree-" +
                              std::to_string(spec->truncation_degree()) + " truncation");
      // Leibniz in the first argument; the second unfolds inside
      // poisson_symbol.
      for (size_t i = 0; i < a.word.size(); ++i) {
        PBWMonomial rest;
        rest.word.reserve(a.word.size() - 1);
        for (size_t j = 0; j < a.word.size(); ++j)
          if (j != i) rest.word.push_back(a.word[j]);
        ModuleVector br = poisson_symbol(table, a.word[i], b);
        if (br.is_zero()) continue;
        out += classical_product(single(spec, rest), br) * (ca * cb);
      }
    }
  return out;
}

}  // namespace vacmod
