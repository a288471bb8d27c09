#include "vacmod/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

namespace vacmod {

namespace {

using nlohmann::ordered_json;

GeneratorSymbol J(int a, int m) { return GeneratorSymbol::make_j(a, m); }
GeneratorSymbol L(int m) { return GeneratorSymbol::make_l(m); }

ModuleVector single(const ModuleSpecPtr& spec, const PBWMonomial& b) {
  ModuleVector v(spec);
  v.add_term(b, RF(1));
  return v;
}

std::string sym_text(const VacuumModuleSpec& spec, const GeneratorSymbol& s) {
  return PBWMonomial{{s}}.text(spec);
}

// First coefficient on which `got` and `want` disagree, with the state that
// exposed it. Empty when the vectors are equal.
std::string first_difference(const VacuumModuleSpec& spec, const PBWMonomial& state,
                             const ModuleVector& got, const ModuleVector& want) {
  for (const auto& [m, c] : want.terms())
    if (got.coefficient(m) != c)
      return "on " + state.text(spec) + " at " + m.text(spec) + ": got " +
             got.coefficient(m).text() + ", expected " + c.text();
  for (const auto& [m, c] : got.terms())
    if (want.coefficient(m) != c)
      return "on " + state.text(spec) + " at " + m.text(spec) + ": got " + c.text() +
             ", expected " + want.coefficient(m).text();
  return "";
}

// Worst conformal-degree rise over both application orders of modes p, q.
int mode_bump(int p, int q) { return std::max({0, -p, -q, -p - q}); }

// Basis states whose commutator images stay within the truncation cap for
// the given degree rise.
std::vector<PBWMonomial> admissible_states(const ModuleSpecPtr& spec, int bump) {
  std::vector<PBWMonomial> out;
  for (int w = 0; w <= spec->truncation_degree(); ++w)
    for (PBWMonomial& b : enumerate_basis(spec, w))
      if (b.deg0() + bump <= spec->truncation_degree()) out.push_back(std::move(b));
  return out;
}

// Basis states of weight at most `depth` (used where each state is expensive).
std::vector<PBWMonomial> shallow_states(const ModuleSpecPtr& spec, int depth) {
  std::vector<PBWMonomial> out;
  for (int w = 0; w <= std::min(depth, spec->truncation_degree()); ++w)
    for (PBWMonomial& b : enumerate_basis(spec, w)) out.push_back(std::move(b));
  return out;
}

AlgebraPtr corrupted_copy(const AlgebraPtr& g) {
  SimpleLieAlgebra bad = *g;
  bad.name += "-corrupted";
  for (auto& row : bad.bracket_table)
    if (!row.empty()) {
      row.front().coeff += 1;
      return std::make_shared<const SimpleLieAlgebra>(std::move(bad));
    }
  throw DomainError("cannot corrupt an abelian bracket table");
}

// One unit of suite work; the id is fixed at construction so report order is
// a function of the config alone.
struct Check {
  std::string id;
  std::function<CheckEntry()> body;
};

std::vector<CheckRecord> execute(const std::vector<Check>& checks, int workers) {
  std::vector<CheckRecord> out(checks.size());
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < checks.size(); i = next.fetch_add(1)) {
      CheckRecord r;
      r.id = checks[i].id;
      try {
        CheckEntry e = checks[i].body();
        r.lhs = std::move(e.lhs);
        r.rhs = std::move(e.rhs);
        r.pass = e.pass;
        r.witness = std::move(e.witness);
      } catch (const std::exception& e) {
        r.pass = false;
        r.witness = std::string("unexpected error: ") + e.what();
        if (r.lhs.empty()) r.lhs = "check body";
        if (r.rhs.empty()) r.rhs = "runs to completion";
      }
      out[i] = std::move(r);
    }
  };
  std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                                        std::max<std::size_t>(checks.size(), 1));
  if (w <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

// Shared construction context for the suite builders.
struct SuiteContext {
  SuiteConfig cfg;
  AlgebraPtr algebra;
  ParamAssignment params;

  ModuleSpecPtr spec(AlgebraKind kind) const {
    return make_module_spec(kind, Regime::Quantum,
                            kind == AlgebraKind::Virasoro ? nullptr : algebra,
                            cfg.level_structure, params, cfg.truncation_degree);
  }
  // Mode cap for sweeps whose cost grows quickly with the mode range.
  int tight_range() const { return std::min(cfg.mode_range, 2); }
};

// ---- lie suite --------------------------------------------------------------

std::vector<Check> lie_checks(const SuiteContext& ctx) {
  AlgebraPtr g = ctx.algebra;
  auto basis = [g](int a) { return LieVector::basis_element(g, a); };

  std::vector<Check> out;
  out.push_back({"lie.antisymmetry", [g, basis] {
    CheckEntry e;
    e.lhs = "[x_a, x_b] + [x_b, x_a] over all basis pairs of " + g->name;
    e.rhs = "0";
    e.pass = true;
    for (int a = 0; a < g->dimension && e.pass; ++a)
      for (int b = 0; b < g->dimension; ++b) {
        LieVector s = bracket(basis(a), basis(b)) + bracket(basis(b), basis(a));
        if (!s.is_zero()) {
          e.pass = false;
          e.witness = "a = " + g->basis_labels[a] + ", b = " + g->basis_labels[b] +
                      ": sum = " + s.text();
          break;
        }
      }
    return e;
  }});

  out.push_back({"lie.jacobi", [g, basis] {
    CheckEntry e;
    e.lhs = "[[x_a, x_b], x_c] + [[x_b, x_c], x_a] + [[x_c, x_a], x_b] over all basis triples";
    e.rhs = "0";
    e.pass = true;
    for (int a = 0; a < g->dimension && e.pass; ++a)
      for (int b = 0; b < g->dimension && e.pass; ++b)
        for (int c = 0; c < g->dimension; ++c) {
          LieVector s = bracket(bracket(basis(a), basis(b)), basis(c)) +
                        bracket(bracket(basis(b), basis(c)), basis(a)) +
                        bracket(bracket(basis(c), basis(a)), basis(b));
          if (!s.is_zero()) {
            e.pass = false;
            e.witness = "(a, b, c) = (" + g->basis_labels[a] + ", " + g->basis_labels[b] +
                        ", " + g->basis_labels[c] + "): sum = " + s.text();
            break;
          }
        }
    return e;
  }});

  out.push_back({"lie.form-invariance", [g, basis] {
    CheckEntry e;
    e.lhs = "(x_a, x_b) - (x_b, x_a) and ([x_a, x_b], x_c) - (x_a, [x_b, x_c])";
    e.rhs = "0";
    e.pass = true;
    for (int a = 0; a < g->dimension && e.pass; ++a)
      for (int b = 0; b < g->dimension && e.pass; ++b) {
        if (g->form_matrix[a][b] != g->form_matrix[b][a]) {
          e.pass = false;
          e.witness = "form is not symmetric at (" + g->basis_labels[a] + ", " +
                      g->basis_labels[b] + ")";
          break;
        }
        for (int c = 0; c < g->dimension; ++c) {
          Rat lhs = form(bracket(basis(a), basis(b)), basis(c));
          Rat rhs = form(basis(a), bracket(basis(b), basis(c)));
          if (lhs != rhs) {
            e.pass = false;
            e.witness = "invariance fails at (" + g->basis_labels[a] + ", " +
                        g->basis_labels[b] + ", " + g->basis_labels[c] + ")";
            break;
          }
        }
      }
    return e;
  }});

  out.push_back({"lie.dual-pairing", [g, basis] {
    CheckEntry e;
    e.lhs = "(J^a, x_b) over the stored dual basis";
    e.rhs = "delta_ab";
    e.pass = true;
    std::vector<LieVector> duals = dual_basis(g);
    for (int a = 0; a < g->dimension && e.pass; ++a)
      for (int b = 0; b < g->dimension; ++b) {
        Rat want = a == b ? 1 : 0;
        if (form(duals[static_cast<size_t>(a)], basis(b)) != want) {
          e.pass = false;
          e.witness = "pairing (" + std::to_string(a) + ", " + g->basis_labels[b] +
                      ") differs from " + RF(want).text();
          break;
        }
      }
    return e;
  }});

  out.push_back({"lie.adjoint-casimir", [g, basis] {
    CheckEntry e;
    e.lhs = "sum_a [J^a, [J_a, x_b]] over all basis elements";
    e.rhs = "2 h_dual x_b = " + std::to_string(2 * g->dual_coxeter) + " x_b";
    e.pass = true;
    std::vector<LieVector> duals = dual_basis(g);
    for (int b = 0; b < g->dimension; ++b) {
      LieVector s(g);
      for (int a = 0; a < g->dimension; ++a)
        s += bracket(duals[static_cast<size_t>(a)], bracket(basis(a), basis(b)));
      if (s != basis(b) * Rat(2 * g->dual_coxeter)) {
        e.pass = false;
        e.witness = "x_b = " + g->basis_labels[b] + ": sum = " + s.text();
        break;
      }
    }
    return e;
  }});

  return out;
}

// ---- defining-relation suites -----------------------------------------------

Check current_relations_check(std::string id, const ModuleSpecPtr& spec, int range) {
  return {std::move(id), [spec, range] {
    const AlgebraPtr& g = spec->lie();
    CheckEntry e;
    e.lhs = "[J^a_p, J^b_q] for p, q in [" + std::to_string(-range) + ", " +
            std::to_string(range) + "] on every admissible basis vector";
    e.rhs = "J^{[a,b]}_{p+q} + p (x_a, x_b) delta_{p+q,0} level";
    e.pass = true;
    const RF level = spec->params().level;
    for (int p = -range; p <= range; ++p)
      for (int q = -range; q <= range; ++q) {
        std::vector<PBWMonomial> states = admissible_states(spec, mode_bump(p, q));
        for (int a = 0; a < g->dimension; ++a)
          for (int b = 0; b < g->dimension; ++b) {
            // [x, y] determines [y, x]; check each unordered pair once.
            if (std::tie(p, a) > std::tie(q, b)) continue;
            RF central(0);
            if (p + q == 0) central = level * RF(Rat(p) * g->form_matrix[a][b]);
            const auto& row = g->bracket_row(a, b);
            for (const PBWMonomial& s : states) {
              ModuleVector vs = single(spec, s);
              ModuleVector lhs =
                  apply_generator_exact(J(a, p), apply_generator_exact(J(b, q), vs)) -
                  apply_generator_exact(J(b, q), apply_generator_exact(J(a, p), vs));
              ModuleVector rhs = vs * central;
              for (const LieTerm& t : row)
                rhs += apply_generator_exact(J(t.index, p + q), vs) * RF(t.coeff);
              if (lhs != rhs) {
                e.pass = false;
                e.witness = "a = " + g->basis_labels[a] + ", p = " + std::to_string(p) +
                            ", b = " + g->basis_labels[b] + ", q = " + std::to_string(q) +
                            " " + first_difference(*spec, s, lhs, rhs);
                return e;
              }
            }
          }
      }
    return e;
  }};
}

Check virasoro_relations_check(std::string id, const ModuleSpecPtr& spec, int range) {
  return {std::move(id), [spec, range] {
    CheckEntry e;
    e.lhs = "[L_p, L_q] for p, q in [" + std::to_string(-range) + ", " +
            std::to_string(range) + "] on every admissible basis vector";
    e.rhs = "(p-q) L_{p+q} + (central/12)(p^3-p) delta_{p+q,0}";
    e.pass = true;
    const RF cc = spec->params().central;
    for (int p = -range; p <= range; ++p)
      for (int q = p; q <= range; ++q) {
        std::vector<PBWMonomial> states = admissible_states(spec, mode_bump(p, q));
        RF central(0);
        if (p + q == 0)
          central = cc * RF(rat_frac(static_cast<long>(p) * p * p - p, 12));
        for (const PBWMonomial& s : states) {
          ModuleVector vs = single(spec, s);
          ModuleVector lhs = apply_generator_exact(L(p), apply_generator_exact(L(q), vs)) -
                             apply_generator_exact(L(q), apply_generator_exact(L(p), vs));
          ModuleVector rhs = apply_generator_exact(L(p + q), vs) * RF(static_cast<long>(p - q)) +
                             vs * central;
          if (lhs != rhs) {
            e.pass = false;
            e.witness = "p = " + std::to_string(p) + ", q = " + std::to_string(q) + " " +
                        first_difference(*spec, s, lhs, rhs);
            return e;
          }
        }
      }
    return e;
  }};
}

Check mixed_relations_check(std::string id, const ModuleSpecPtr& spec, int range) {
  return {std::move(id), [spec, range] {
    const AlgebraPtr& g = spec->lie();
    CheckEntry e;
    e.lhs = "[L_p, J^a_q] for p, q in [" + std::to_string(-range) + ", " +
            std::to_string(range) + "] on every admissible basis vector";
    e.rhs = "-q J^a_{p+q}";
    e.pass = true;
    for (int p = -range; p <= range; ++p)
      for (int q = -range; q <= range; ++q) {
        std::vector<PBWMonomial> states = admissible_states(spec, mode_bump(p, q));
        for (int a = 0; a < g->dimension; ++a)
          for (const PBWMonomial& s : states) {
            ModuleVector vs = single(spec, s);
            ModuleVector lhs = apply_generator_exact(L(p), apply_generator_exact(J(a, q), vs)) -
                               apply_generator_exact(J(a, q), apply_generator_exact(L(p), vs));
            ModuleVector rhs = apply_generator_exact(J(a, p + q), vs) * RF(static_cast<long>(-q));
            if (lhs != rhs) {
              e.pass = false;
              e.witness = "p = " + std::to_string(p) + ", a = " + g->basis_labels[a] +
                          ", q = " + std::to_string(q) + " " + first_difference(*spec, s, lhs, rhs);
              return e;
            }
          }
      }
    return e;
  }};
}

// ---- sugawara / shifted / singular suites -----------------------------------

std::vector<Check> sugawara_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::KacMoody);
  SugawaraConfig cfg(spec);
  const int range = ctx.cfg.mode_range;
  const int tight = ctx.tight_range();
  const int depth = std::min(spec->truncation_degree(), 2);
  auto ls = [cfg](int m, const ModuleVector& v) {
    return sugawara_quadratic(cfg, m, v) * cfg.inverse_prefactor();
  };

  std::vector<Check> out;
  out.push_back({"sugawara.primary-currents", [spec, cfg, ls, range, tight, depth] {
    const AlgebraPtr& g = cfg.lie();
    CheckEntry e;
    e.lhs = "[L^S_p, J^a_q] for p in [" + std::to_string(-tight) + ", " + std::to_string(tight) +
            "], q in [" + std::to_string(-range) + ", " + std::to_string(range) +
            "] on basis states of weight <= " + std::to_string(depth);
    e.rhs = "-q J^a_{p+q}";
    e.pass = true;
    std::vector<PBWMonomial> states = shallow_states(spec, depth);
    for (int p = -tight; p <= tight; ++p)
      for (int q = -range; q <= range; ++q)
        for (int a = 0; a < g->dimension; ++a)
          for (const PBWMonomial& s : states) {
            ModuleVector vs = single(spec, s);
            ModuleVector lhs = ls(p, apply_generator_exact(J(a, q), vs)) -
                               apply_generator_exact(J(a, q), ls(p, vs));
            ModuleVector rhs = apply_generator_exact(J(a, p + q), vs) * RF(static_cast<long>(-q));
            if (lhs != rhs) {
              e.pass = false;
              e.witness = "p = " + std::to_string(p) + ", a = " + g->basis_labels[a] +
                          ", q = " + std::to_string(q) + " " + first_difference(*spec, s, lhs, rhs);
              return e;
            }
          }
    return e;
  }});

  out.push_back({"sugawara.internal-virasoro", [spec, cfg, ls, tight, depth] {
    CheckEntry e;
    e.lhs = "[L^S_p, L^S_q] for p, q in [" + std::to_string(-tight) + ", " +
            std::to_string(tight) + "] on basis states of weight <= " + std::to_string(depth);
    e.rhs = "(p-q) L^S_{p+q} + (c(k)/12)(p^3-p) delta_{p+q,0}, c(k) = " +
            cfg.sugawara_central().text();
    e.pass = true;
    const RF ck = cfg.sugawara_central();
    std::vector<PBWMonomial> states = shallow_states(spec, depth);
    for (int p = -tight; p <= tight; ++p)
      for (int q = p; q <= tight; ++q)
        for (const PBWMonomial& s : states) {
          ModuleVector vs = single(spec, s);
          ModuleVector lhs = ls(p, ls(q, vs)) - ls(q, ls(p, vs));
          ModuleVector rhs = ls(p + q, vs) * RF(static_cast<long>(p - q));
          if (p + q == 0)
            rhs += vs * (ck * RF(rat_frac(static_cast<long>(p) * p * p - p, 12)));
          if (lhs != rhs) {
            e.pass = false;
            e.witness = "p = " + std::to_string(p) + ", q = " + std::to_string(q) + " " +
                        first_difference(*spec, s, lhs, rhs);
            return e;
          }
        }
    return e;
  }});

  out.push_back({"sugawara.vacuum-thresholds", [spec, ls, range] {
    const int n = spec->level_structure();
    CheckEntry e;
    e.lhs = "L^S_m vac for m around the annihilation threshold 2n-1 = " +
            std::to_string(2 * n - 1);
    e.rhs = "0 exactly when m >= 2n-1";
    e.pass = true;
    ModuleVector vac = ModuleVector::vacuum(spec);
    for (int m = 2 * n - 1 - std::max(range, 2); m <= 2 * n - 1 + range; ++m) {
      bool want_zero = m >= 2 * n - 1;
      if (ls(m, vac).is_zero() != want_zero) {
        e.pass = false;
        e.witness = "m = " + std::to_string(m) + ": L^S_m vac is " +
                    (want_zero ? "nonzero" : "zero");
        return e;
      }
    }
    return e;
  }});

  return out;
}

std::vector<Check> shifted_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::Semidirect);
  SugawaraConfig cfg(spec);
  const int range = ctx.cfg.mode_range;
  const int tight = ctx.tight_range();
  const int depth = std::min(spec->truncation_degree(), 2);
  auto sh = [cfg](int m, const ModuleVector& v) {
    return apply_generator_exact(L(m), v) - sugawara_quadratic(cfg, m, v) * cfg.inverse_prefactor();
  };

  std::vector<Check> out;
  out.push_back({"shifted.virasoro-closure", [spec, cfg, sh, tight, depth] {
    CheckEntry e;
    e.lhs = "[S_p, S_q] for p, q in [" + std::to_string(-tight) + ", " + std::to_string(tight) +
            "] on basis states of weight <= " + std::to_string(depth);
    e.rhs = "(p-q) S_{p+q} + (c_k/12)(p^3-p) delta_{p+q,0}, c_k = " +
            cfg.shifted_central().text();
    e.pass = true;
    const RF ck = cfg.shifted_central();
    std::vector<PBWMonomial> states = shallow_states(spec, depth);
    for (int p = -tight; p <= tight; ++p)
      for (int q = p; q <= tight; ++q)
        for (const PBWMonomial& s : states) {
          ModuleVector vs = single(spec, s);
          ModuleVector lhs = sh(p, sh(q, vs)) - sh(q, sh(p, vs));
          ModuleVector rhs = sh(p + q, vs) * RF(static_cast<long>(p - q));
          if (p + q == 0)
            rhs += vs * (ck * RF(rat_frac(static_cast<long>(p) * p * p - p, 12)));
          if (lhs != rhs) {
            e.pass = false;
            e.witness = "p = " + std::to_string(p) + ", q = " + std::to_string(q) + " " +
                        first_difference(*spec, s, lhs, rhs);
            return e;
          }
        }
    return e;
  }});

  out.push_back({"shifted.current-invariance", [spec, cfg, sh, range, tight, depth] {
    const AlgebraPtr& g = cfg.lie();
    CheckEntry e;
    e.lhs = "[S_m, J^a_q] for m in [" + std::to_string(-tight) + ", " + std::to_string(tight) +
            "], q in [" + std::to_string(-range) + ", " + std::to_string(range) +
            "] on basis states of weight <= " + std::to_string(depth);
    e.rhs = "0";
    e.pass = true;
    std::vector<PBWMonomial> states = shallow_states(spec, depth);
    for (int m = -tight; m <= tight; ++m)
      for (int q = -range; q <= range; ++q)
        for (int a = 0; a < g->dimension; ++a)
          for (const PBWMonomial& s : states) {
            ModuleVector vs = single(spec, s);
            ModuleVector com = sh(m, apply_generator_exact(J(a, q), vs)) -
                               apply_generator_exact(J(a, q), sh(m, vs));
            if (!com.is_zero()) {
              e.pass = false;
              e.witness = "m = " + std::to_string(m) + ", a = " + g->basis_labels[a] +
                          ", q = " + std::to_string(q) + " " +
                          first_difference(*spec, s, com, ModuleVector(spec));
              return e;
            }
          }
    return e;
  }});

  return out;
}

std::vector<Check> singular_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::Semidirect);
  SugawaraConfig cfg(spec);
  const int top = std::max(ctx.cfg.mode_range, 4);

  std::vector<Check> out;
  out.push_back({"singular.exists", [spec, cfg] {
    CheckEntry e;
    e.lhs = "S_{-2} vac";
    e.rhs = "a nonzero degree-2 vector, equal to the tensor-factor image of L_{-2}";
    e.pass = true;
    ModuleVector s = singular_vector(cfg);
    ModuleVector via_iso = tensor_iso(PBWMonomial{}, PBWMonomial{{L(-2)}}, cfg);
    if (s.is_zero() || s.degree() != std::optional<int>(2)) {
      e.pass = false;
      e.witness = "vector = " + s.text();
    } else if (s != via_iso) {
      e.pass = false;
      e.witness = "tensor-factor image differs: " + via_iso.text();
    }
    return e;
  }});

  out.push_back({"singular.current-primitive", [spec, cfg, top] {
    const AlgebraPtr& g = cfg.lie();
    CheckEntry e;
    e.lhs = "J^a_m (S_{-2} vac) for every basis a and m in [0, " + std::to_string(top) + "]";
    e.rhs = "0";
    e.pass = true;
    ModuleVector s = singular_vector(cfg);
    for (int a = 0; a < g->dimension; ++a)
      for (int m = 0; m <= top; ++m) {
        ModuleVector img = apply_generator_exact(J(a, m), s);
        if (!img.is_zero()) {
          e.pass = false;
          e.witness = "a = " + g->basis_labels[a] + ", m = " + std::to_string(m) +
                      ": image = " + img.text();
          return e;
        }
      }
    return e;
  }});

  return out;
}

// ---- tensor-iso suite ---------------------------------------------------------

std::vector<Check> tensor_iso_checks(const SuiteContext& ctx) {
  ModuleSpecPtr sd = ctx.spec(AlgebraKind::Semidirect);
  SugawaraConfig cfg(sd);
  ModuleSpecPtr km = ctx.spec(AlgebraKind::KacMoody);
  ModuleSpecPtr src = cfg.virasoro_source();
  const int cap = sd->truncation_degree();

  std::vector<Check> out;
  out.push_back({"tensor-iso.graded-dimensions", [sd, km, src, cap] {
    CheckEntry e;
    e.lhs = "dim_d of the semidirect module for d <= " + std::to_string(cap);
    e.rhs = "sum_{i+j=d} dim_i(current factor) dim_j(Virasoro factor)";
    e.pass = true;
    for (int d = 0; d <= cap; ++d) {
      std::size_t got = enumerate_basis(sd, d).size();
      std::size_t want = 0;
      for (int i = 0; i <= d; ++i)
        want += enumerate_basis(km, i).size() * enumerate_basis(src, d - i).size();
      if (got != want) {
        e.pass = false;
        e.witness = "d = " + std::to_string(d) + ": " + std::to_string(got) +
                    " != " + std::to_string(want);
        return e;
      }
    }
    return e;
  }});

  out.push_back({"tensor-iso.unit-triangular", [sd, km, src, cfg, cap] {
    CheckEntry e;
    e.lhs = "tensor_iso(bj, bv) over all factor pairs of weight <= " + std::to_string(cap);
    e.rhs = "coefficient 1 at the concatenation, all other terms strictly lower in the peel "
            "order (hence change-of-basis determinant 1)";
    e.pass = true;
    for (int dj = 0; dj <= cap; ++dj)
      for (const PBWMonomial& bj : enumerate_basis(km, dj))
        for (int dv = 0; dv + dj <= cap; ++dv)
          for (const PBWMonomial& bv : enumerate_basis(src, dv)) {
            ModuleVector img = tensor_iso(bj, bv, cfg);
            PBWMonomial lead = bj;
            lead.word.insert(lead.word.end(), bv.word.begin(), bv.word.end());
            if (img.coefficient(lead) != RF(1)) {
              e.pass = false;
              e.witness = "leading coefficient " + img.coefficient(lead).text() + " at " +
                          lead.text(*sd);
              return e;
            }
            for (const auto& [m, c] : img.terms())
              if (!(m == lead) && !tensor_iso_peel_less(*sd, m, lead)) {
                e.pass = false;
                e.witness = m.text(*sd) + " does not sit below " + lead.text(*sd) +
                            " in the peel order";
                return e;
              }
          }
    return e;
  }});

  out.push_back({"tensor-iso.inverse-roundtrip", [sd, km, src, cfg, cap] {
    CheckEntry e;
    e.lhs = "tensor_iso_inverse(tensor_iso(bj, bv)) over all factor pairs, and on a dense "
            "combination";
    e.rhs = "the single term (bj, bv, 1), resp. the combination itself";
    e.pass = true;
    for (int dj = 0; dj <= cap; ++dj)
      for (const PBWMonomial& bj : enumerate_basis(km, dj))
        for (int dv = 0; dv + dj <= cap; ++dv)
          for (const PBWMonomial& bv : enumerate_basis(src, dv)) {
            std::vector<TensorTerm> terms = tensor_iso_inverse(tensor_iso(bj, bv, cfg), cfg);
            if (terms.size() != 1 || !(terms[0].jm == bj) || !(terms[0].vm == bv) ||
                terms[0].coeff != RF(1)) {
              e.pass = false;
              e.witness = "pair (" + bj.text(*km) + ", " + bv.text(*src) + ") comes back as " +
                          std::to_string(terms.size()) + " term(s)";
              return e;
            }
          }
    // Dense combination: every semidirect basis monomial of weight <= 3 with
    // a distinct rational coefficient.
    ModuleVector v(sd);
    long j = 1;
    for (int w = 0; w <= std::min(cap, 3); ++w)
      for (const PBWMonomial& b : enumerate_basis(sd, w)) v.add_term(b, RF(rat_frac(j++, 2)));
    ModuleVector back(sd);
    for (const TensorTerm& t : tensor_iso_inverse(v, cfg))
      back += tensor_iso(t.jm, t.vm, cfg) * t.coeff;
    if (back != v) {
      e.pass = false;
      e.witness = "dense combination: reassembled " + back.text() + " from " + v.text();
    }
    return e;
  }});

  return out;
}

// ---- rees suite ---------------------------------------------------------------

// Generator list for rescaled-relation sweeps: every current mode and (when
// admitted) Virasoro mode in [-range, range].
std::vector<GeneratorSymbol> generator_sweep(const ModuleSpecPtr& spec, int range) {
  std::vector<GeneratorSymbol> out;
  if (spec->kind() != AlgebraKind::Virasoro)
    for (int a = 0; a < spec->lie()->dimension; ++a)
      for (int m = -range; m <= range; ++m) out.push_back(J(a, m));
  if (spec->kind() != AlgebraKind::KacMoody)
    for (int m = -range; m <= range; ++m) out.push_back(L(m));
  return out;
}

Check rees_relations_check(std::string id, const ModuleSpecPtr& spec, int range) {
  return {std::move(id), [spec, range] {
    CheckEntry e;
    e.lhs = "[bar x_p, bar y_q] for all generator pairs with modes in [" +
            std::to_string(-range) + ", " + std::to_string(range) + "]";
    e.rhs = "the rescaled defining relation (lambda/k per current pair, mu/c with a Virasoro "
            "mode), exactly";
    e.pass = true;
    std::vector<GeneratorSymbol> gens = generator_sweep(spec, range);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i; j < gens.size(); ++j) {
        CheckEntry one = rees_relation_check(spec, gens[i], gens[j]);
        if (!one.pass) {
          e.pass = false;
          e.witness = one.lhs + ": " + one.witness;
          return e;
        }
      }
    return e;
  }};
}

Check poisson_correspondence_check(const SuiteContext& ctx) {
  ModuleSpecPtr sd = ctx.spec(AlgebraKind::Semidirect);
  const int range = ctx.tight_range();
  return {"rees.poisson-correspondence", [sd, range] {
    ModuleSpecPtr cl = classical_counterpart(sd);
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "k/lambda times the barred quantum commutator on the vacuum, at k = infinity "
            "(c = k mu/lambda), over all generator pairs with modes in [" +
            std::to_string(-range) + ", " + std::to_string(range) + "]";
    e.rhs = "the classical Poisson table entry";
    e.pass = true;
    const RF kk = RF::variable(Param::k);
    const RF lam = RF::variable(Param::lambda);
    const RF mu = RF::variable(Param::mu);
    const std::map<Param, RF> sub = {{Param::c, kk * mu / lam}};
    auto scale_of = [&](const GeneratorSymbol& s) {
      return s.is_j() ? lam / kk : mu / RF::variable(Param::c);
    };
    ModuleVector vac = ModuleVector::vacuum(sd);
    std::vector<GeneratorSymbol> gens = generator_sweep(sd, range);
    for (const GeneratorSymbol& x : gens)
      for (const GeneratorSymbol& y : gens) {
        ModuleVector com = apply_generator_exact(x, apply_generator_exact(y, vac)) -
                           apply_generator_exact(y, apply_generator_exact(x, vac));
        // Normalized barred coefficients, as functions of k.
        std::map<PBWMonomial, RF, MonomialOrder> got;
        for (const auto& [m, f] : com.terms())
          got[m] = rf_eval(f * scale_of(x) * scale_of(y) * kk / (lam * bar_scale(m)), sub);
        // Table side: creation symbols survive on the vacuum, annihilators
        // act as derivations of nothing, the central lands on the vacuum.
        std::map<PBWMonomial, RF, MonomialOrder> want;
        PoissonBracketTable::GeneratorBracket gb = table.generator_bracket(x, y);
        if (!gb.central.is_zero()) want[PBWMonomial{}] = gb.central;
        for (const auto& [u, cu] : gb.terms)
          if (cl->is_creation(u)) {
            auto [it, fresh] = want.emplace(PBWMonomial{{u}}, cu);
            if (!fresh) it->second += cu;
          }
        for (const auto& [m, f] : want)
          if (got.find(m) == got.end()) got.emplace(m, RF(0));
        for (const auto& [m, f] : got) {
          RF diff = f;
          auto it = want.find(m);
          if (it != want.end()) diff = diff - it->second;
          SeriesExpansion series = rf_series(diff, Param::k, std::nullopt, 0);
          if (!series.zero && series.leading_exponent < 1) {
            e.pass = false;
            e.witness = "pair (" + sym_text(*sd, x) + ", " + sym_text(*sd, y) + ") at " +
                        m.text(*cl) + ": normalized coefficient " + f.text() +
                        " does not tend to the table value";
            return e;
          }
        }
      }
    return e;
  }};
}

std::vector<Check> rees_checks(const SuiteContext& ctx) {
  const int range = ctx.tight_range();
  std::vector<Check> out;
  out.push_back(rees_relations_check("rees.current-relations",
                                     ctx.spec(AlgebraKind::KacMoody), range));
  out.push_back(rees_relations_check("rees.virasoro-relations",
                                     ctx.spec(AlgebraKind::Virasoro), range));
  out.push_back(rees_relations_check("rees.semidirect-relations",
                                     ctx.spec(AlgebraKind::Semidirect), range));
  out.push_back(poisson_correspondence_check(ctx));
  return out;
}

// ---- critical / classical suites ----------------------------------------------

std::vector<Check> critical_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::Semidirect);
  SugawaraConfig cfg(spec);
  const int range = ctx.tight_range();

  std::vector<Check> out;
  out.push_back({"critical.shifted-brackets", [cfg, range] {
    CheckEntry e;
    e.lhs = "[(k+h) S_l, (k+h) S_m] expanded at k = -h for l, m in [" + std::to_string(-range) +
            ", " + std::to_string(range) + "]";
    e.rhs = "order-0 term zero; order-1 term (l-m) S~_{l+m} + (h dim g/12)(l^3-l) delta_{l+m,0}";
    e.pass = true;
    for (int l = -range; l <= range; ++l)
      for (int m = l; m <= range; ++m) {
        CheckEntry one = critical_bracket(cfg, l, m);
        if (!one.pass) {
          e.pass = false;
          e.witness = one.lhs + ": " + one.witness;
          return e;
        }
      }
    return e;
  }});

  out.push_back({"critical.current-invariance", [cfg, range] {
    CheckEntry e;
    e.lhs = "[(k+h) S_l, J^a_m] for l, m in [" + std::to_string(-range) + ", " +
            std::to_string(range) + "]";
    e.rhs = "0 exactly (hence at the critical level)";
    e.pass = true;
    for (int l = -range; l <= range; ++l)
      for (int m = -range; m <= range; ++m) {
        CheckEntry one = critical_invariance(cfg, l, m);
        if (!one.pass) {
          e.pass = false;
          e.witness = one.lhs + ": " + one.witness;
          return e;
        }
      }
    return e;
  }});

  out.push_back({"critical.outer-conformal", [cfg, range] {
    CheckEntry e;
    e.lhs = "[L_l, (k+h) S_m] at k = -h for l, m in [" + std::to_string(-range) + ", " +
            std::to_string(range) + "]";
    e.rhs = "(l-m) S~_{l+m} + (h dim g/12)(l^3-l) delta_{l+m,0}";
    e.pass = true;
    for (int l = -range; l <= range; ++l)
      for (int m = -range; m <= range; ++m) {
        CheckEntry one = critical_conformal(cfg, l, m);
        if (!one.pass) {
          e.pass = false;
          e.witness = one.lhs + ": " + one.witness;
          return e;
        }
      }
    return e;
  }});

  return out;
}

std::vector<Check> classical_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::Semidirect);
  SugawaraConfig cfg(spec);
  const int range = ctx.tight_range();

  std::vector<Check> out;
  out.push_back({"classical.shifted-brackets", [cfg, range] {
    CheckEntry e;
    e.lhs = "k/lambda times [bar S_l, bar S_m] at k = infinity (c = k mu/lambda) for l, m in [" +
            std::to_string(-range) + ", " + std::to_string(range) + "]";
    e.rhs = "lambda ((l-m) S^inf_{l+m} + (lambda mu/12)(l^3-l) delta_{l+m,0})";
    e.pass = true;
    for (int l = -range; l <= range; ++l)
      for (int m = l; m <= range; ++m) {
        CheckEntry one = classical_bracket(cfg, l, m);
        if (!one.pass) {
          e.pass = false;
          e.witness = one.lhs + ": " + one.witness;
          return e;
        }
      }
    return e;
  }});

  out.push_back({"classical.symbol-at-lambda-zero", [cfg, range] {
    ModuleSpecPtr cl = classical_counterpart(cfg.spec());
    CheckEntry e;
    e.lhs = "S^inf_m at lambda = 0 on classical states of weight <= 2, m in [" +
            std::to_string(-range) + ", " + std::to_string(range) + "]";
    e.rhs = "a pure current expression on the vacuum, and never a new Virasoro symbol "
            "on any state";
    e.pass = true;
    auto l_count = [](const PBWMonomial& m) {
      return static_cast<int>(m.word.size()) - m.j_count();
    };
    std::vector<PBWMonomial> states = shallow_states(cl, 2);
    for (int m = -range; m <= range; ++m)
      for (const PBWMonomial& s : states) {
        ModuleVector img = substitute_params(classical_shifted(cfg, m, single(cl, s)),
                                             {{Param::lambda, RF(0)}});
        for (const auto& [mono, c] : img.terms())
          if (l_count(mono) > l_count(s)) {
            e.pass = false;
            e.witness = "m = " + std::to_string(m) + " on " + s.text(*cl) +
                        ": term " + mono.text(*cl) + " with coefficient " + c.text() +
                        " gained a Virasoro symbol";
            return e;
          }
      }
    return e;
  }});

  out.push_back({"classical.pole-ordering", [cfg] {
    CheckEntry e;
    e.lhs = "substituting lambda = 0 into (k+h)^2 c_k before the infinite-level rescaling";
    e.rhs = "PoleError (the limits must be taken in order)";
    e.pass = false;
    const RF kk = RF::variable(Param::k);
    const RF shift = kk + RF(static_cast<long>(cfg.lie()->dual_coxeter));
    ModuleVector probe = ModuleVector::vacuum(cfg.spec()) * (shift * shift * cfg.shifted_central());
    ModuleVector pre = substitute_params(
        probe, {{Param::c, kk * RF::variable(Param::mu) / RF::variable(Param::lambda)}});
    try {
      substitute_params(pre, {{Param::lambda, RF(0)}});
      e.witness = "no error raised";
    } catch (const PoleError&) {
      e.pass = true;
    }
    return e;
  }});

  return out;
}

// ---- poisson suite --------------------------------------------------------------

std::vector<Check> poisson_checks(const SuiteContext& ctx) {
  ModuleSpecPtr cl =
      make_module_spec(AlgebraKind::Semidirect, Regime::Classical, ctx.algebra,
                       ctx.cfg.level_structure, ctx.params, ctx.cfg.truncation_degree);
  const int range = ctx.cfg.mode_range;
  const int tight = ctx.tight_range();

  std::vector<Check> out;
  out.push_back({"poisson.table-antisymmetry", [cl, range] {
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "{x, y} + {y, x} over all generator pairs with modes in [" + std::to_string(-range) +
            ", " + std::to_string(range) + "]";
    e.rhs = "0 (terms and central)";
    e.pass = true;
    std::vector<GeneratorSymbol> gens = generator_sweep(cl, range);
    auto flat = [](const PoissonBracketTable::GeneratorBracket& gb) {
      std::map<std::tuple<int, int, int>, RF> out_map;
      for (const auto& [s, c] : gb.terms) {
        auto key = std::tuple(s.is_l() ? 1 : 0, s.a, s.m);
        auto [it, fresh] = out_map.emplace(key, c);
        if (!fresh) it->second += c;
      }
      return out_map;
    };
    for (const GeneratorSymbol& x : gens)
      for (const GeneratorSymbol& y : gens) {
        auto xy = table.generator_bracket(x, y);
        auto yx = table.generator_bracket(y, x);
        auto fx = flat(xy);
        for (const auto& [key, c] : flat(yx)) {
          auto [it, fresh] = fx.emplace(key, c);
          if (!fresh) it->second += c;
        }
        bool ok = xy.central + yx.central == RF(0);
        for (const auto& [key, c] : fx) ok = ok && c.is_zero();
        if (!ok) {
          e.pass = false;
          e.witness = "pair (" + sym_text(*cl, x) + ", " + sym_text(*cl, y) + ")";
          return e;
        }
      }
    return e;
  }});

  out.push_back({"poisson.table-jacobi", [cl, tight] {
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "{x, {y, z}} + {y, {z, x}} + {z, {x, y}} over generator triples with modes in [" +
            std::to_string(-tight) + ", " + std::to_string(tight) + "]";
    e.rhs = "0 (central terms bracket to zero)";
    e.pass = true;
    std::vector<GeneratorSymbol> gens = generator_sweep(cl, tight);
    for (const GeneratorSymbol& x : gens)
      for (const GeneratorSymbol& y : gens)
        for (const GeneratorSymbol& z : gens) {
          std::map<std::tuple<int, int, int>, RF> acc;
          RF central(0);
          auto add = [&](const GeneratorSymbol& outer, const GeneratorSymbol& u,
                         const GeneratorSymbol& v) {
            PoissonBracketTable::GeneratorBracket inner = table.generator_bracket(u, v);
            for (const auto& [s, c] : inner.terms) {
              PoissonBracketTable::GeneratorBracket gb = table.generator_bracket(outer, s);
              for (const auto& [t, d] : gb.terms) {
                auto key = std::tuple(t.is_l() ? 1 : 0, t.a, t.m);
                auto [it, fresh] = acc.emplace(key, c * d);
                if (!fresh) it->second += c * d;
              }
              central += c * gb.central;
            }
          };
          add(x, y, z);
          add(y, z, x);
          add(z, x, y);
          bool ok = central.is_zero();
          for (const auto& [key, c] : acc) ok = ok && c.is_zero();
          if (!ok) {
            e.pass = false;
            e.witness = "triple (" + sym_text(*cl, x) + ", " + sym_text(*cl, y) + ", " +
                        sym_text(*cl, z) + ")";
            return e;
          }
        }
    return e;
  }});

  out.push_back({"poisson.module-antisymmetry", [cl] {
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "{v, w} + {w, v} and {v, v} over basis states of weight <= 2";
    e.rhs = "0";
    e.pass = true;
    std::vector<PBWMonomial> states = shallow_states(cl, 2);
    const int cap = cl->truncation_degree();
    for (const PBWMonomial& b : states)
      for (const PBWMonomial& d : states) {
        if (b.weight(*cl) + d.weight(*cl) > cap) continue;
        ModuleVector v = single(cl, b);
        ModuleVector w = single(cl, d);
        if (!(classical_poisson(v, w, table) + classical_poisson(w, v, table)).is_zero()) {
          e.pass = false;
          e.witness = "pair (" + b.text(*cl) + ", " + d.text(*cl) + ")";
          return e;
        }
        if (b == d && !classical_poisson(v, v, table).is_zero()) {
          e.pass = false;
          e.witness = "self-bracket of " + b.text(*cl);
          return e;
        }
      }
    return e;
  }});

  out.push_back({"poisson.module-leibniz", [cl] {
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "{u, v w} over state triples within the truncation";
    e.rhs = "{u, v} w + v {u, w}";
    e.pass = true;
    std::vector<PBWMonomial> states = shallow_states(cl, 2);
    const int cap = cl->truncation_degree();
    for (const PBWMonomial& bu : states)
      for (const PBWMonomial& bv : states)
        for (const PBWMonomial& bw : states) {
          if (bu.weight(*cl) + bv.weight(*cl) + bw.weight(*cl) > cap) continue;
          ModuleVector u = single(cl, bu), v = single(cl, bv), w = single(cl, bw);
          ModuleVector lhs = classical_poisson(u, classical_product(v, w), table);
          ModuleVector rhs = classical_product(classical_poisson(u, v, table), w) +
                             classical_product(v, classical_poisson(u, w, table));
          if (lhs != rhs) {
            e.pass = false;
            e.witness = "triple (" + bu.text(*cl) + ", " + bv.text(*cl) + ", " + bw.text(*cl) +
                        ") " + first_difference(*cl, bu, lhs, rhs);
            return e;
          }
        }
    return e;
  }});

  out.push_back({"poisson.module-jacobi", [cl] {
    PoissonBracketTable table(cl);
    CheckEntry e;
    e.lhs = "{u, {v, w}} + {v, {w, u}} + {w, {u, v}} over state triples within the truncation";
    e.rhs = "0";
    e.pass = true;
    std::vector<PBWMonomial> states = shallow_states(cl, 2);
    const int cap = cl->truncation_degree();
    for (const PBWMonomial& bu : states)
      for (const PBWMonomial& bv : states)
        for (const PBWMonomial& bw : states) {
          if (bu.weight(*cl) + bv.weight(*cl) + bw.weight(*cl) > cap) continue;
          ModuleVector u = single(cl, bu), v = single(cl, bv), w = single(cl, bw);
          ModuleVector sum = classical_poisson(u, classical_poisson(v, w, table), table) +
                             classical_poisson(v, classical_poisson(w, u, table), table) +
                             classical_poisson(w, classical_poisson(u, v, table), table);
          if (!sum.is_zero()) {
            e.pass = false;
            e.witness = "triple (" + bu.text(*cl) + ", " + bv.text(*cl) + ", " + bw.text(*cl) +
                        "): sum = " + sum.text();
            return e;
          }
        }
    return e;
  }});

  return out;
}

// ---- dimensions suite -------------------------------------------------------------

// Graded dimensions from the Euler products: each current species contributes
// 1/(1-q^w) for every weight w >= 1, each Virasoro species for every w >= 2,
// independently of the level structure.
std::vector<long> generating_function_dims(AlgebraKind kind, int dim_g, int cap) {
  std::vector<long> dp(static_cast<std::size_t>(cap) + 1, 0);
  dp[0] = 1;
  for (int w = 1; w <= cap; ++w) {
    int species = 0;
    if (kind != AlgebraKind::Virasoro) species += dim_g;
    if (kind != AlgebraKind::KacMoody && w >= 2) species += 1;
    for (int rep = 0; rep < species; ++rep)
      for (int i = w; i <= cap; ++i)
        dp[static_cast<std::size_t>(i)] += dp[static_cast<std::size_t>(i - w)];
  }
  return dp;
}

std::vector<Check> dimensions_checks(const SuiteContext& ctx) {
  std::vector<Check> out;
  const int cap = ctx.cfg.truncation_degree;
  for (AlgebraKind kind :
       {AlgebraKind::KacMoody, AlgebraKind::Virasoro, AlgebraKind::Semidirect}) {
    ModuleSpecPtr spec = ctx.spec(kind);
    std::string id = "dimensions." + algebra_kind_name(kind);
    out.push_back({std::move(id), [spec, kind, cap] {
      int dim_g = spec->lie() ? spec->lie()->dimension : 0;
      CheckEntry e;
      e.lhs = "enumerated basis sizes of the " + algebra_kind_name(kind) +
              " module per weight <= " + std::to_string(cap);
      e.rhs = "generating-function coefficients of the corresponding Euler product";
      e.pass = true;
      std::vector<long> dp = generating_function_dims(kind, dim_g, cap);
      for (int w = 0; w <= cap; ++w) {
        long got = static_cast<long>(enumerate_basis(spec, w).size());
        if (got != dp[static_cast<std::size_t>(w)]) {
          e.pass = false;
          e.witness = "weight " + std::to_string(w) + ": " + std::to_string(got) +
                      " != " + std::to_string(dp[static_cast<std::size_t>(w)]);
          return e;
        }
      }
      return e;
    }});
  }

  out.push_back({"dimensions.level-structure-independence", [ctx] {
    CheckEntry e;
    e.lhs = "semidirect basis sizes at level structures n, n+1, n+2";
    e.rhs = "equal per weight";
    e.pass = true;
    const int cap = ctx.cfg.truncation_degree;
    const int n = ctx.cfg.level_structure;
    ModuleSpecPtr base = ctx.spec(AlgebraKind::Semidirect);
    for (int shift = 1; shift <= 2; ++shift) {
      ModuleSpecPtr other = make_module_spec(AlgebraKind::Semidirect, Regime::Quantum,
                                             ctx.algebra, n + shift, ctx.params, cap);
      for (int w = 0; w <= cap; ++w)
        if (enumerate_basis(base, w).size() != enumerate_basis(other, w).size()) {
          e.pass = false;
          e.witness = "weight " + std::to_string(w) + " differs between n = " +
                      std::to_string(n) + " and n = " + std::to_string(n + shift);
          return e;
        }
    }
    return e;
  }});

  return out;
}

// ---- cache round-trip check -------------------------------------------------------

std::vector<Check> cache_checks(const SuiteContext& ctx) {
  ModuleSpecPtr spec = ctx.spec(AlgebraKind::KacMoody);
  std::string path = ctx.cfg.cache_path;
  const int cap = std::min(ctx.cfg.truncation_degree, 3);
  return {{"cache.round-trip", [spec, path, cap] {
    SugawaraConfig cfg(spec);
    CheckEntry e;
    e.lhs = "operator matrices of L^S_m (m in [-1, 1], weight slices <= " + std::to_string(cap) +
            ") stored to and loaded from " + path;
    e.rhs = "identical to recomputation";
    e.pass = true;
    OperatorMatrixCache cache(path);
    const std::string fp = cache_fingerprint(*spec);
    for (int m = -1; m <= 1; ++m)
      for (int d = 0; d <= cap; ++d) {
        const std::string op = "sugawara_mode[" + std::to_string(m) + "]";
        OperatorMatrix want = sugawara_matrix(cfg, m, d);
        std::optional<OperatorMatrix> hit = cache.load(op, d, fp);
        if (!hit) {
          cache.store(op, d, fp, want);
          hit = cache.load(op, d, fp);
        }
        if (!hit || !(*hit == want)) {
          e.pass = false;
          e.witness = op + " at weight " + std::to_string(d) +
                      ": cached matrix differs from recomputation";
          return e;
        }
      }
    return e;
  }}};
}

}  // namespace

// ---- public surface ---------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "lie",  "kac-moody", "virasoro", "semidirect", "sugawara",  "shifted",    "singular",
      "tensor-iso", "rees", "critical", "classical",  "poisson", "dimensions", "all"};
  return names;
}

bool is_suite_name(const std::string& id) {
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), id) != names.end();
}

Param parse_param(const std::string& name) {
  std::optional<Param> p = param_from_name(name);
  if (!p) throw ConfigError("unknown parameter '" + name + "' (expected k, c, lambda, mu)");
  return *p;
}

Rat parse_rational(const std::string& text) {
  try {
    Rat q(text);
    if (q.get_den() == 0) throw ConfigError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ConfigError("'" + text + "' is not a rational number");
  }
}

namespace {

bool needs_symbolic(const std::string& suite) {
  return suite == "rees" || suite == "critical" || suite == "classical" ||
         suite == "poisson" || suite == "all";
}

bool uses_sugawara_normalization(const SuiteConfig& cfg) {
  return cfg.suite == "sugawara" || cfg.suite == "shifted" || cfg.suite == "singular" ||
         cfg.suite == "tensor-iso" || needs_symbolic(cfg.suite) || !cfg.cache_path.empty();
}

std::string joined_suite_names() {
  std::string out;
  for (const std::string& s : suite_names()) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

void validate_config(const SuiteConfig& cfg) {
  if (!is_suite_name(cfg.suite))
    throw ConfigError("unknown suite '" + cfg.suite + "'; expected one of: " +
                      joined_suite_names());
  if (cfg.rank < 2) throw ConfigError("the algebra must be sl<N> with N >= 2");
  if (cfg.level_structure < 0) throw ConfigError("the level structure must be nonnegative");
  if (cfg.truncation_degree < 0) throw ConfigError("the truncation degree must be nonnegative");
  if (cfg.mode_range < 1) throw ConfigError("the mode range must be at least 1");
  if (cfg.workers < 1) throw ConfigError("the worker count must be at least 1");
  report_format(cfg.format);
  if (cfg.suite == "singular" && cfg.level_structure != 0)
    throw ConfigError("the degree-2 singular vector lives in the level-structure-0 module; "
                      "use --level-structure 0");
  if (needs_symbolic(cfg.suite) && !cfg.assignments.empty())
    throw ConfigError("suite '" + cfg.suite + "' expands around the poles k = -h, k = 0, "
                      "c = 0, lambda = 0 and needs fully symbolic parameters; drop --set");
  for (const auto& [p, q] : cfg.assignments)
    if (p == Param::lambda || p == Param::mu)
      throw ConfigError("lambda and mu appear only in the degeneration suites, which need "
                        "them symbolic; drop --set " + std::string(param_name(p)) + "=" +
                        RF(q).text());
  if (uses_sugawara_normalization(cfg)) {
    auto it = cfg.assignments.find(Param::k);
    if (it != cfg.assignments.end() && it->second == Rat(-cfg.rank))
      throw ConfigError("k = " + RF(it->second).text() + " is the critical level of sl" +
                        std::to_string(cfg.rank) +
                        "; the Sugawara normalization 1/(2(k+h)) has a pole there");
  }
}

ParamAssignment params_of(const SuiteConfig& cfg) {
  ParamAssignment params;
  auto k = cfg.assignments.find(Param::k);
  if (k != cfg.assignments.end()) params.level = RF(k->second);
  auto c = cfg.assignments.find(Param::c);
  if (c != cfg.assignments.end()) params.central = RF(c->second);
  return params;
}

VerificationReport run_suite(const SuiteConfig& cfg) {
  validate_config(cfg);
  auto t0 = std::chrono::steady_clock::now();

  SuiteContext ctx{cfg,
                   cfg.negative_control ? corrupted_copy(build_sl(cfg.rank)) : build_sl(cfg.rank),
                   params_of(cfg)};
  const int range = cfg.mode_range;

  std::vector<Check> checks;
  auto append = [&checks](std::vector<Check> more) {
    for (Check& c : more) checks.push_back(std::move(c));
  };
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "lie") append(lie_checks(ctx));
  if (all || cfg.suite == "kac-moody")
    checks.push_back(current_relations_check("kac-moody.current-relations",
                                             ctx.spec(AlgebraKind::KacMoody), range));
  if (all || cfg.suite == "virasoro")
    checks.push_back(virasoro_relations_check("virasoro.relations",
                                              ctx.spec(AlgebraKind::Virasoro), range));
  if (all || cfg.suite == "semidirect") {
    ModuleSpecPtr sd = ctx.spec(AlgebraKind::Semidirect);
    checks.push_back(mixed_relations_check("semidirect.mixed-relation", sd, range));
    checks.push_back(current_relations_check("semidirect.current-relations", sd, range));
    checks.push_back(virasoro_relations_check("semidirect.virasoro-relations", sd, range));
  }
  if (all || cfg.suite == "sugawara") append(sugawara_checks(ctx));
  if (all || cfg.suite == "shifted") append(shifted_checks(ctx));
  if ((all && cfg.level_structure == 0) || cfg.suite == "singular")
    append(singular_checks(ctx));
  if (all || cfg.suite == "tensor-iso") append(tensor_iso_checks(ctx));
  if (all || cfg.suite == "rees") append(rees_checks(ctx));
  if (all || cfg.suite == "critical") append(critical_checks(ctx));
  if (all || cfg.suite == "classical") append(classical_checks(ctx));
  if (all || cfg.suite == "poisson") append(poisson_checks(ctx));
  if (all || cfg.suite == "dimensions") append(dimensions_checks(ctx));
  if (!cfg.cache_path.empty()) append(cache_checks(ctx));

  VerificationReport r;
  r.suite = cfg.suite;
  r.config = cfg;
  r.checks = execute(checks, cfg.workers);
  r.aggregate_pass = true;
  for (const CheckRecord& c : r.checks) r.aggregate_pass = r.aggregate_pass && c.pass;
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ReportFormat report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "text") return ReportFormat::Text;
  throw ConfigError("unknown report format '" + name + "' (expected json or text)");
}

std::string emit_report(const VerificationReport& r, ReportFormat format) {
  if (format == ReportFormat::Text) {
    std::ostringstream os;
    os << "suite " << r.suite << ": sl" << r.config.rank << ", n=" << r.config.level_structure
       << ", D=" << r.config.truncation_degree << ", N=" << r.config.mode_range;
    for (const auto& [p, q] : r.config.assignments)
      os << ", " << param_name(p) << "=" << RF(q).text();
    if (r.config.negative_control) os << ", negative control";
    os << "\n";
    for (const CheckRecord& c : r.checks) {
      os << (c.pass ? "PASS" : "FAIL") << " " << c.id << ": " << c.lhs << " == " << c.rhs
         << "\n";
      if (!c.pass) os << "    witness: " << c.witness << "\n";
    }
    os << "aggregate: " << (r.aggregate_pass ? "PASS" : "FAIL") << " (" << r.checks.size()
       << " checks, " << r.wall_seconds << "s)\n";
    return os.str();
  }

  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["suite"] = r.suite;
  ordered_json c;
  c["algebra"] = "sl" + std::to_string(r.config.rank);
  c["level_structure"] = r.config.level_structure;
  c["truncation_degree"] = r.config.truncation_degree;
  c["mode_range"] = r.config.mode_range;
  ordered_json sets = ordered_json::object();
  for (const auto& [p, q] : r.config.assignments) sets[param_name(p)] = RF(q).text();
  c["assignments"] = sets;
  c["workers"] = r.config.workers;
  c["cache"] = r.config.cache_path;
  c["out"] = r.config.out_path;
  c["format"] = r.config.format;
  c["negative_control"] = r.config.negative_control;
  j["config"] = c;
  ordered_json checks = ordered_json::array();
  for (const CheckRecord& cr : r.checks) {
    ordered_json e;
    e["id"] = cr.id;
    e["lhs"] = cr.lhs;
    e["rhs"] = cr.rhs;
    e["pass"] = cr.pass;
    if (!cr.pass) e["witness"] = cr.witness;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["aggregate_pass"] = r.aggregate_pass;
  j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

VerificationReport parse_report(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    VerificationReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw ConfigError("unsupported report schema version " +
                        std::to_string(r.schema_version));
    r.suite = j.at("suite").get<std::string>();
    const ordered_json& c = j.at("config");
    std::string algebra = c.at("algebra").get<std::string>();
    if (algebra.rfind("sl", 0) != 0)
      throw ConfigError("unsupported algebra '" + algebra + "' in report");
    r.config.suite = r.suite;
    r.config.rank = std::stoi(algebra.substr(2));
    r.config.level_structure = c.at("level_structure").get<int>();
    r.config.truncation_degree = c.at("truncation_degree").get<int>();
    r.config.mode_range = c.at("mode_range").get<int>();
    for (const auto& [name, value] : c.at("assignments").items())
      r.config.assignments[parse_param(name)] = parse_rational(value.get<std::string>());
    r.config.workers = c.at("workers").get<int>();
    r.config.cache_path = c.at("cache").get<std::string>();
    r.config.out_path = c.at("out").get<std::string>();
    r.config.format = c.at("format").get<std::string>();
    r.config.negative_control = c.at("negative_control").get<bool>();
    for (const ordered_json& e : j.at("checks")) {
      CheckRecord cr;
      cr.id = e.at("id").get<std::string>();
      cr.lhs = e.at("lhs").get<std::string>();
      cr.rhs = e.at("rhs").get<std::string>();
      cr.pass = e.at("pass").get<bool>();
      cr.witness = e.value("witness", std::string());
      r.checks.push_back(std::move(cr));
    }
    r.aggregate_pass = j.at("aggregate_pass").get<bool>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report is structurally malformed: ") + e.what());
  }
}

// ---- operator-matrix cache ----------------------------------------------------------

OperatorMatrix sugawara_matrix(const SugawaraConfig& cfg, int mode, int degree) {
  const ModuleSpecPtr& spec = cfg.spec();
  std::vector<PBWMonomial> cols = enumerate_basis(spec, degree);
  std::map<PBWMonomial, int, MonomialOrder> row_index;
  OperatorMatrix out;
  out.cols = static_cast<int>(cols.size());
  for (int j = 0; j < out.cols; ++j) {
    ModuleVector img = sugawara_quadratic(cfg, mode, single(spec, cols[static_cast<size_t>(j)])) *
                       cfg.inverse_prefactor();
    for (const auto& [m, f] : img.terms()) {
      auto [it, fresh] = row_index.try_emplace(m, static_cast<int>(row_index.size()));
      out.entries.emplace_back(it->second, j, f.text());
    }
  }
  out.rows = static_cast<int>(row_index.size());
  return out;
}

std::string cache_fingerprint(const VacuumModuleSpec& spec) {
  return spec.fingerprint() + ";order=pbw-v1";
}

OperatorMatrixCache::OperatorMatrixCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // fresh cache
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CacheInvalidError("cache file " + path_ + " is not valid JSON: " + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw CacheInvalidError("cache file " + path_ + " has an unsupported schema version");
    for (const ordered_json& e : j.at("entries")) {
      Entry entry;
      entry.fingerprint = e.at("fingerprint").get<std::string>();
      entry.matrix.rows = e.at("rows").get<int>();
      entry.matrix.cols = e.at("cols").get<int>();
      for (const ordered_json& t : e.at("data"))
        entry.matrix.entries.emplace_back(t.at(0).get<int>(), t.at(1).get<int>(),
                                          t.at(2).get<std::string>());
      entries_[{e.at("op").get<std::string>(), e.at("degree").get<int>()}] = std::move(entry);
    }
  } catch (const CacheInvalidError&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheInvalidError("cache file " + path_ + " is malformed: " + e.what());
  }
}

std::optional<OperatorMatrix> OperatorMatrixCache::load(const std::string& op_id, int degree,
                                                        const std::string& fingerprint) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find({op_id, degree});
  if (it == entries_.end()) return std::nullopt;
  if (it->second.fingerprint != fingerprint)
    throw CacheInvalidError("cache entry (" + op_id + ", " + std::to_string(degree) +
                            ") was computed under a different module fingerprint; delete " +
                            path_ + " to recompute");
  return it->second.matrix;
}

void OperatorMatrixCache::store(const std::string& op_id, int degree,
                                const std::string& fingerprint, const OperatorMatrix& matrix) {
  std::unique_lock lock(mu_);
  entries_[{op_id, degree}] = Entry{fingerprint, matrix};
  persist();
}

std::size_t OperatorMatrixCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

void OperatorMatrixCache::persist() const {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  ordered_json entries = ordered_json::array();
  for (const auto& [key, entry] : entries_) {
    ordered_json e;
    e["op"] = key.first;
    e["degree"] = key.second;
    e["fingerprint"] = entry.fingerprint;
    e["rows"] = entry.matrix.rows;
    e["cols"] = entry.matrix.cols;
    ordered_json data = ordered_json::array();
    for (const auto& [row, col, text] : entry.matrix.entries)
      data.push_back(ordered_json::array({row, col, text}));
    e["data"] = std::move(data);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw CacheInvalidError("cache path " + path_ + " is not writable");
  out << j.dump(2) << "\n";
}

}  // namespace vacmod
