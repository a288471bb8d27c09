#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "vacmod/module.hpp"

using namespace vacmod;

namespace {

GeneratorSymbol J(int a, int m) { return GeneratorSymbol::make_j(a, m); }
GeneratorSymbol L(int m) { return GeneratorSymbol::make_l(m); }

ModuleSpecPtr spec_of(AlgebraKind kind, int n, int cap, int N = 2, Regime regime = Regime::Quantum) {
  AlgebraPtr g = kind == AlgebraKind::Virasoro ? nullptr : build_sl(N);
  return make_module_spec(kind, regime, g, n, ParamAssignment{}, cap);
}

// ---------------------------------------------------------------------------
// Independent fixpoint rewriter. States are formal sums of arbitrary words;
// one step rewrites a single reducible position (an annihilator at the end of
// a word, or an adjacent out-of-order pair). Strategy picks the leftmost or
// rightmost reducible position. Relations are wired up here from scratch.

using Word = std::vector<GeneratorSymbol>;

struct WordLess {
  bool operator()(const Word& x, const Word& y) const {
    auto key = [](const GeneratorSymbol& s) { return std::tuple(static_cast<int>(s.kind), s.m, s.a); };
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                        [&](const GeneratorSymbol& s, const GeneratorSymbol& t) {
                                          return key(s) < key(t);
                                        });
  }
};
using State = std::map<Word, RF, WordLess>;

void state_add(State& st, const Word& w, const RF& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = st.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) st.erase(it);
  }
}

// [s, t] written directly from the defining relations.
void oracle_bracket(const VacuumModuleSpec& spec, const GeneratorSymbol& s,
                    const GeneratorSymbol& t, std::vector<std::pair<GeneratorSymbol, RF>>& syms,
                    RF& scalar) {
  syms.clear();
  scalar = RF(0);
  if (s.is_j() && t.is_j()) {
    for (const LieTerm& bt : spec.lie()->bracket_row(s.a, t.a))
      syms.emplace_back(J(bt.index, s.m + t.m), RF(bt.coeff));
    if (s.m + t.m == 0)
      scalar = RF(Rat(s.m) * spec.lie()->form_matrix[static_cast<size_t>(s.a)][static_cast<size_t>(t.a)]) *
               spec.params().level;
  } else if (s.is_l() && t.is_l()) {
    if (s.m != t.m) syms.emplace_back(L(s.m + t.m), RF(Rat(s.m - t.m)));
    if (s.m + t.m == 0) scalar = RF(rat_frac(static_cast<long>(s.m) * s.m * s.m - s.m, 12)) * spec.params().central;
  } else if (s.is_l() && t.is_j()) {
    if (t.m != 0) syms.emplace_back(J(t.a, s.m + t.m), RF(Rat(-t.m)));
  } else if (s.is_j() && t.is_l()) {
    if (s.m != 0) syms.emplace_back(J(s.a, s.m + t.m), RF(Rat(s.m)));
  }
}

bool pair_reducible(const VacuumModuleSpec& spec, const GeneratorSymbol& s, const GeneratorSymbol& t) {
  // An annihilator moves right only past creation symbols; adjacent
  // annihilators would otherwise swap back and forth forever. The tail one
  // dies against the vacuum first.
  if (spec.annihilates_vacuum(s)) return !spec.annihilates_vacuum(t);
  if (spec.annihilates_vacuum(t)) return false;
  return symbol_less(t, s);
}

// -1 when the word is fully canonical.
int find_reducible(const VacuumModuleSpec& spec, const Word& w, bool leftmost) {
  int found = -1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    bool red = (i + 1 == static_cast<int>(w.size()))
                   ? spec.annihilates_vacuum(w[static_cast<size_t>(i)])
                   : pair_reducible(spec, w[static_cast<size_t>(i)], w[static_cast<size_t>(i + 1)]);
    if (!red) continue;
    if (leftmost) return i;
    found = i;
  }
  return found;
}

ModuleVector oracle_normal_order(const Word& start, const ModuleSpecPtr& spec, bool leftmost) {
  State pending;
  state_add(pending, start, RF(1));
  ModuleVector done(spec);
  std::vector<std::pair<GeneratorSymbol, RF>> syms;
  RF scalar;
  long steps = 0;
  while (!pending.empty()) {
    REQUIRE(++steps < 200000);
    auto it = pending.begin();
    Word w = it->first;
    RF coeff = it->second;
    pending.erase(it);
    int i = find_reducible(*spec, w, leftmost);
    if (i < 0) {
      done.add_term(PBWMonomial{w}, coeff);
      continue;
    }
    if (i + 1 == static_cast<int>(w.size())) continue;  // annihilates the vacuum
    GeneratorSymbol s = w[static_cast<size_t>(i)], t = w[static_cast<size_t>(i + 1)];
    Word swapped = w;
    std::swap(swapped[static_cast<size_t>(i)], swapped[static_cast<size_t>(i + 1)]);
    state_add(pending, swapped, coeff);
    oracle_bracket(*spec, s, t, syms, scalar);
    Word shorter = w;
    shorter.erase(shorter.begin() + i, shorter.begin() + i + 2);
    for (const auto& [bs, bc] : syms) {
      Word merged = shorter;
      merged.insert(merged.begin() + i, bs);
      state_add(pending, merged, coeff * bc);
    }
    if (!scalar.is_zero()) state_add(pending, shorter, coeff * scalar);
  }
  return done;
}

// Coefficients of prod_{j>=1}(1-q^j)^{-eJ} * prod_{j>=2}(1-q^j)^{-eL}.
std::vector<long> graded_dims(int eJ, int eL, int deg) {
  std::vector<long> dp(static_cast<size_t>(deg) + 1, 0);
  dp[0] = 1;
  for (int j = 1; j <= deg; ++j) {
    int reps = eJ + (j >= 2 ? eL : 0);
    for (int r = 0; r < reps; ++r)
      for (int d = j; d <= deg; ++d) dp[static_cast<size_t>(d)] += dp[static_cast<size_t>(d - j)];
  }
  return dp;
}

Word random_word(std::mt19937& rng, AlgebraKind kind, int dim, size_t maxlen) {
  std::uniform_int_distribution<size_t> len(1, maxlen);
  std::uniform_int_distribution<int> jmode(-3, 3), lmode(-4, 4), idx(0, dim - 1), coin(0, 1);
  Word w(len(rng));
  for (GeneratorSymbol& s : w) {
    bool use_l = kind == AlgebraKind::Virasoro || (kind == AlgebraKind::Semidirect && coin(rng));
    s = use_l ? L(lmode(rng)) : J(idx(rng), jmode(rng));
  }
  return w;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("pinned normal-ordering examples") {
  ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, 0, 8);
  RF k = RF::variable(Param::k), c = RF::variable(Param::c);

  // E_1 F_{-1} vac = k vac
  ModuleVector v1 = normal_order({J(0, 1), J(2, -1)}, sd);
  CHECK(v1 == ModuleVector::vacuum(sd) * k);

  // L_1 L_{-2} vac = 0
  CHECK(normal_order({L(1), L(-2)}, sd).is_zero());

  // L_2 L_{-2} vac = (c/2) vac
  CHECK(normal_order({L(2), L(-2)}, sd) == ModuleVector::vacuum(sd) * (c / RF(2)));

  // H_0 E_{-1} vac = 2 E_{-1} vac
  ModuleVector e = normal_order({J(0, -1)}, sd);
  CHECK(apply_generator(J(1, 0), e) == e * RF(2));

  CHECK(apply_generator(J(0, 0), ModuleVector::vacuum(sd)).is_zero());
  CHECK(apply_generator(J(0, -1), ModuleVector::vacuum(sd)) == e);
}

TEST_CASE("monomial and vector text forms") {
  ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, 0, 8);
  ModuleVector v = normal_order({J(0, -1), J(2, -1)}, sd);
  CHECK(v.text() == "1 * J[a=E,m=-1] J[a=F,m=-1] |0;n=0>");
  CHECK(ModuleVector::vacuum(sd).text() == "1 * |0;n=0>");
  CHECK(normal_order({L(2), L(-2)}, sd).text() == "(c)/(2) * |0;n=0>");
  CHECK(normal_order({J(0, -1), L(-2)}, sd).text() == "1 * J[a=E,m=-1] L[m=-2] |0;n=0>");
  CHECK(ModuleVector().text() == "0");
}

TEST_CASE("basis enumeration matches generating functions") {
  // Pinned examples at n = 0.
  ModuleSpecPtr km = spec_of(AlgebraKind::KacMoody, 0, 8);
  auto b0 = enumerate_basis(km, 0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].is_vacuum());
  CHECK(enumerate_basis(km, 2).size() == 9);

  ModuleSpecPtr vir = spec_of(AlgebraKind::Virasoro, 0, 8);
  auto v4 = enumerate_basis(vir, 4);
  REQUIRE(v4.size() == 2);
  CHECK(v4[0].word == Word{L(-4)});
  CHECK(v4[1].word == Word{L(-2), L(-2)});

  // Weight-graded dimensions are independent of the level structure and match
  // the generating functions.
  for (int n : {0, 1, 2}) {
    ModuleSpecPtr km2 = spec_of(AlgebraKind::KacMoody, n, 6);
    ModuleSpecPtr km3 = spec_of(AlgebraKind::KacMoody, n, 6, 3);
    ModuleSpecPtr vr = spec_of(AlgebraKind::Virasoro, n, 6);
    ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, n, 6);
    std::vector<long> dim_km2 = graded_dims(3, 0, 6), dim_km3 = graded_dims(8, 0, 6),
                      dim_vr = graded_dims(0, 1, 6), dim_sd = graded_dims(3, 1, 6);
    for (int d = 0; d <= 6; ++d) {
      CHECK(enumerate_basis(km2, d).size() == static_cast<size_t>(dim_km2[static_cast<size_t>(d)]));
      CHECK(enumerate_basis(km3, d).size() == static_cast<size_t>(dim_km3[static_cast<size_t>(d)]));
      CHECK(enumerate_basis(vr, d).size() == static_cast<size_t>(dim_vr[static_cast<size_t>(d)]));
      CHECK(enumerate_basis(sd, d).size() == static_cast<size_t>(dim_sd[static_cast<size_t>(d)]));
    }
  }

  // Monomials come out canonical, of the right weight, deterministically
  // ordered.
  ModuleSpecPtr sd1 = spec_of(AlgebraKind::Semidirect, 1, 5);
  for (int d = 0; d <= 5; ++d) {
    auto basis = enumerate_basis(sd1, d);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(basis[i].is_canonical(*sd1));
      CHECK(basis[i].weight(*sd1) == d);
      if (i > 0) CHECK(MonomialOrder{}(basis[i - 1], basis[i]));
    }
  }
}

TEST_CASE("normal ordering is confluent and matches the fixpoint oracle") {
  std::mt19937 rng(77);
  for (int n : {0, 1}) {
    ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, n, 24);
    ModuleSpecPtr km = spec_of(AlgebraKind::KacMoody, n, 24);
    ModuleSpecPtr vir = spec_of(AlgebraKind::Virasoro, n, 24);
    for (int iter = 0; iter < 40; ++iter) {
      for (const ModuleSpecPtr& spec : {sd, km, vir}) {
        AlgebraKind kind = spec->kind();
        Word w = random_word(rng, kind, 3, 4);
        ModuleVector got = normal_order(w, spec);
        ModuleVector left = oracle_normal_order(w, spec, true);
        ModuleVector right = oracle_normal_order(w, spec, false);
        CHECK(got == left);
        CHECK(left == right);
      }
    }
  }
}

TEST_CASE("generator action shifts the conformal degree exactly") {
  ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, 0, 12);
  for (int d = 0; d <= 3; ++d)
    for (const PBWMonomial& mono : enumerate_basis(sd, d)) {
      ModuleVector v(sd);
      v.add_term(mono, RF(1));
      for (const GeneratorSymbol& gen : {J(0, -2), J(1, 1), L(-1), L(2), J(2, 0)}) {
        ModuleVector image = apply_generator_exact(gen, v);
        if (image.is_zero()) continue;
        REQUIRE(image.degree().has_value());
        CHECK(*image.degree() == d - gen.m);
      }
    }
}

TEST_CASE("defining relations hold as operator identities") {
  std::vector<std::pair<GeneratorSymbol, RF>> syms;
  RF scalar;
  for (int n : {0, 1}) {
    ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, n, 30);
    std::vector<GeneratorSymbol> gens;
    for (int m = -2; m <= 2; ++m) {
      for (int a = 0; a < 3; ++a) gens.push_back(J(a, m));
      gens.push_back(L(m));
    }
    for (int d = 0; d <= 2; ++d)
      for (const PBWMonomial& mono : enumerate_basis(sd, d)) {
        ModuleVector v(sd);
        v.add_term(mono, RF(1));
        for (const GeneratorSymbol& x : gens)
          for (const GeneratorSymbol& y : gens) {
            ModuleVector lhs = apply_generator_exact(x, apply_generator_exact(y, v)) -
                               apply_generator_exact(y, apply_generator_exact(x, v));
            oracle_bracket(*sd, x, y, syms, scalar);
            ModuleVector rhs(sd);
            for (const auto& [bs, bc] : syms) rhs += apply_generator_exact(bs, v) * bc;
            if (!scalar.is_zero()) rhs += v * scalar;
            CHECK(lhs == rhs);
          }
      }
  }
}

TEST_CASE("annihilation thresholds follow the level structure") {
  for (int n : {0, 1, 2}) {
    ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, n, 10);
    ModuleVector vac = ModuleVector::vacuum(sd);
    for (int m = -3; m <= 5; ++m) {
      CHECK(apply_generator_exact(J(0, m), vac).is_zero() == (m >= n));
      CHECK(apply_generator_exact(L(m), vac).is_zero() == (m >= 2 * n - 1));
    }
  }
}

TEST_CASE("truncation gates") {
  ModuleSpecPtr sd = spec_of(AlgebraKind::Semidirect, 0, 4);
  CHECK_THROWS_AS(enumerate_basis(sd, 5), TruncationError);
  CHECK_THROWS_AS(enumerate_basis(sd, -1), TruncationError);
  CHECK_THROWS_AS(normal_order({L(-3), L(-2)}, sd), TruncationError);

  ModuleVector deep = normal_order({L(-4)}, sd);
  CHECK_THROWS_AS(apply_generator(L(-1), deep), TruncationError);
  // The ungated action is exact and total.
  ModuleVector over = apply_generator_exact(L(-1), deep);
  REQUIRE(over.degree().has_value());
  CHECK(*over.degree() == 5);
  // Degree can come back under the cap after a transient excursion.
  CHECK(apply_generator(L(2), over).degree() == 3);
}

TEST_CASE("kind and module mismatches are rejected") {
  ModuleSpecPtr vir = spec_of(AlgebraKind::Virasoro, 0, 6);
  ModuleSpecPtr km = spec_of(AlgebraKind::KacMoody, 0, 6);
  CHECK_THROWS_AS(normal_order({J(0, -1)}, vir), AlgebraMismatchError);
  CHECK_THROWS_AS(normal_order({L(-2)}, km), AlgebraMismatchError);
  CHECK_THROWS_AS(apply_generator(L(-2), ModuleVector::vacuum(km)), AlgebraMismatchError);

  ModuleSpecPtr km3 = spec_of(AlgebraKind::KacMoody, 0, 6, 3);
  ModuleVector a = ModuleVector::vacuum(km);
  CHECK_THROWS_AS(a += ModuleVector::vacuum(km3), AlgebraMismatchError);
}

TEST_CASE("classical product is unital, commutative, associative") {
  ModuleSpecPtr cl = spec_of(AlgebraKind::Semidirect, 0, 8, 2, Regime::Classical);
  ModuleVector vac = ModuleVector::vacuum(cl);

  ModuleVector x(cl), y(cl), z(cl);
  x.add_term(PBWMonomial{{J(0, -1)}}, RF::variable(Param::k));
  x.add_term(PBWMonomial{{L(-2)}}, RF(1));
  y.add_term(PBWMonomial{{J(2, -1)}}, RF(2));
  y.add_term(PBWMonomial{{J(1, -2)}}, RF::variable(Param::c));
  z.add_term(PBWMonomial{{L(-3)}}, RF(Rat(1, 3)));

  CHECK(classical_product(vac, x) == x);
  CHECK(classical_product(x, y) == classical_product(y, x));
  CHECK(classical_product(classical_product(x, y), z) == classical_product(x, classical_product(y, z)));

  // (J_{-1} vac) * (J_{-1} vac) = (J_{-1})^2 vac
  ModuleVector e(cl);
  e.add_term(PBWMonomial{{J(0, -1)}}, RF(1));
  ModuleVector sq = classical_product(e, e);
  REQUIRE(sq.terms().size() == 1);
  CHECK(sq.terms().begin()->first.word == Word{J(0, -1), J(0, -1)});

  ModuleVector deep(cl);
  deep.add_term(PBWMonomial{{L(-5)}}, RF(1));
  CHECK_THROWS_AS(classical_product(deep, deep), TruncationError);

  // Regime cross-checks: no commutative product on quantum modules, no
  // generator action on classical ones.
  ModuleSpecPtr qu = spec_of(AlgebraKind::Semidirect, 0, 8);
  CHECK_THROWS_AS(classical_product(ModuleVector::vacuum(qu), ModuleVector::vacuum(qu)), DomainError);
  CHECK_THROWS_AS(apply_generator(J(0, -1), vac), DomainError);
}

}  // TEST_SUITE
