#pragma once
// Finite-dimensional simple Lie algebra data: basis, structure constants,
// normalized invariant bilinear form, dual basis, dual Coxeter number.
//
// Only the sl_N family is constructed here (matrix units, trace form), but
// SimpleLieAlgebra is a plain data record: any algebra whose constants pass
// validate() can be used by the rest of the engine.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vacmod/errors.hpp"
#include "vacmod/rational.hpp"

namespace vacmod {

class SimpleLieAlgebra;
using AlgebraPtr = std::shared_ptr<const SimpleLieAlgebra>;

// One summand coeff * basis[index] of a sparse algebra element.
struct LieTerm {
  int index;
  Rat coeff;
};

// Element of a fixed algebra, kept as a sparse basis-coefficient map with no
// stored zeros.
class LieVector {
 public:
  LieVector() = default;
  explicit LieVector(AlgebraPtr alg) : alg_(std::move(alg)) {}
  static LieVector basis_element(AlgebraPtr alg, int index);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<int, Rat>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  Rat coefficient(int index) const;

  void add_term(int index, const Rat& q);

  LieVector& operator+=(const LieVector& o);
  LieVector& operator-=(const LieVector& o);
  LieVector& operator*=(const Rat& q);
  friend LieVector operator+(LieVector a, const LieVector& b) { return a += b; }
  friend LieVector operator-(LieVector a, const LieVector& b) { return a -= b; }
  friend LieVector operator*(LieVector a, const Rat& q) { return a *= q; }
  friend LieVector operator*(const Rat& q, LieVector a) { return a *= q; }
  bool operator==(const LieVector& o) const;

  std::string text() const;

 private:
  AlgebraPtr alg_;
  std::map<int, Rat> coeffs_;
};

// Pure-data description of a simple Lie algebra over Q with a fixed ordered
// basis. All downstream symbolic computation reads these tables; nothing else
// about the algebra is consulted.
struct SimpleLieAlgebra {
  std::string name;            // "sl2", "sl3", ...
  int matrix_size = 0;         // N for sl_N (0 for hand-supplied records)
  int dimension = 0;
  int rank = 0;
  int dual_coxeter = 0;
  std::vector<std::string> basis_labels;

  // bracket_row(a, b) lists the nonzero components of [basis[a], basis[b]].
  std::vector<std::vector<LieTerm>> bracket_table;  // dimension^2 rows
  std::vector<std::vector<Rat>> form_matrix;        // (basis[a], basis[b])
  std::vector<std::vector<LieTerm>> dual_coeffs;    // dual basis J_a over basis

  const std::vector<LieTerm>& bracket_row(int a, int b) const {
    return bracket_table[static_cast<size_t>(a * dimension + b)];
  }

  // Deterministic content summary; feeds the operator-matrix cache key.
  std::string fingerprint() const;

  // Checks the structural invariants (antisymmetry, Jacobi, form invariance,
  // adjoint Casimir = 2 h_dual, invertible form). Throws DomainError with the
  // first violated identity.
  void validate() const;
};

// sl_N on the basis: E_ij (i<j, lex), H_1..H_{N-1}, E_ij (i>j, lex), with
// form (x,y) = trace(xy) and dual Coxeter number N. Throws NotSimpleError
// for N < 2.
AlgebraPtr build_sl(int N);

// Bilinear extension of the structure constants / form. All binary operations
// require both arguments over the same algebra (AlgebraMismatchError).
LieVector bracket(const LieVector& x, const LieVector& y);
Rat form(const LieVector& x, const LieVector& y);

// Basis {J_a} with (J^a, J_b) = delta^a_b, as vectors over g.
std::vector<LieVector> dual_basis(const AlgebraPtr& g);

}  // namespace vacmod
