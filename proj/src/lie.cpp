// sl_N construction from matrix units, plus the generic table-driven bracket,
// form, and dual basis used everywhere downstream.

#include "vacmod/lie.hpp"

#include <sstream>
#include <utility>

namespace vacmod {

namespace {

using Matrix = std::vector<std::vector<Rat>>;

Matrix zero_matrix(int n) {
  return Matrix(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
}

Matrix matrix_mul(const Matrix& a, const Matrix& b) {
  const int n = static_cast<int>(a.size());
  Matrix r = zero_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const Rat& ail = a[static_cast<size_t>(i)][static_cast<size_t>(l)];
      if (ail == 0) continue;
      for (int j = 0; j < n; ++j)
        r[static_cast<size_t>(i)][static_cast<size_t>(j)] += ail * b[static_cast<size_t>(l)][static_cast<size_t>(j)];
    }
  return r;
}

Rat matrix_trace(const Matrix& a) {
  Rat t(0);
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

// Expands a traceless matrix over the fixed sl_N basis. Off-diagonal entries
// are matrix-unit coefficients; the diagonal telescopes through the partial
// sums h_j = a_1 + ... + a_j against H_j = E_jj - E_{j+1,j+1}.
std::vector<Rat> to_basis_coords(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<Rat> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      out.push_back(m[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]);
  Rat partial(0);
  for (int j = 1; j <= n - 1; ++j) {
    partial += m[static_cast<size_t>(j - 1)][static_cast<size_t>(j - 1)];
    out.push_back(partial);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j < i; ++j)
      out.push_back(m[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]);
  return out;
}

// Exact inverse by Gauss-Jordan elimination; throws DomainError when the
// matrix is singular.
Matrix matrix_inverse(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  Matrix work = a;
  Matrix inv = zero_matrix(n);
  for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && work[static_cast<size_t>(pivot)][static_cast<size_t>(col)] == 0) ++pivot;
    if (pivot == n) throw DomainError("invariant form matrix is singular");
    std::swap(work[static_cast<size_t>(pivot)], work[static_cast<size_t>(col)]);
    std::swap(inv[static_cast<size_t>(pivot)], inv[static_cast<size_t>(col)]);
    Rat d = work[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int j = 0; j < n; ++j) {
      work[static_cast<size_t>(col)][static_cast<size_t>(j)] /= d;
      inv[static_cast<size_t>(col)][static_cast<size_t>(j)] /= d;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      Rat f = work[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        work[static_cast<size_t>(row)][static_cast<size_t>(j)] -= f * work[static_cast<size_t>(col)][static_cast<size_t>(j)];
        inv[static_cast<size_t>(row)][static_cast<size_t>(j)] -= f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
  }
  return inv;
}

bool algebras_match(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!a || !b) return true;  // a bare zero vector is compatible with anything
  if (a == b) return true;
  return a->name == b->name && a->dimension == b->dimension;
}

// Dense bracket straight from the tables, for validation loops.
std::vector<Rat> table_bracket(const SimpleLieAlgebra& g, const std::vector<Rat>& x,
                               const std::vector<Rat>& y) {
  std::vector<Rat> r(static_cast<size_t>(g.dimension), Rat(0));
  for (int a = 0; a < g.dimension; ++a) {
    if (x[static_cast<size_t>(a)] == 0) continue;
    for (int b = 0; b < g.dimension; ++b) {
      if (y[static_cast<size_t>(b)] == 0) continue;
      Rat f = x[static_cast<size_t>(a)] * y[static_cast<size_t>(b)];
      for (const LieTerm& t : g.bracket_row(a, b)) r[static_cast<size_t>(t.index)] += f * t.coeff;
    }
  }
  return r;
}

std::vector<Rat> unit_vector(int dim, int idx) {
  std::vector<Rat> v(static_cast<size_t>(dim), Rat(0));
  v[static_cast<size_t>(idx)] = 1;
  return v;
}

}  // namespace

LieVector LieVector::basis_element(AlgebraPtr alg, int index) {
  LieVector v(std::move(alg));
  v.add_term(index, Rat(1));
  return v;
}

Rat LieVector::coefficient(int index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

void LieVector::add_term(int index, const Rat& q) {
  if (q == 0) return;
  auto [it, fresh] = coeffs_.emplace(index, q);
  if (!fresh) {
    it->second += q;
    if (it->second == 0) coeffs_.erase(it);
  }
}

LieVector& LieVector::operator+=(const LieVector& o) {
  if (!algebras_match(alg_, o.alg_)) throw AlgebraMismatchError("cannot add vectors over different algebras");
  if (!alg_) alg_ = o.alg_;
  for (const auto& [i, q] : o.coeffs_) add_term(i, q);
  return *this;
}

LieVector& LieVector::operator-=(const LieVector& o) {
  if (!algebras_match(alg_, o.alg_)) throw AlgebraMismatchError("cannot subtract vectors over different algebras");
  if (!alg_) alg_ = o.alg_;
  for (const auto& [i, q] : o.coeffs_) add_term(i, Rat(-q));
  return *this;
}

LieVector& LieVector::operator*=(const Rat& q) {
  if (q == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [i, c] : coeffs_) c *= q;
  return *this;
}

bool LieVector::operator==(const LieVector& o) const {
  return algebras_match(alg_, o.alg_) && coeffs_ == o.coeffs_;
}

std::string LieVector::text() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, q] : coeffs_) {
    Rat aq = abs(q);
    if (first) {
      if (q < 0) os << "-";
      first = false;
    } else {
      os << (q < 0 ? " - " : " + ");
    }
    if (aq != 1) os << aq.get_str() << "*";
    os << (alg_ ? alg_->basis_labels[static_cast<size_t>(i)] : std::to_string(i));
  }
  return os.str();
}

std::string SimpleLieAlgebra::fingerprint() const {
  std::ostringstream os;
  os << name << ":dim=" << dimension << ":rank=" << rank << ":h=" << dual_coxeter;
  // Structure constants participate so that a tampered table produces a
  // different cache identity even under the same name.
  for (int a = 0; a < dimension; ++a)
    for (int b = 0; b < dimension; ++b)
      for (const LieTerm& t : bracket_row(a, b)) os << ":" << a << "," << b << "," << t.index << "=" << t.coeff.get_str();
  return os.str();
}

void SimpleLieAlgebra::validate() const {
  const int d = dimension;
  std::vector<std::vector<Rat>> basis;
  for (int i = 0; i < d; ++i) basis.push_back(unit_vector(d, i));

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<Rat> ab = table_bracket(*this, basis[static_cast<size_t>(a)], basis[static_cast<size_t>(b)]);
      std::vector<Rat> ba = table_bracket(*this, basis[static_cast<size_t>(b)], basis[static_cast<size_t>(a)]);
      for (int i = 0; i < d; ++i)
        if (ab[static_cast<size_t>(i)] + ba[static_cast<size_t>(i)] != 0)
          throw DomainError("structure constants violate antisymmetry at basis pair (" + basis_labels[static_cast<size_t>(a)] + ", " + basis_labels[static_cast<size_t>(b)] + ")");
    }

  auto form_of = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
    Rat s(0);
    for (int i = 0; i < d; ++i) {
      if (x[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < d; ++j)
        s += x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] * form_matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return s;
  };

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<Rat> ab = table_bracket(*this, basis[static_cast<size_t>(a)], basis[static_cast<size_t>(b)]);
      for (int c = 0; c < d; ++c) {
        std::vector<Rat> bc = table_bracket(*this, basis[static_cast<size_t>(b)], basis[static_cast<size_t>(c)]);
        std::vector<Rat> ca = table_bracket(*this, basis[static_cast<size_t>(c)], basis[static_cast<size_t>(a)]);
        std::vector<Rat> jac = table_bracket(*this, basis[static_cast<size_t>(a)], bc);
        std::vector<Rat> t2 = table_bracket(*this, basis[static_cast<size_t>(b)], ca);
        std::vector<Rat> t3 = table_bracket(*this, basis[static_cast<size_t>(c)], ab);
        for (int i = 0; i < d; ++i)
          if (jac[static_cast<size_t>(i)] + t2[static_cast<size_t>(i)] + t3[static_cast<size_t>(i)] != 0)
            throw DomainError("structure constants violate the Jacobi identity");
        std::vector<Rat> ac = table_bracket(*this, basis[static_cast<size_t>(a)], basis[static_cast<size_t>(c)]);
        if (form_of(ab, basis[static_cast<size_t>(c)]) + form_of(basis[static_cast<size_t>(b)], ac) != 0)
          throw DomainError("bilinear form is not invariant");
      }
    }

  // (form_matrix) * (dual_coeffs as rows)^T must be the identity.
  for (int a = 0; a < d; ++a) {
    std::vector<Rat> dual(static_cast<size_t>(d), Rat(0));
    for (const LieTerm& t : dual_coeffs[static_cast<size_t>(a)]) dual[static_cast<size_t>(t.index)] = t.coeff;
    for (int b = 0; b < d; ++b) {
      Rat pair = form_of(basis[static_cast<size_t>(b)], dual);
      if (pair != Rat(a == b ? 1 : 0)) throw DomainError("dual basis fails the pairing property");
    }
  }

  // Adjoint Casimir: sum_a [J^a, [J_a, x]] = 2 h_dual x. This is the testable
  // form of the normalization of the bilinear form.
  for (int x = 0; x < d; ++x) {
    std::vector<Rat> acc(static_cast<size_t>(d), Rat(0));
    for (int a = 0; a < d; ++a) {
      std::vector<Rat> dual(static_cast<size_t>(d), Rat(0));
      for (const LieTerm& t : dual_coeffs[static_cast<size_t>(a)]) dual[static_cast<size_t>(t.index)] = t.coeff;
      std::vector<Rat> inner = table_bracket(*this, dual, basis[static_cast<size_t>(x)]);
      std::vector<Rat> outer = table_bracket(*this, basis[static_cast<size_t>(a)], inner);
      for (int i = 0; i < d; ++i) acc[static_cast<size_t>(i)] += outer[static_cast<size_t>(i)];
    }
    for (int i = 0; i < d; ++i)
      if (acc[static_cast<size_t>(i)] != Rat(2 * dual_coxeter) * basis[static_cast<size_t>(x)][static_cast<size_t>(i)])
        throw DomainError("adjoint Casimir does not equal 2*h_dual: form normalization is off");
  }
}

AlgebraPtr build_sl(int N) {
  if (N < 2) throw NotSimpleError("sl_" + std::to_string(N) + " is not a simple Lie algebra");

  auto alg = std::make_shared<SimpleLieAlgebra>();
  alg->name = "sl" + std::to_string(N);
  alg->matrix_size = N;
  alg->dimension = N * N - 1;
  alg->rank = N - 1;
  alg->dual_coxeter = N;

  // Basis matrices in the fixed order: E_ij (i<j), H_1..H_{N-1}, E_ij (i>j).
  std::vector<Matrix> mats;
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j) {
      Matrix m = zero_matrix(N);
      m[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = 1;
      mats.push_back(m);
      alg->basis_labels.push_back("E" + std::to_string(i) + std::to_string(j));
    }
  for (int i = 1; i <= N - 1; ++i) {
    Matrix m = zero_matrix(N);
    m[static_cast<size_t>(i - 1)][static_cast<size_t>(i - 1)] = 1;
    m[static_cast<size_t>(i)][static_cast<size_t>(i)] = -1;
    mats.push_back(m);
    alg->basis_labels.push_back("H" + std::to_string(i));
  }
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j < i; ++j) {
      Matrix m = zero_matrix(N);
      m[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = 1;
      mats.push_back(m);
      alg->basis_labels.push_back("E" + std::to_string(i) + std::to_string(j));
    }
  if (N == 2) alg->basis_labels = {"E", "H", "F"};

  const int d = alg->dimension;
  alg->bracket_table.resize(static_cast<size_t>(d * d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Matrix ab = matrix_mul(mats[static_cast<size_t>(a)], mats[static_cast<size_t>(b)]);
      Matrix ba = matrix_mul(mats[static_cast<size_t>(b)], mats[static_cast<size_t>(a)]);
      for (size_t i = 0; i < ab.size(); ++i)
        for (size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
      std::vector<Rat> coords = to_basis_coords(ab);
      std::vector<LieTerm>& row = alg->bracket_table[static_cast<size_t>(a * d + b)];
      for (int i = 0; i < d; ++i)
        if (coords[static_cast<size_t>(i)] != 0) row.push_back({i, coords[static_cast<size_t>(i)]});
    }

  alg->form_matrix.assign(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d), Rat(0)));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Rat t = matrix_trace(matrix_mul(mats[static_cast<size_t>(a)], mats[static_cast<size_t>(b)]));
      alg->form_matrix[static_cast<size_t>(a)][static_cast<size_t>(b)] = t;
      alg->form_matrix[static_cast<size_t>(b)][static_cast<size_t>(a)] = t;
    }

  Matrix inv = matrix_inverse(alg->form_matrix);
  alg->dual_coeffs.resize(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      if (inv[static_cast<size_t>(a)][static_cast<size_t>(i)] != 0)
        alg->dual_coeffs[static_cast<size_t>(a)].push_back({i, inv[static_cast<size_t>(a)][static_cast<size_t>(i)]});

  alg->validate();
  return alg;
}

LieVector bracket(const LieVector& x, const LieVector& y) {
  if (!algebras_match(x.algebra(), y.algebra()))
    throw AlgebraMismatchError("bracket arguments come from different algebras");
  const AlgebraPtr& alg = x.algebra() ? x.algebra() : y.algebra();
  LieVector r(alg);
  if (!alg) return r;
  for (const auto& [a, qa] : x.coefficients())
    for (const auto& [b, qb] : y.coefficients()) {
      Rat f = qa * qb;
      for (const LieTerm& t : alg->bracket_row(a, b)) r.add_term(t.index, f * t.coeff);
    }
  return r;
}

Rat form(const LieVector& x, const LieVector& y) {
  if (!algebras_match(x.algebra(), y.algebra()))
    throw AlgebraMismatchError("form arguments come from different algebras");
  const AlgebraPtr& alg = x.algebra() ? x.algebra() : y.algebra();
  Rat s(0);
  if (!alg) return s;
  for (const auto& [a, qa] : x.coefficients())
    for (const auto& [b, qb] : y.coefficients())
      s += qa * qb * alg->form_matrix[static_cast<size_t>(a)][static_cast<size_t>(b)];
  return s;
}

std::vector<LieVector> dual_basis(const AlgebraPtr& g) {
  std::vector<LieVector> out;
  for (int a = 0; a < g->dimension; ++a) {
    LieVector v(g);
    for (const LieTerm& t : g->dual_coeffs[static_cast<size_t>(a)]) v.add_term(t.index, t.coeff);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vacmod
