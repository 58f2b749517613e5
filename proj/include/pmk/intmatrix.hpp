#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmk/errors.hpp"
#include "pmk/rational.hpp"

namespace pmk {

// Dense matrix over Z with arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

  static IntMatrix identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows) {
    size_t r = rows.size(), c = r ? rows[0].size() : 0;
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw Error("ragged matrix literal");
      for (size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Integer& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Integer& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const IntMatrix& o) const = default;

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
    IntMatrix p(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        const Integer& a = at(i, k);
        if (a == 0) continue;
        for (size_t j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
      }
    return p;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum shape mismatch");
    IntMatrix s = *this;
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error("matrix difference shape mismatch");
    IntMatrix s = *this;
    for (size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
  }

  std::vector<Integer> operator*(const std::vector<Integer>& v) const {
    if (cols_ != v.size()) throw Error("matrix-vector shape mismatch");
    std::vector<Integer> out(rows_, Integer(0));
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
  }

  std::vector<Integer> col(size_t j) const {
    std::vector<Integer> c(rows_);
    for (size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  IntMatrix columns(const std::vector<size_t>& idx) const {
    IntMatrix m(rows_, idx.size());
    for (size_t j = 0; j < idx.size(); ++j)
      for (size_t i = 0; i < rows_; ++i) m.at(i, j) = at(i, idx[j]);
    return m;
  }

  bool is_zero() const {
    for (const Integer& x : data_)
      if (x != 0) return false;
    return true;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() == 0) {
    if (a.rows() != 0 && b.cols() != 0 && a.rows() != b.rows())
      throw Error("hstack row mismatch");
    return b.cols() ? b : IntMatrix(a.rows(), 0);
  }
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw Error("hstack row mismatch");
  IntMatrix m(a.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (size_t j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
  }
  return m;
}

// fraction-free elimination; exact for arbitrary square integer matrices
inline Integer det_bareiss(IntMatrix a) {
  if (a.rows() != a.cols()) throw Error("determinant of non-square matrix");
  size_t n = a.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && a.at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
      a.at(i, k) = 0;
    }
    prev = a.at(k, k);
  }
  return Integer(sign) * a.at(n - 1, n - 1);
}

// U * M * V = D diagonal, d_i >= 0, d_i | d_{i+1}; U, V unimodular with
// tracked inverses so lattice computations never re-invert anything.
struct SmithDecomposition {
  IntMatrix U, D, V, Uinv, Vinv;
  std::vector<Integer> factors;  // positive invariant factors d_1..d_r
  size_t rank() const { return factors.size(); }
};

inline SmithDecomposition smith(const IntMatrix& input) {
  size_t n = input.rows(), m = input.cols();
  SmithDecomposition s;
  s.D = input;
  s.U = IntMatrix::identity(n);
  s.Uinv = IntMatrix::identity(n);
  s.V = IntMatrix::identity(m);
  s.Vinv = IntMatrix::identity(m);
  IntMatrix& D = s.D;

  auto row_add = [&](size_t i, size_t j, const Integer& q) {
    // row_i += q * row_j on D and U; inverse column op on Uinv
    for (size_t c = 0; c < m; ++c) D.at(i, c) += q * D.at(j, c);
    for (size_t c = 0; c < n; ++c) s.U.at(i, c) += q * s.U.at(j, c);
    for (size_t r = 0; r < n; ++r) s.Uinv.at(r, j) -= q * s.Uinv.at(r, i);
  };
  auto col_add = [&](size_t j, size_t i, const Integer& q) {
    // col_j += q * col_i on D and V; inverse row op on Vinv
    for (size_t r = 0; r < n; ++r) D.at(r, j) += q * D.at(r, i);
    for (size_t r = 0; r < m; ++r) s.V.at(r, j) += q * s.V.at(r, i);
    for (size_t c = 0; c < m; ++c) s.Vinv.at(i, c) -= q * s.Vinv.at(j, c);
  };
  auto row_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < m; ++c) std::swap(D.at(i, c), D.at(j, c));
    for (size_t c = 0; c < n; ++c) std::swap(s.U.at(i, c), s.U.at(j, c));
    for (size_t r = 0; r < n; ++r) std::swap(s.Uinv.at(r, i), s.Uinv.at(r, j));
  };
  auto col_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < n; ++r) std::swap(D.at(r, i), D.at(r, j));
    for (size_t r = 0; r < m; ++r) std::swap(s.V.at(r, i), s.V.at(r, j));
    for (size_t c = 0; c < m; ++c) std::swap(s.Vinv.at(i, c), s.Vinv.at(j, c));
  };
  auto row_negate = [&](size_t i) {
    for (size_t c = 0; c < m; ++c) D.at(i, c) = -D.at(i, c);
    for (size_t c = 0; c < n; ++c) s.U.at(i, c) = -s.U.at(i, c);
    for (size_t r = 0; r < n; ++r) s.Uinv.at(r, i) = -s.Uinv.at(r, i);
  };

  size_t t = 0;
  size_t bound = std::min(n, m);
  while (t < bound) {
    // smallest nonzero entry by absolute value, row-major on ties
    size_t pi = n, pj = m;
    Integer best = 0;
    for (size_t i = t; i < n; ++i)
      for (size_t j = t; j < m; ++j) {
        const Integer& x = D.at(i, j);
        if (x == 0) continue;
        Integer ax = abs_int(x);
        if (pi == n || ax < best) {
          best = ax;
          pi = i;
          pj = j;
        }
      }
    if (pi == n) break;
    row_swap(t, pi);
    col_swap(t, pj);
    if (D.at(t, t) < 0) row_negate(t);

    bool dirty = false;
    for (size_t i = t + 1; i < n; ++i) {
      if (D.at(i, t) == 0) continue;
      Integer q = floor_div(D.at(i, t), D.at(t, t));
      if (q != 0) row_add(i, t, -q);
      if (D.at(i, t) != 0) dirty = true;
    }
    for (size_t j = t + 1; j < m; ++j) {
      if (D.at(t, j) == 0) continue;
      Integer q = floor_div(D.at(t, j), D.at(t, t));
      if (q != 0) col_add(j, t, -q);
      if (D.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;

    // pivot must divide everything that remains
    bool fixed = true;
    for (size_t i = t + 1; i < n && fixed; ++i)
      for (size_t j = t + 1; j < m && fixed; ++j)
        if (D.at(i, j) % D.at(t, t) != 0) {
          row_add(t, i, Integer(1));
          fixed = false;
        }
    if (!fixed) continue;
    ++t;
  }
  for (size_t i = 0; i < bound; ++i)
    if (D.at(i, i) != 0) s.factors.push_back(D.at(i, i));
  return s;
}

// basis of { x : M x = 0 }, one column per generator; saturated by construction
inline IntMatrix kernel_basis(const IntMatrix& M) {
  SmithDecomposition s = smith(M);
  std::vector<size_t> idx;
  for (size_t j = s.rank(); j < M.cols(); ++j) idx.push_back(j);
  return s.V.columns(idx);
}

struct FGAbelianGroup {
  size_t rank = 0;
  std::vector<Integer> torsion;  // factors > 1, ascending divisibility

  bool operator==(const FGAbelianGroup&) const = default;
  bool trivial() const { return rank == 0 && torsion.empty(); }

  std::string str() const {
    if (trivial()) return "0";
    std::string out;
    if (rank == 1) out = "Z";
    else if (rank > 1) out = "Z^" + std::to_string(rank);
    for (const Integer& d : torsion) {
      if (!out.empty()) out += " + ";
      out += "Z/" + d.str();
    }
    return out;
  }

  FGAbelianGroup direct_sum(const FGAbelianGroup& o) const {
    std::vector<Integer> all = torsion;
    all.insert(all.end(), o.torsion.begin(), o.torsion.end());
    IntMatrix diag(all.size(), all.size());
    for (size_t i = 0; i < all.size(); ++i) diag.at(i, i) = all[i];
    FGAbelianGroup g;
    g.rank = rank + o.rank;
    g.torsion = smith(diag).factors;
    std::erase(g.torsion, Integer(1));
    return g;
  }
};

// Z^n / column span of M, with a coordinate map for elements of Z^n.
struct Cokernel {
  FGAbelianGroup group;
  std::vector<Integer> moduli;  // per slot: d_i (1 allowed) for i < rank, 0 = free
  IntMatrix U;                  // slot coordinates of w are U * w, reduced per slot

  std::vector<Integer> coords(const std::vector<Integer>& w) const {
    std::vector<Integer> y = U * w;
    for (size_t i = 0; i < y.size(); ++i)
      if (moduli[i] > 0) y[i] = ((y[i] % moduli[i]) + moduli[i]) % moduli[i];
    return y;
  }

  // coordinates in the printed group: free slots first, then torsion > 1
  std::vector<Integer> canonical_coords(const std::vector<Integer>& w) const {
    std::vector<Integer> y = coords(w), out;
    for (size_t i = 0; i < y.size(); ++i)
      if (moduli[i] == 0) out.push_back(y[i]);
    for (size_t i = 0; i < y.size(); ++i)
      if (moduli[i] > 1) out.push_back(y[i]);
    return out;
  }
};

inline Cokernel cokernel(const IntMatrix& M) {
  SmithDecomposition s = smith(M);
  Cokernel c;
  c.U = s.U;
  c.moduli.assign(M.rows(), Integer(0));
  for (size_t i = 0; i < s.factors.size(); ++i) c.moduli[i] = s.factors[i];
  c.group.rank = M.rows() - s.rank();
  for (const Integer& d : s.factors)
    if (d > 1) c.group.torsion.push_back(d);
  return c;
}

// integer solutions of M * X = B, columnwise; nullopt when some column of B
// is outside the lattice spanned by the columns of M
inline std::optional<IntMatrix> solve_columns(const IntMatrix& M, const IntMatrix& B) {
  if (M.rows() != B.rows()) throw Error("solve shape mismatch");
  SmithDecomposition s = smith(M);
  size_t r = s.rank();
  IntMatrix X(M.cols(), B.cols());
  for (size_t j = 0; j < B.cols(); ++j) {
    std::vector<Integer> c = s.U * B.col(j);
    std::vector<Integer> y(M.cols(), Integer(0));
    for (size_t i = 0; i < c.size(); ++i) {
      if (i < r) {
        if (c[i] % s.factors[i] != 0) return std::nullopt;
        y[i] = c[i] / s.factors[i];
      } else if (c[i] != 0) {
        return std::nullopt;
      }
    }
    std::vector<Integer> x = s.V * y;
    for (size_t i = 0; i < x.size(); ++i) X.at(i, j) = x[i];
  }
  return X;
}

// X with K * X = A * K for a full-column-rank basis K of an A-invariant subgroup
inline IntMatrix restrict_to_kernel(const IntMatrix& A, const IntMatrix& K) {
  auto X = solve_columns(K, A * K);
  if (!X) throw NotInvariant("subgroup is not invariant under the endomorphism");
  return *X;
}

// Endomorphism induced on Z^n / im(M) by B, in Smith slot coordinates.
struct InducedEndo {
  Cokernel coker;
  IntMatrix matrix;     // U B U^{-1}, all n slots
  IntMatrix canonical;  // factor-1 slots dropped, torsion rows reduced
};

inline InducedEndo induce_on_cokernel(const IntMatrix& B, const IntMatrix& M) {
  if (B.rows() != B.cols() || B.rows() != M.rows())
    throw Error("induce shape mismatch");
  if (!solve_columns(M, B * M))
    throw NotInvariant("image lattice is not invariant under the endomorphism");
  SmithDecomposition s = smith(M);
  InducedEndo out;
  out.coker.U = s.U;
  out.coker.moduli.assign(M.rows(), Integer(0));
  for (size_t i = 0; i < s.factors.size(); ++i) out.coker.moduli[i] = s.factors[i];
  out.coker.group.rank = M.rows() - s.rank();
  for (const Integer& d : s.factors)
    if (d > 1) out.coker.group.torsion.push_back(d);
  out.matrix = s.U * B * s.Uinv;
  std::vector<size_t> keep;
  for (size_t i = 0; i < out.coker.moduli.size(); ++i)
    if (out.coker.moduli[i] != 1) keep.push_back(i);
  IntMatrix c(keep.size(), keep.size());
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b) {
      Integer v = out.matrix.at(keep[a], keep[b]);
      const Integer& d = out.coker.moduli[keep[a]];
      if (d > 1) v = ((v % d) + d) % d;
      c.at(a, b) = v;
    }
  out.canonical = c;
  return out;
}

// Subgroup-with-relations presentation of a subquotient of Z^n: the subgroup
// spanned by the columns of L, modulo the columns of R (which must lie in it).
struct Subquotient {
  size_t n = 0;
  IntMatrix L;
  std::optional<IntMatrix> R;
};

struct GroupWithElement {
  FGAbelianGroup fixed_quotient;        // coker(1 - X) on the subquotient
  FGAbelianGroup fixed_subgroup;        // ker(1 - X) on the subquotient
  std::vector<Integer> element_coords;  // canonical coords in fixed_quotient
  bool has_element = false;
};

// Kernel and cokernel of (1 - X) acting on L/R, where X is the action in the
// basis given by the columns of L; optionally locates an ambient element's
// class in the cokernel.
inline GroupWithElement group_and_unit(const Subquotient& S, const IntMatrix& X,
                                       const std::optional<std::vector<Integer>>& elem) {
  size_t k = S.L.cols();
  if (X.rows() != k || X.cols() != k) throw Error("endomorphism shape mismatch");
  IntMatrix Y(k, 0);
  if (S.R && S.R->cols() > 0) {
    auto solved = solve_columns(S.L, *S.R);
    if (!solved) throw Inconsistency("relations lie outside the subgroup");
    Y = *solved;
    if (!solve_columns(Y, X * Y))
      throw NotInvariant("relation lattice is not invariant under the endomorphism");
  }
  IntMatrix one_minus = IntMatrix::identity(k) - X;

  GroupWithElement out;
  Cokernel ck = cokernel(hstack(one_minus, Y));
  out.fixed_quotient = ck.group;
  if (elem) {
    auto c = solve_columns(S.L, [&] {
      IntMatrix e(S.n, 1);
      for (size_t i = 0; i < S.n; ++i) e.at(i, 0) = (*elem)[i];
      return e;
    }());
    if (!c) throw UnitNotInKernel("element lies outside the subgroup");
    out.element_coords = ck.canonical_coords(c->col(0));
    out.has_element = true;
  }

  // v ranges over { v : (1 - X) v lands in im Y }; that lattice modulo im Y
  IntMatrix negY(k, Y.cols());
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < Y.cols(); ++j) negY.at(i, j) = -Y.at(i, j);
  IntMatrix W = kernel_basis(hstack(one_minus, negY));
  IntMatrix P(k, W.cols());
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < W.cols(); ++j) P.at(i, j) = W.at(i, j);
  SmithDecomposition ps = smith(P);
  std::vector<size_t> idx;
  IntMatrix Kb(k, ps.rank());
  for (size_t j = 0; j < ps.rank(); ++j)
    for (size_t i = 0; i < k; ++i) Kb.at(i, j) = ps.factors[j] * ps.Uinv.at(i, j);
  if (Y.cols() == 0) {
    out.fixed_subgroup.rank = Kb.cols();
  } else {
    auto Z = solve_columns(Kb, Y);
    if (!Z) throw Inconsistency("relation lattice escapes the fixed sublattice");
    out.fixed_subgroup = cokernel(*Z).group;
  }
  return out;
}

}  // namespace pmk
