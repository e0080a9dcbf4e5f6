#include "qb/smith.hpp"

#include <cstdlib>
#include <limits>

namespace qb {

namespace {

class SmithWorker {
 public:
  explicit SmithWorker(const IntMatrix& a)
      : n_(a.rows()), D(a), P(IntMatrix::Identity(n_, n_)), Q(IntMatrix::Identity(n_, n_)) {}

  void run() {
    for (Eigen::Index t = 0; t < n_; ++t) {
      while (true) {
        if (!move_smallest_to(t)) throw Error(ErrorCode::rank, "matrix is singular");
        bool clean = true;
        for (Eigen::Index i = t + 1; i < n_; ++i) {
          long long q = D(i, t) / D(t, t);
          if (q != 0) add_row(i, t, -q);
          if (D(i, t) != 0) clean = false;
        }
        for (Eigen::Index j = t + 1; j < n_; ++j) {
          long long q = D(t, j) / D(t, t);
          if (q != 0) add_col(j, t, -q);
          if (D(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        // divisibility of the remaining block by the pivot
        Eigen::Index bad = -1;
        for (Eigen::Index i = t + 1; i < n_ && bad < 0; ++i)
          for (Eigen::Index j = t + 1; j < n_; ++j)
            if (D(i, j) % D(t, t) != 0) {
              bad = i;
              break;
            }
        if (bad >= 0) {
          add_row(t, bad, 1);
          continue;
        }
        if (D(t, t) < 0) negate_row(t);
        break;
      }
    }
  }

  Eigen::Index n_;
  IntMatrix D, P, Q;

 private:
  bool move_smallest_to(Eigen::Index t) {
    Eigen::Index bi = -1, bj = -1;
    long long best = std::numeric_limits<long long>::max();
    for (Eigen::Index i = t; i < n_; ++i)
      for (Eigen::Index j = t; j < n_; ++j)
        if (D(i, j) != 0 && std::llabs(D(i, j)) < best) {
          best = std::llabs(D(i, j));
          bi = i;
          bj = j;
        }
    if (bi < 0) return false;
    if (bi != t) swap_rows(bi, t);
    if (bj != t) swap_cols(bj, t);
    return true;
  }

  // Every operation D <- E D keeps A = P D Q by P <- P E^{-1}; likewise for columns.
  void swap_rows(Eigen::Index i, Eigen::Index j) {
    D.row(i).swap(D.row(j));
    P.col(i).swap(P.col(j));
  }
  void swap_cols(Eigen::Index i, Eigen::Index j) {
    D.col(i).swap(D.col(j));
    Q.row(i).swap(Q.row(j));
  }
  // row_i += k row_j
  void add_row(Eigen::Index i, Eigen::Index j, long long k) {
    D.row(i) += k * D.row(j);
    P.col(j) -= k * P.col(i);
  }
  // col_i += k col_j
  void add_col(Eigen::Index i, Eigen::Index j, long long k) {
    D.col(i) += k * D.col(j);
    Q.row(j) -= k * Q.row(i);
  }
  void negate_row(Eigen::Index i) {
    D.row(i) *= -1;
    P.col(i) *= -1;
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw Error(ErrorCode::dimension, "smith_normal_form needs a square matrix");
  SmithWorker w(A);
  w.run();
  return {w.P, w.D, w.Q};
}

long long int_determinant(const IntMatrix& A) {
  const Eigen::Index n = A.rows();
  if (n != A.cols()) throw Error(ErrorCode::dimension, "determinant needs a square matrix");
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m[i][j] = A(i, j);
  int sign = 1;
  __int128 prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return static_cast<long long>(sign * m[n - 1][n - 1]);
}

IntMatrix adjugate(const IntMatrix& A) {
  const Eigen::Index n = A.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = A(r, c);
        }
        ++rr;
      }
      long long cof = int_determinant(minor) * (((i + j) % 2) ? -1 : 1);
      adj(j, i) = cof;
    }
  }
  return adj;
}

MonomialPolyhedronGroup monomial_polyhedron_group(const IntMatrix& B) {
  if (B.rows() != B.cols()) throw Error(ErrorCode::dimension, "exponent matrix must be square");
  const long long det = int_determinant(B);
  if (det <= 0) throw Error(ErrorCode::domain, "monomial polyhedron needs det(B) > 0");
  IntMatrix adj = adjugate(B);
  // B^{-1} = adj(B) / det(B) with det > 0, so the sign condition is on adj(B).
  if ((adj.array() < 0).any()) throw Error(ErrorCode::domain, "B^{-1} has negative entries");
  SmithDecomposition snf = smith_normal_form(adj);
  std::vector<long long> deltas;
  std::vector<int> orders;
  for (Eigen::Index i = 0; i < snf.D.rows(); ++i) {
    deltas.push_back(snf.D(i, i));
    orders.push_back(static_cast<int>(snf.D(i, i)));
  }
  return {ReflectionGroup::cyclic_diagonal(orders), deltas};
}

}  // namespace qb
