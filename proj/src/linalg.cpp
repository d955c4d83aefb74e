// Echelon forms over fields (Gauss-Jordan) and over Z (fraction-free Hermite
// normal form), and the kernel/image/solve/inverse routines built on them.

#include <utility>

#include "etale/coeff.hpp"
#include "etale/error.hpp"

namespace etale {

class RowReducer {
 public:
  RowReducer(Matrix& work, std::size_t pivot_cols)
      : m_(work), ring_(work.ring()), pivot_cols_(pivot_cols) {}

  // Leaves the first pivot_cols columns in canonical echelon form and
  // returns the pivot columns; rows [0, rank) are the pivot rows.
  std::vector<std::size_t> run() {
    if (ring_.kind() == RingKind::integer) return hermite();
    return gauss_jordan();
  }

 private:
  Scalar& at(std::size_t i, std::size_t j) { return m_.entries_[i * m_.cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m_.cols_; ++j) std::swap(at(a, j), at(b, j));
  }

  // row_i -= factor * row_r, for columns from `from` on.
  void eliminate(std::size_t i, const Scalar& factor, std::size_t r, std::size_t from) {
    for (std::size_t j = from; j < m_.cols_; ++j) {
      const Scalar& v = at(r, j);
      if (v == 0) continue;
      at(i, j) = ring_.sub(at(i, j), ring_.mul(factor, v));
    }
  }

  void scale_row(std::size_t r, const Scalar& factor, std::size_t from) {
    for (std::size_t j = from; j < m_.cols_; ++j) at(r, j) = ring_.mul(factor, at(r, j));
  }

  std::vector<std::size_t> gauss_jordan() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols_ && r < m_.rows_; ++c) {
      std::size_t p = r;
      while (p < m_.rows_ && at(p, c) == 0) ++p;
      if (p == m_.rows_) continue;
      swap_rows(p, r);
      scale_row(r, ring_.inverse(at(r, c)), c);
      for (std::size_t i = 0; i < m_.rows_; ++i) {
        if (i == r || at(i, c) == 0) continue;
        Scalar f = at(i, c);
        eliminate(i, f, r, c);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  static Scalar floor_div(const Scalar& a, const Scalar& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    return Scalar(q);
  }

  std::vector<std::size_t> hermite() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols_ && r < m_.rows_; ++c) {
      bool found = false;
      for (;;) {
        std::size_t best = m_.rows_;
        for (std::size_t i = r; i < m_.rows_; ++i) {
          if (at(i, c) == 0) continue;
          if (best == m_.rows_ || abs(at(i, c)) < abs(at(best, c))) best = i;
        }
        if (best == m_.rows_) break;
        found = true;
        swap_rows(best, r);
        bool cleared = true;
        for (std::size_t i = r + 1; i < m_.rows_; ++i) {
          if (at(i, c) == 0) continue;
          Scalar q = floor_div(at(i, c), at(r, c));
          eliminate(i, q, r, c);
          if (at(i, c) != 0) cleared = false;
        }
        if (cleared) break;
      }
      if (!found) continue;
      if (at(r, c) < 0) scale_row(r, Scalar(-1), c);
      for (std::size_t i = 0; i < r; ++i) {
        if (at(i, c) == 0) continue;
        Scalar q = floor_div(at(i, c), at(r, c));
        if (q != 0) eliminate(i, q, r, c);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  Matrix& m_;
  Ring ring_;
  std::size_t pivot_cols_;
};

namespace {

void require_linear_algebra(const Ring& ring, const char* op) {
  if (!ring.supports_linear_algebra()) {
    throw UnsupportedRing(std::string(op) + " needs a field or Z, got " + ring.name() +
                          " (composite modulus supports arithmetic only)");
  }
}

}  // namespace

Matrix echelon_form(const Matrix& a) {
  require_linear_algebra(a.ring(), "echelon_form");
  Matrix work = a;
  auto pivots = RowReducer(work, work.cols()).run();
  return work.block(0, 0, pivots.size(), work.cols());
}

Matrix image_basis(const Matrix& a) { return echelon_form(a); }

Matrix kernel_basis(const Matrix& a) {
  require_linear_algebra(a.ring(), "kernel_basis");
  Matrix work = hstack(a, Matrix::identity(a.ring(), a.rows()));
  auto pivots = RowReducer(work, a.cols()).run();
  std::size_t nullity = a.rows() - pivots.size();
  if (nullity == 0) return Matrix(a.ring(), 0, a.rows());
  return echelon_form(work.block(pivots.size(), a.cols(), nullity, a.rows()));
}

std::size_t rank(const Matrix& a) { return echelon_form(a).rows(); }

std::optional<Vector> solve_in_row_space(const Matrix& basis, const Vector& w) {
  require_linear_algebra(basis.ring(), "solve_in_row_space");
  if (w.size() != basis.cols()) {
    throw DimensionError("solve_in_row_space: vector length " +
                         std::to_string(w.size()) + " vs " +
                         std::to_string(basis.cols()) + " columns");
  }
  const Ring& ring = basis.ring();
  Vector rest = w;
  Vector coords(basis.rows());
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    std::size_t p = 0;
    while (p < basis.cols() && basis(i, p) == 0) ++p;
    if (p == basis.cols()) throw InvalidArgument("solve_in_row_space: basis has a zero row");
    auto c = ring.divide(rest[p], basis(i, p));
    if (!c) return std::nullopt;
    coords[i] = *c;
    if (*c == 0) continue;
    for (std::size_t j = p; j < basis.cols(); ++j) {
      rest[j] = ring.sub(rest[j], ring.mul(*c, basis(i, j)));
    }
  }
  if (!is_zero(rest)) return std::nullopt;
  return coords;
}

std::optional<Matrix> inverse(const Matrix& a) {
  require_linear_algebra(a.ring(), "inverse");
  if (a.rows() != a.cols()) return std::nullopt;
  std::size_t n = a.rows();
  Matrix work = hstack(a, Matrix::identity(a.ring(), n));
  RowReducer(work, n).run();
  if (!work.block(0, 0, n, n).is_identity()) return std::nullopt;
  return work.block(0, n, n, n);
}

}  // namespace etale
