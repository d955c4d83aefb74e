#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etale/error.hpp"

namespace etale {

// Every ring element is carried as an exact rational. Integer and modular
// rings keep their elements in canonical integer form (residues in [0, m)).
using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

enum class RingKind { rational, integer, modular };

/// A coefficient ring: Q, Z or Z/m. Z/p for prime p is a field.
class Ring {
 public:
  static Ring rational();
  static Ring integer();
  static Ring modular(std::uint64_t modulus);

  // Accepts "Q", "Z", "Fp:<p>", "Zmod:<m>" and the short form "F<p>".
  static Ring parse(std::string_view name);

  RingKind kind() const { return kind_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_field() const;
  // Echelon forms exist over fields and over Z.
  bool supports_linear_algebra() const;
  std::string name() const;

  Scalar zero() const { return Scalar(0); }
  Scalar one() const { return Scalar(1); }
  Scalar from_int(long value) const;

  // Maps an arbitrary rational into the ring, throwing InvalidArgument when
  // it has no image (a fraction in Z, or a non-invertible denominator mod m).
  Scalar element(const Scalar& value) const;
  bool contains(const Scalar& value) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  bool is_unit(const Scalar& a) const;
  Scalar inverse(const Scalar& a) const;

  // Exact quotient a / b when b divides a in the ring.
  std::optional<Scalar> divide(const Scalar& a, const Scalar& b) const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  Ring(RingKind kind, std::uint64_t modulus, bool prime)
      : kind_(kind), modulus_(modulus), prime_(prime) {}

  Scalar reduce(const mpz_class& value) const;

  RingKind kind_ = RingKind::rational;
  std::uint64_t modulus_ = 0;
  bool prime_ = false;
};

std::string to_string(const Scalar& value);
// Parses "7", "-3", "2/5".
Scalar parse_scalar(std::string_view text);

/// Dense matrix over a Ring. Vectors are rows and act by right
/// multiplication, so v -> v*A.
class Matrix {
 public:
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_rows(Ring ring, const std::vector<Vector>& rows,
                          std::size_t cols_if_empty = 0);
  static Matrix row_vector(Ring ring, const Vector& v);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, const Scalar& value);

  Vector row(std::size_t i) const;
  std::vector<Vector> to_rows() const;

  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& b);

  Matrix transpose() const;
  bool is_zero() const;
  bool is_identity() const;

  std::string to_string() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  friend Matrix mat_mul(const Matrix& a, const Matrix& b);
  friend class RowReducer;

  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix scale(const Scalar& c, const Matrix& a);
// Block-diagonal matrix diag(a, b).
Matrix direct_sum(const Matrix& a, const Matrix& b);
// [a b] and [a; b].
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);

Vector vec_mul(const Vector& v, const Matrix& a);
Vector vec_add(const Ring& ring, const Vector& a, const Vector& b);
Vector vec_scale(const Ring& ring, const Scalar& c, const Vector& v);
bool is_zero(const Vector& v);
std::string to_string(const Vector& v);

// Exact linear algebra. All of these require ring().supports_linear_algebra()
// and throw UnsupportedRing otherwise.

// Canonical echelon basis of the row space {v*A}: reduced row echelon form
// over a field, Hermite normal form over Z. Zero rows are dropped.
Matrix echelon_form(const Matrix& a);
Matrix image_basis(const Matrix& a);
// Basis (Z-basis over Z) of the left kernel {v : v*A = 0}, in echelon form.
Matrix kernel_basis(const Matrix& a);
std::size_t rank(const Matrix& a);
// Coordinates c with c*basis = w, where basis is an echelon_form output.
// Empty when w is outside the row space (row lattice over Z).
std::optional<Vector> solve_in_row_space(const Matrix& basis, const Vector& w);
// Two-sided inverse; over Z only unimodular matrices are invertible.
std::optional<Matrix> inverse(const Matrix& a);

}  // namespace etale
