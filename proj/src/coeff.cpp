#include "etale/coeff.hpp"

#include <charconv>
#include <sstream>

#include "etale/error.hpp"

namespace etale {

namespace {

bool is_prime(std::uint64_t m) {
  mpz_class z(static_cast<unsigned long>(m));
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

std::uint64_t parse_modulus(std::string_view text, std::string_view whole) {
  std::uint64_t m = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("bad ring name '" + std::string(whole) +
                          "': modulus must be a positive integer");
  }
  return m;
}

}  // namespace

Ring Ring::rational() { return Ring(RingKind::rational, 0, false); }
Ring Ring::integer() { return Ring(RingKind::integer, 0, false); }

Ring Ring::modular(std::uint64_t modulus) {
  if (modulus < 2) {
    throw InvalidArgument("modulus must be at least 2, got " +
                          std::to_string(modulus));
  }
  return Ring(RingKind::modular, modulus, is_prime(modulus));
}

Ring Ring::parse(std::string_view name) {
  if (name == "Q") return rational();
  if (name == "Z") return integer();
  if (name.starts_with("Fp:")) {
    auto m = parse_modulus(name.substr(3), name);
    if (!is_prime(m)) {
      throw InvalidArgument("bad ring name '" + std::string(name) +
                            "': Fp needs a prime, use Zmod:<m> instead");
    }
    return modular(m);
  }
  if (name.starts_with("Zmod:")) return modular(parse_modulus(name.substr(5), name));
  if (name.size() > 1 && name[0] == 'F') {
    auto m = parse_modulus(name.substr(1), name);
    if (!is_prime(m)) {
      throw InvalidArgument("bad ring name '" + std::string(name) +
                            "': F<p> needs a prime");
    }
    return modular(m);
  }
  throw InvalidArgument("unknown ring '" + std::string(name) +
                        "'; expected Q, Z, Fp:<prime> or Zmod:<m>");
}

bool Ring::is_field() const {
  return kind_ == RingKind::rational || (kind_ == RingKind::modular && prime_);
}

bool Ring::supports_linear_algebra() const {
  return is_field() || kind_ == RingKind::integer;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::rational:
      return "Q";
    case RingKind::integer:
      return "Z";
    case RingKind::modular:
      return (prime_ ? "Fp:" : "Zmod:") + std::to_string(modulus_);
  }
  return "?";
}

Scalar Ring::reduce(const mpz_class& value) const {
  return Scalar(mpz_fdiv_ui(value.get_mpz_t(), static_cast<unsigned long>(modulus_)));
}

Scalar Ring::from_int(long value) const { return element(Scalar(value)); }

Scalar Ring::element(const Scalar& value) const {
  Scalar v = value;
  v.canonicalize();
  switch (kind_) {
    case RingKind::rational:
      return v;
    case RingKind::integer:
      if (v.get_den() != 1) {
        throw InvalidArgument("value " + v.get_str() + " is not an integer");
      }
      return v;
    case RingKind::modular: {
      mpz_class m(static_cast<unsigned long>(modulus_));
      mpz_class den_inv;
      mpz_class den = v.get_den();
      if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw InvalidArgument("value " + v.get_str() + " has no image in " +
                              name());
      }
      return reduce(v.get_num() * den_inv);
    }
  }
  return v;
}

bool Ring::contains(const Scalar& value) const {
  switch (kind_) {
    case RingKind::rational:
      return true;
    case RingKind::integer:
      return value.get_den() == 1;
    case RingKind::modular:
      return value.get_den() == 1 && value.get_num() >= 0 &&
             value.get_num() < mpz_class(static_cast<unsigned long>(modulus_));
  }
  return false;
}

Scalar Ring::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::modular) return reduce(a.get_num() + b.get_num());
  return a + b;
}

Scalar Ring::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::modular) return reduce(a.get_num() - b.get_num());
  return a - b;
}

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::modular) return reduce(a.get_num() * b.get_num());
  return a * b;
}

Scalar Ring::neg(const Scalar& a) const {
  if (kind_ == RingKind::modular) return reduce(-a.get_num());
  return -a;
}

bool Ring::is_unit(const Scalar& a) const {
  switch (kind_) {
    case RingKind::rational:
      return a != 0;
    case RingKind::integer:
      return a == 1 || a == -1;
    case RingKind::modular: {
      mpz_class m(static_cast<unsigned long>(modulus_));
      mpz_class g;
      mpz_class n = a.get_num();
      mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
      return g == 1;
    }
  }
  return false;
}

Scalar Ring::inverse(const Scalar& a) const {
  if (!is_unit(a)) {
    throw InvalidArgument(a.get_str() + " is not a unit in " + name());
  }
  if (kind_ == RingKind::modular) {
    mpz_class m(static_cast<unsigned long>(modulus_));
    mpz_class inv;
    mpz_class n = a.get_num();
    mpz_invert(inv.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return Scalar(inv);
  }
  return Scalar(1) / a;
}

std::optional<Scalar> Ring::divide(const Scalar& a, const Scalar& b) const {
  switch (kind_) {
    case RingKind::rational:
      if (b == 0) return std::nullopt;
      return Scalar(a / b);
    case RingKind::integer: {
      if (b == 0) return std::nullopt;
      mpz_class q, r;
      mpz_class num = a.get_num();
      mpz_class den = b.get_num();
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      if (r != 0) return std::nullopt;
      return Scalar(q);
    }
    case RingKind::modular:
      if (!is_unit(b)) return std::nullopt;
      return mul(a, inverse(b));
  }
  return std::nullopt;
}

std::string to_string(const Scalar& value) { return value.get_str(); }

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw InvalidArgument("not a number: '" + s + "'");
    return Scalar(mpz_class(strip_plus(s)));
  }
  std::string num = s.substr(0, slash);
  std::string den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw InvalidArgument("not a fraction: '" + s + "'");
  }
  mpz_class d(den);
  if (d == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  Scalar q(mpz_class(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), entries_(rows * cols) {}

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

Matrix Matrix::from_rows(Ring ring, const std::vector<Vector>& rows,
                         std::size_t cols_if_empty) {
  std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  Matrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw DimensionError("ragged matrix: row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) m.entries_[i * cols + j] = ring.element(rows[i][j]);
  }
  return m;
}

Matrix Matrix::row_vector(Ring ring, const Vector& v) {
  return from_rows(ring, {v});
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& value) {
  entries_[i * cols_ + j] = ring_.element(value);
}

Vector Matrix::row(std::size_t i) const {
  return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<Vector> Matrix::to_rows() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw DimensionError("block out of range");
  }
  Matrix b(ring_, nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      b.entries_[i * ncols + j] = (*this)(row0 + i, col0 + j);
    }
  }
  return b;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& b) {
  if (!(b.ring_ == ring_)) throw RingMismatch("set_block: ring mismatch");
  if (row0 + b.rows_ > rows_ || col0 + b.cols_ > cols_) {
    throw DimensionError("set_block out of range");
  }
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      entries_[(row0 + i) * cols_ + col0 + j] = b(i, j);
    }
  }
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  }
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << (*this)(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
         a.entries_ == b.entries_;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (!(a.ring_ == b.ring_)) {
    throw RingMismatch("mat_mul: " + a.ring_.name() + " vs " + b.ring_.name());
  }
  if (a.cols_ != b.rows_) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows_) + "x" +
                         std::to_string(a.cols_) + " times " +
                         std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  const Ring& ring = a.ring_;
  Matrix c(ring, a.rows_, b.cols_);
  Scalar acc;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a.entries_[i * a.cols_ + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& bkj = b.entries_[k * b.cols_ + j];
        if (bkj == 0) continue;
        c.entries_[i * c.cols_ + j] += aik * bkj;
      }
    }
  }
  if (ring.kind() == RingKind::modular) {
    for (auto& e : c.entries_) e = ring.element(e);
  }
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

namespace {

template <class Op>
Matrix entrywise(const Matrix& a, const Matrix& b, Op op, const char* what) {
  if (!(a.ring() == b.ring())) throw RingMismatch(std::string(what) + ": ring mismatch");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch");
  }
  Matrix c(a.ring(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, op(a(i, j), b(i, j)));
  }
  return c;
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  const Ring& r = a.ring();
  return entrywise(a, b, [&](const Scalar& x, const Scalar& y) { return r.add(x, y); },
                   "matrix add");
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  const Ring& r = a.ring();
  return entrywise(a, b, [&](const Scalar& x, const Scalar& y) { return r.sub(x, y); },
                   "matrix sub");
}

Matrix scale(const Scalar& c, const Matrix& a) {
  Matrix out(a.ring(), a.rows(), a.cols());
  Scalar cc = a.ring().element(c);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.ring().mul(cc, a(i, j)));
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("direct_sum: ring mismatch");
  Matrix c(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), a.cols(), b);
  return c;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("hstack: ring mismatch");
  if (a.rows() != b.rows()) throw DimensionError("hstack: row count mismatch");
  Matrix c(a.ring(), a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("vstack: ring mismatch");
  if (a.cols() != b.cols()) throw DimensionError("vstack: column count mismatch");
  Matrix c(a.ring(), a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

Vector vec_mul(const Vector& v, const Matrix& a) {
  if (v.size() != a.rows()) {
    throw DimensionError("vector of length " + std::to_string(v.size()) +
                         " times " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " matrix");
  }
  return mat_mul(Matrix::row_vector(a.ring(), v), a).row(0);
}

Vector vec_add(const Ring& ring, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vec_add: length mismatch");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = ring.add(a[i], b[i]);
  return c;
}

Vector vec_scale(const Ring& ring, const Scalar& c, const Vector& v) {
  Vector out(v.size());
  Scalar cc = ring.element(c);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = ring.mul(cc, v[i]);
  return out;
}

bool is_zero(const Vector& v) {
  for (const auto& e : v) {
    if (e != 0) return false;
  }
  return true;
}

std::string to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace etale
