#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "etale/coeff.hpp"
#include "etale/groupoid.hpp"
#include "etale/report.hpp"

namespace etale {

/// Element of the convolution algebra kG: a finitely supported function on
/// arrows. Stored sparsely with no explicit zeros, so equality is
/// structural.
class AlgebraElement {
 public:
  AlgebraElement(GroupoidPtr groupoid, Ring ring);

  static AlgebraElement from_coefficients(GroupoidPtr groupoid, Ring ring,
                                          const std::map<Arrow, Scalar>& coeffs);

  const FiniteGroupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  const Ring& ring() const { return ring_; }

  Scalar coefficient(Arrow g) const;
  const std::map<Arrow, Scalar>& coefficients() const { return coeffs_; }
  std::vector<Arrow> support() const;
  bool is_zero() const { return coeffs_.empty(); }

  // Adds c to the coefficient of g.
  void add_term(Arrow g, const Scalar& c);

  std::string to_string() const;

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

 private:
  GroupoidPtr groupoid_;
  Ring ring_;
  std::map<Arrow, Scalar> coeffs_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const Scalar& c, const AlgebraElement& f);

// Characteristic function of a bisection.
AlgebraElement char_fn(const GroupoidPtr& g, const Bisection& u, const Ring& ring);
// chi of {unit(x) : x in U}; for U = all objects this is the identity of kG.
AlgebraElement char_fn(const GroupoidPtr& g, const CompactOpen& u, const Ring& ring);
AlgebraElement singleton(const GroupoidPtr& g, Arrow a, const Ring& ring);

// (f1*f2)(g) = sum over kh = g of f1(k) f2(h).
AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2);
AlgebraElement operator*(const AlgebraElement& f1, const AlgebraElement& f2);

// A U in the unit space with chi_U * f * chi_U = f for every f; built as
// the union of U^{-1}U and UU^{-1} over the singleton bisections of the
// supports. Throws InvalidArgument on an empty list.
CompactOpen local_unit(std::span<const AlgebraElement> fs);

struct CornerAlgebra {
  FiniteGroupoid restricted;
  std::vector<Arrow> embedding;  // restricted arrow -> ambient arrow
  std::size_t dimension = 0;
  Report verification;
};

// Identifies chi_U kG chi_U with k(G_U): checks that the corner of every
// spanning singleton lands in the embedded image (or vanishes) and that the
// multiplication tables agree under the embedding.
CornerAlgebra corner_algebra(const GroupoidPtr& g, const CompactOpen& u, const Ring& ring);

inline constexpr std::size_t kTableArrowLimit = 64;

struct MultiplicationTable {
  GroupoidPtr groupoid;
  Ring ring;
  std::vector<AlgebraElement> entries;  // row-major, chi_g * chi_h

  const AlgebraElement& at(Arrow g, Arrow h) const {
    return entries[index(g) * groupoid->num_arrows() + index(h)];
  }
  // Tab-separated, header row and column of arrow ids in declaration order.
  std::string to_tsv() const;
};

MultiplicationTable multiplication_table(const GroupoidPtr& g, const Ring& ring);

}  // namespace etale
