#pragma once

#include <cstdint>
#include <vector>

#include "etale/algebra.hpp"
#include "etale/coeff.hpp"
#include "etale/groupoid.hpp"
#include "etale/report.hpp"

namespace etale {

/// A unitary right kG-module on the free carrier k^rank. The module is
/// given by the action matrices A_g of the spanning singletons chi_{g};
/// a general f acts by linear extension, v -> v * sum_g f(g) A_g.
class GModule {
 public:
  // Checks shapes and rings only; use validate_module for the axioms.
  GModule(GroupoidPtr groupoid, Ring ring, std::size_t rank, std::vector<Matrix> action);

  static GModule zero(GroupoidPtr groupoid, Ring ring);

  const FiniteGroupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  const Ring& ring() const { return ring_; }
  std::size_t rank() const { return rank_; }

  const Matrix& action(Arrow g) const { return action_[index(g)]; }
  const std::vector<Matrix>& actions() const { return action_; }
  // A_{u(x)}: the projection onto the part of the module living over x.
  const Matrix& unit_idempotent(Object x) const { return action(groupoid_->unit(x)); }
  // sum_g f(g) A_g.
  Matrix action_of(const AlgebraElement& f) const;

  friend bool operator==(const GModule& a, const GModule& b);

 private:
  GroupoidPtr groupoid_;
  Ring ring_;
  std::size_t rank_;
  std::vector<Matrix> action_;
};

// v * f. Throws DimensionError/RingMismatch/InvalidArgument on mismatch.
Vector act(const GModule& m, const Vector& v, const AlgebraElement& f);

// Checks, in order: units (idempotent, orthogonal, summing to the
// identity), support, multiplicativity, invertibility on stalks.
Report validate_module(const GModule& m);

/// A kG-module homomorphism, as a rank(source) x rank(target) matrix F
/// with A^src_g F = F A^tgt_g.
class GModuleHom {
 public:
  GModuleHom(GModule source, GModule target, Matrix matrix);

  const GModule& source() const { return source_; }
  const GModule& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  GModule source_;
  GModule target_;
  Matrix matrix_;
};

Report validate_hom(const GModuleHom& h);
GModuleHom identity_hom(const GModule& m);
GModuleHom zero_hom(const GModule& source, const GModule& target);
// `second` after `first`; as matrices first * second.
GModuleHom compose(const GModuleHom& first, const GModuleHom& second);

// kG acting on itself by right convolution, basis = arrows.
GModule regular_module(const GroupoidPtr& g, const Ring& ring);
GModule direct_sum(const GModule& a, const GModule& b);
// The module with A'_g = P^{-1} A_g P; P itself is an isomorphism m -> result.
GModule change_basis(const GModule& m, const Matrix& p, const Matrix& p_inverse);

// A random valid module: stalk ranks in [0, max_rank], constant on
// connected components, invertible transports along a spanning star of each
// component extended multiplicatively, then a random change of basis.
// Deterministic in the seed.
GModule random_module(const GroupoidPtr& g, const Ring& ring, std::size_t max_rank,
                      std::uint64_t seed);
// Same, with prescribed stalk ranks (must be constant on components).
GModule random_module_with_ranks(const GroupoidPtr& g, const Ring& ring,
                                 const std::vector<std::size_t>& stalk_ranks,
                                 std::uint64_t seed);

// Basis of Hom(m, n) as a k-module (a Z-basis over Z).
std::vector<Matrix> hom_basis(const GModule& m, const GModule& n);
// A random combination of hom_basis(m, n).
GModuleHom random_hom(const GModule& m, const GModule& n, std::uint64_t seed);

}  // namespace etale
