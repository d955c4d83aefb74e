#pragma once

#include <cstdint>
#include <vector>

#include "etale/coeff.hpp"
#include "etale/groupoid.hpp"
#include "etale/report.hpp"

namespace etale {

/// A G-sheaf of k-modules at finite scale: free stalks E_x = k^{n_x} and,
/// per arrow g, the transport B_g (n_{r(g)} x n_{d(g)}) acting on the right,
/// e -> e B_g, from E_{r(g)} to E_{d(g)}.
class GSheaf {
 public:
  // Shape and ring checks only; axioms are validate_sheaf's job.
  GSheaf(GroupoidPtr groupoid, Ring ring, std::vector<std::size_t> stalk_ranks,
         std::vector<Matrix> transports);

  const FiniteGroupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  const Ring& ring() const { return ring_; }

  std::size_t stalk_rank(Object x) const { return ranks_[index(x)]; }
  const std::vector<std::size_t>& stalk_ranks() const { return ranks_; }
  std::size_t total_rank() const;
  const Matrix& transport(Arrow g) const { return transports_[index(g)]; }
  const std::vector<Matrix>& transports() const { return transports_; }

  friend bool operator==(const GSheaf& a, const GSheaf& b);

 private:
  GroupoidPtr groupoid_;
  Ring ring_;
  std::vector<std::size_t> ranks_;
  std::vector<Matrix> transports_;
};

// Checks in order: unit transports are identities, composition
// B_g B_h = B_{gh}, invertibility B_g B_{g^-1} = I.
Report validate_sheaf(const GSheaf& e);

// e * B_g; e must lie in the stalk at r(g).
Vector apply_transport(const GSheaf& e, const Vector& v, Arrow g);

GSheaf constant_sheaf(const GroupoidPtr& g, const Ring& ring, std::size_t rank);
GSheaf zero_sheaf(const GroupoidPtr& g, const Ring& ring);
GSheaf direct_sum(const GSheaf& a, const GSheaf& b);

/// Per-object maps phi_x : E_x -> F_x (n^src_x x n^tgt_x), equivariant:
/// phi_{r(g)} B^tgt_g = B^src_g phi_{d(g)}.
class GSheafMor {
 public:
  GSheafMor(GSheaf source, GSheaf target, std::vector<Matrix> maps);

  const GSheaf& source() const { return source_; }
  const GSheaf& target() const { return target_; }
  const Matrix& at(Object x) const { return maps_[index(x)]; }
  const std::vector<Matrix>& maps() const { return maps_; }

 private:
  GSheaf source_;
  GSheaf target_;
  std::vector<Matrix> maps_;
};

Report validate_sheaf_morphism(const GSheafMor& phi);
GSheafMor identity_morphism(const GSheaf& e);
GSheafMor zero_morphism(const GSheaf& source, const GSheaf& target);
// `second` after `first`, stalkwise first_x * second_x.
GSheafMor compose(const GSheafMor& first, const GSheafMor& second);
// Stalkwise inverse, if every phi_x is invertible.
std::optional<GSheafMor> inverse_morphism(const GSheafMor& phi);

// Basis of Hom(a, b) in the sheaf category (Z-basis over Z).
std::vector<GSheafMor> morphism_basis(const GSheaf& a, const GSheaf& b);
GSheafMor random_morphism(const GSheaf& a, const GSheaf& b, std::uint64_t seed);

}  // namespace etale
