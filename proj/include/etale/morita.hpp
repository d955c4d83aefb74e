#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etale/equivalence.hpp"
#include "etale/gmodule.hpp"
#include "etale/groupoid.hpp"
#include "etale/gsheaf.hpp"
#include "etale/report.hpp"

namespace etale {

/// A functor between finite groupoids given by its object and arrow maps.
struct GroupoidFunctor {
  GroupoidPtr source;
  GroupoidPtr target;
  std::vector<Object> obj_map;
  std::vector<Arrow> arr_map;

  Object operator()(Object x) const { return obj_map[index(x)]; }
  Arrow operator()(Arrow g) const { return arr_map[index(g)]; }
};

// Checks in order: shape, source, target, units, composition, inverses.
Report validate_functor(const GroupoidFunctor& f);
GroupoidFunctor identity_functor(const GroupoidPtr& g);
// restrict_groupoid(g, u) -> g.
GroupoidFunctor inclusion_functor(const GroupoidPtr& g, const CompactOpen& u);
GroupoidFunctor compose(const GroupoidFunctor& first, const GroupoidFunctor& second);

// (a) essential surjectivity: each target object is reached by an arrow
// from some F(x); (b) full faithfulness: Hom(x,y) -> Hom(Fx,Fy) bijective.
// A functor failing validate_functor fails here too.
Report is_essential_equivalence(const GroupoidFunctor& f);

// Inverse image: stalk at x is E_{F(x)}, B_g = B_{F(g)}.
GSheaf pullback_sheaf(const GroupoidFunctor& f, const GSheaf& e);
GSheafMor pullback_morphism(const GroupoidFunctor& f, const GSheafMor& phi);

/// Quasi-inverse of pullback along an essential equivalence F. For each
/// target object y: sigma(y), the least source object with an arrow between
/// F(sigma(y)) and y, and alpha(y), the least such arrow F(sigma(y)) -> y.
class QuasiInverse {
 public:
  // Throws InvalidArgument unless f is an essential equivalence.
  explicit QuasiInverse(GroupoidFunctor f);

  const GroupoidFunctor& functor() const { return f_; }
  Object sigma(Object y) const { return sigma_[index(y)]; }
  Arrow alpha(Object y) const { return alpha_[index(y)]; }
  // The unique source arrow k with F(k) = alpha(r(h))^-1 h alpha(d(h)).
  Arrow lift(Arrow h) const { return lift_[index(h)]; }

  GSheaf apply(const GSheaf& e) const;
  GSheafMor apply(const GSheafMor& phi) const;

  // E -> pullback(apply(E)), stalk x via B_{beta_x} where F(beta_x) =
  // alpha(F(x)).
  GSheafMor unit(const GSheaf& e) const;
  // E -> apply(pullback(E)) for E over the target, stalk y via B_{alpha(y)}.
  GSheafMor counit(const GSheaf& e) const;

 private:
  GroupoidFunctor f_;
  std::vector<Object> sigma_;
  std::vector<Arrow> alpha_;
  std::vector<Arrow> lift_;
  std::vector<Arrow> beta_;
};

GSheaf pullback_quasi_inverse(const GroupoidFunctor& f, const GSheaf& e);

/// apex K with legs left: K -> G and right: K -> H.
struct MoritaSpan {
  GroupoidFunctor left;
  GroupoidFunctor right;

  const GroupoidPtr& apex() const { return left.source; }
  const GroupoidPtr& from() const { return left.target; }
  const GroupoidPtr& to() const { return right.target; }
  MoritaSpan reversed() const { return {right, left}; }
};

// Legs share the apex and both are essential equivalences.
Report validate_span(const MoritaSpan& span);

// mod-kG -> sheaves on G -> (pullback along left) sheaves on K ->
// (quasi-inverse of right) sheaves on H -> mod-kH.
GModule module_transport(const MoritaSpan& span, const GModule& m);
// The same composite on a morphism.
GModuleHom hom_transport(const MoritaSpan& span, const GModuleHom& f);

// Transports m across and back again and builds the explicit isomorphism
// m -> back, through eta, epsilon, unit and counit. The certificate
// components hold that one matrix and its inverse.
CertificateResult round_trip(const MoritaSpan& span, const GModule& m);

// Hom(a, b) -> Hom(T a, T b) is bijective: images are homs, the map is
// injective, and the image is all of Hom(T a, T b).
Report hom_bijection(const MoritaSpan& span, const GModule& a, const GModule& b);

struct MoritaSample {
  std::string direction;  // "forward" or "backward"
  std::size_t index = 0;
  std::size_t rank = 0;
  std::size_t transported_rank = 0;
  Report round_trip;
  Report hom;  // against the next sample (and itself when alone)
};

struct MoritaReport {
  Report span;
  std::vector<MoritaSample> samples;
  Report regular;  // round trip of the regular module
  std::size_t regular_rank = 0;
  std::size_t regular_transported_rank = 0;

  bool passed() const;
};

// Rejects the span before any transport when a leg is not an essential
// equivalence. Otherwise transports `samples` random modules each way
// (stalk ranks <= max_rank) and the regular module of the first groupoid.
MoritaReport verify_morita(const MoritaSpan& span, const Ring& ring, std::size_t samples,
                           std::uint64_t seed, std::size_t max_rank = 2);

}  // namespace etale
