#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etale/report.hpp"

namespace etale {

// Strong indices into a groupoid's declaration-ordered object and arrow
// lists.
enum class Object : std::uint32_t {};
enum class Arrow : std::uint32_t {};

constexpr std::size_t index(Object x) { return static_cast<std::size_t>(x); }
constexpr std::size_t index(Arrow g) { return static_cast<std::size_t>(g); }
constexpr Object object_at(std::size_t i) { return static_cast<Object>(i); }
constexpr Arrow arrow_at(std::size_t i) { return static_cast<Arrow>(i); }

/// A finite groupoid with discrete topology, stored as explicit tables.
///
/// An arrow g has a source (domain) and a target (range); the product gh is
/// defined when source(g) == target(h), and then source(gh) = source(h),
/// target(gh) = target(g). The constructor only checks that the tables are
/// well formed (indices in range, names unique); the groupoid axioms are
/// checked by validate_groupoid.
class FiniteGroupoid {
 public:
  struct ArrowSpec {
    std::string name;
    Object source;
    Object target;
    friend bool operator==(const ArrowSpec&, const ArrowSpec&) = default;
  };

  // left * right = product.
  struct CompositionEntry {
    Arrow left;
    Arrow right;
    Arrow product;
  };

  FiniteGroupoid() = default;
  FiniteGroupoid(std::vector<std::string> objects, std::vector<ArrowSpec> arrows,
                 std::vector<Arrow> units, std::vector<Arrow> inverses,
                 std::span<const CompositionEntry> composition);

  std::size_t num_objects() const { return object_names_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }

  const std::string& name(Object x) const { return object_names_[index(x)]; }
  const std::string& name(Arrow g) const { return arrows_[index(g)].name; }

  Object source(Arrow g) const { return arrows_[index(g)].source; }
  Object target(Arrow g) const { return arrows_[index(g)].target; }
  Arrow unit(Object x) const { return units_[index(x)]; }
  Arrow inverse(Arrow g) const { return inverses_[index(g)]; }

  // gh if source(g) == target(h) and the table has an entry.
  std::optional<Arrow> compose(Arrow g, Arrow h) const;
  // Raw table lookup, ignoring composability; used by validation.
  std::optional<Arrow> table_entry(Arrow g, Arrow h) const;
  // gh, throwing InvalidArgument when undefined.
  Arrow product(Arrow g, Arrow h) const;

  bool is_unit(Arrow g) const;

  std::optional<Object> find_object(std::string_view name) const;
  std::optional<Arrow> find_arrow(std::string_view name) const;
  Object object_named(std::string_view name) const;
  Arrow arrow_named(std::string_view name) const;

  std::vector<Object> objects() const;
  std::vector<Arrow> arrows() const;
  // Arrows with the given source and target, in declaration order.
  std::vector<Arrow> hom(Object from, Object to) const;

  friend bool operator==(const FiniteGroupoid&, const FiniteGroupoid&) = default;

 private:
  std::vector<std::string> object_names_;
  std::vector<ArrowSpec> arrows_;
  std::vector<Arrow> units_;
  std::vector<Arrow> inverses_;
  std::vector<std::optional<Arrow>> table_;  // num_arrows^2, row = left factor
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

inline GroupoidPtr share(FiniteGroupoid g) {
  return std::make_shared<const FiniteGroupoid>(std::move(g));
}

// Groupoid axioms in a fixed order: unit, composition (defined exactly on
// composable pairs), composition endpoints, identity law, inverse law,
// associativity. Reports the first violation.
Report validate_groupoid(const FiniteGroupoid& g);

// A subset of the unit space. Every subset is compact open at finite scale.
// Sorted, duplicate-free.
using CompactOpen = std::vector<Object>;

CompactOpen make_compact_open(const FiniteGroupoid& g, std::vector<Object> points);
CompactOpen all_objects(const FiniteGroupoid& g);
// All subsets of the object set, smallest first.
std::vector<CompactOpen> enumerate_compact_opens(const FiniteGroupoid& g);

/// A compact open bisection: an arrow set on which source and target are
/// injective. Arrows are kept sorted.
class Bisection {
 public:
  Bisection() = default;

  // Throws InvalidArgument if the set is not a bisection or names an
  // unknown arrow.
  static Bisection from_arrows(const FiniteGroupoid& g, std::vector<Arrow> arrows);
  static Bisection singleton(const FiniteGroupoid& g, Arrow a);
  // {unit(x) : x in points}.
  static Bisection units(const FiniteGroupoid& g, const CompactOpen& points);

  const std::vector<Arrow>& arrows() const { return arrows_; }
  bool empty() const { return arrows_.empty(); }
  std::size_t size() const { return arrows_.size(); }
  bool contains(Arrow a) const;

  friend auto operator<=>(const Bisection&, const Bisection&) = default;

 private:
  explicit Bisection(std::vector<Arrow> arrows) : arrows_(std::move(arrows)) {}

  friend Bisection bisection_product(const FiniteGroupoid&, const Bisection&,
                                     const Bisection&);
  friend Bisection bisection_inverse(const FiniteGroupoid&, const Bisection&);

  std::vector<Arrow> arrows_;
};

bool is_bisection(const FiniteGroupoid& g, std::span<const Arrow> arrows);
Bisection bisection_product(const FiniteGroupoid& g, const Bisection& u,
                            const Bisection& v);
Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& u);
// True when every arrow is a unit.
bool is_idempotent(const FiniteGroupoid& g, const Bisection& u);
// source(U), i.e. the unit set U^{-1}U read as objects.
CompactOpen source_set(const FiniteGroupoid& g, const Bisection& u);
// target(U) = UU^{-1}.
CompactOpen target_set(const FiniteGroupoid& g, const Bisection& u);

inline constexpr std::size_t kBisectionArrowLimit = 16;

// Every bisection, ordered by size then lexicographically by arrow index.
// Throws SizeLimitExceeded above kBisectionArrowLimit arrows.
std::vector<Bisection> enumerate_bisections(const FiniteGroupoid& g);

std::string to_string(const FiniteGroupoid& g, const Bisection& u);
std::string to_string(const FiniteGroupoid& g, const CompactOpen& u);

// The full subgroupoid on U: objects of U and the arrows with source and
// target in U, both in ambient declaration order.
FiniteGroupoid restrict_groupoid(const FiniteGroupoid& g, const CompactOpen& u);
// For each arrow of restrict_groupoid(g, u), the ambient arrow.
std::vector<Arrow> restriction_embedding(const FiniteGroupoid& g, const CompactOpen& u);

// Connected components (objects joined by an arrow), each sorted, ordered
// by least member.
std::vector<std::vector<Object>> connected_components(const FiniteGroupoid& g);

}  // namespace etale
