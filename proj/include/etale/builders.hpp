#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etale/coeff.hpp"
#include "etale/groupoid.hpp"
#include "etale/gsheaf.hpp"

namespace etale {

// Objects "1".."n", arrows "(i,j)" with target i and source j, listed in
// lexicographic order; (i,j)(j,k) = (i,k). Throws for n < 1.
FiniteGroupoid pair_groupoid(std::size_t n);

// table[a][b] = a*b on elements 0..n-1. Names default to "0".."n-1".
using GroupTable = std::vector<std::vector<std::size_t>>;
GroupTable cyclic_table(std::size_t n);

// One object "*", one arrow per element. Throws InvalidArgument if the
// table is not a group.
FiniteGroupoid group_groupoid(const GroupTable& table, std::vector<std::string> names = {});

// act[g][x] = g.x. Arrows (g,x): x -> g.x, listed g-major; composition
// (g,h.x)(h,x) = (gh,x). Throws InvalidArgument if `act` is not an action.
FiniteGroupoid action_groupoid(const GroupTable& table, const std::vector<std::string>& points,
                               const std::vector<std::vector<std::size_t>>& act,
                               std::vector<std::string> names = {});

struct GraphSpec {
  struct Edge {
    std::string name;  // "e<i>" when left empty
    std::string src;
    std::string dst;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
};

// Objects are the boundary paths (paths ending at a sink, including the
// sinks themselves), sinks in vertex order, then by length, then
// lexicographically by edge index. A length-0 path is named by its vertex,
// a longer one by its edge names run together. Arrows form the pair
// groupoid on the paths of each sink. Throws InvalidArgument on a cycle.
FiniteGroupoid acyclic_graph_groupoid(const GraphSpec& spec);

// Objects and arrows of a followed by those of b. Names must not clash.
FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);

// Valid sheaf with ranks in [0, max_rank] constant on components and
// random invertible transports; deterministic in the seed.
GSheaf random_sheaf(const GroupoidPtr& g, const Ring& ring, std::size_t max_rank,
                    std::uint64_t seed);
GSheaf random_sheaf_with_ranks(const GroupoidPtr& g, const Ring& ring,
                               const std::vector<std::size_t>& stalk_ranks, std::uint64_t seed);

}  // namespace etale
