#pragma once

// Seeded generators shared by random_module and random_sheaf. Only the
// mt19937_64 engine is used (its output sequence is fixed by the standard);
// bounded draws are done by hand so results do not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "etale/coeff.hpp"
#include "etale/groupoid.hpp"

namespace etale::detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

  // A small ring element (entries stay small to keep exact arithmetic cheap).
  Scalar scalar(const Ring& ring);
  Scalar unit(const Ring& ring);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// (P, P^{-1}) with P a product of random elementary matrices.
std::pair<Matrix, Matrix> random_invertible(const Ring& ring, std::size_t n, Rng& rng);

struct TransportFamily {
  std::vector<std::size_t> ranks;     // per object
  std::vector<Matrix> transports;     // per arrow: ranks[target] x ranks[source]
};

// Per-object ranks drawn from [0, max_rank], constant on components.
std::vector<std::size_t> random_component_ranks(const FiniteGroupoid& g, std::size_t max_rank,
                                                Rng& rng);

// A functorial family B_g (B_g B_h = B_{gh}) with the given per-object
// ranks: a random representation of the isotropy group at the least object
// of each component, transported along random invertible maps.
TransportFamily random_transport_family(const FiniteGroupoid& g, const Ring& ring,
                                        const std::vector<std::size_t>& ranks, Rng& rng);

// Throws InvalidArgument unless ranks are constant on components.
void require_component_constant(const FiniteGroupoid& g, const std::vector<std::size_t>& ranks);

}  // namespace etale::detail
