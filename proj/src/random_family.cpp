#include "random_family.hpp"

#include <algorithm>

#include "etale/error.hpp"

namespace etale::detail {

Scalar Rng::scalar(const Ring& ring) {
  if (ring.kind() == RingKind::modular) {
    auto m = ring.modulus();
    return ring.from_int(static_cast<long>(next() % m));
  }
  return ring.from_int(static_cast<long>(below(5)) - 2);
}

Scalar Rng::unit(const Ring& ring) {
  switch (ring.kind()) {
    case RingKind::integer:
      return ring.from_int(below(2) ? 1 : -1);
    case RingKind::rational: {
      static const long num[] = {1, -1, 2, -2, 1, -1};
      static const long den[] = {1, 1, 1, 1, 2, 2};
      auto i = below(6);
      return Scalar(num[i], den[i]);
    }
    case RingKind::modular:
      for (;;) {
        Scalar c = ring.from_int(static_cast<long>(1 + next() % (ring.modulus() - 1)));
        if (ring.is_unit(c)) return c;
      }
  }
  return ring.one();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::pair<Matrix, Matrix> random_invertible(const Ring& ring, std::size_t n, Rng& rng) {
  Matrix p = Matrix::identity(ring, n);
  Matrix p_inv = Matrix::identity(ring, n);
  if (n == 0) return {p, p_inv};
  for (std::size_t step = 0; step < 3 * n; ++step) {
    Matrix e = Matrix::identity(ring, n);
    Matrix e_inv = Matrix::identity(ring, n);
    std::size_t i = rng.below(n);
    std::size_t j = rng.below(n);
    if (i == j) {
      Scalar d = rng.unit(ring);
      e.set(i, i, d);
      e_inv.set(i, i, ring.inverse(d));
    } else {
      Scalar c = rng.scalar(ring);
      e.set(i, j, c);
      e_inv.set(i, j, ring.neg(c));
    }
    p = p * e;
    p_inv = e_inv * p_inv;
  }
  return {p, p_inv};
}

std::vector<std::size_t> random_component_ranks(const FiniteGroupoid& g, std::size_t max_rank,
                                                Rng& rng) {
  std::vector<std::size_t> ranks(g.num_objects());
  for (const auto& comp : connected_components(g)) {
    std::size_t r = rng.below(max_rank + 1);
    for (Object x : comp) ranks[index(x)] = r;
  }
  return ranks;
}

void require_component_constant(const FiniteGroupoid& g, const std::vector<std::size_t>& ranks) {
  if (ranks.size() != g.num_objects()) {
    throw InvalidArgument("expected " + std::to_string(g.num_objects()) + " stalk ranks, got " +
                          std::to_string(ranks.size()));
  }
  for (Arrow a : g.arrows()) {
    if (ranks[index(g.source(a))] != ranks[index(g.target(a))]) {
      throw InvalidArgument("stalk ranks must be constant on connected components (arrow " +
                            g.name(a) + ")");
    }
  }
}

namespace {

// Random representation of the isotropy group at `base` in dimension n,
// built from trivial and regular (right translation) blocks and then
// conjugated. Returned per isotropy arrow, indexed by arrow.
std::vector<Matrix> random_isotropy_rep(const FiniteGroupoid& g, const Ring& ring, Object base,
                                        std::size_t n, Rng& rng) {
  auto iso = g.hom(base, base);
  const std::size_t s = iso.size();
  std::vector<std::size_t> pos(g.num_arrows(), SIZE_MAX);
  for (std::size_t k = 0; k < s; ++k) pos[index(iso[k])] = k;

  std::vector<std::size_t> blocks;
  for (std::size_t left = n; left > 0;) {
    if (s > 1 && s <= left && rng.below(2)) {
      blocks.push_back(s);
      left -= s;
    } else {
      blocks.push_back(1);
      left -= 1;
    }
  }
  auto [p, p_inv] = random_invertible(ring, n, rng);
  std::vector<Matrix> rep(g.num_arrows(), Matrix(ring, 0, 0));
  for (Arrow h : iso) {
    Matrix q(ring, n, n);
    std::size_t off = 0;
    for (std::size_t b : blocks) {
      if (b == 1) {
        q.set(off, off, ring.one());
      } else {
        for (std::size_t k = 0; k < s; ++k) {
          Arrow kh = g.product(iso[k], h);
          q.set(off + k, off + pos[index(kh)], ring.one());
        }
      }
      off += b;
    }
    rep[index(h)] = p_inv * q * p;
  }
  return rep;
}

}  // namespace

TransportFamily random_transport_family(const FiniteGroupoid& g, const Ring& ring,
                                        const std::vector<std::size_t>& ranks, Rng& rng) {
  require_component_constant(g, ranks);
  TransportFamily family{ranks, std::vector<Matrix>(g.num_arrows(), Matrix(ring, 0, 0))};
  for (const auto& comp : connected_components(g)) {
    const Object base = comp.front();
    const std::size_t n = ranks[index(base)];
    auto rep = random_isotropy_rep(g, ring, base, n, rng);

    // star[y]: least arrow y -> base; change[y] = (T_y, T_y^{-1}).
    std::vector<Arrow> star(g.num_objects());
    std::vector<std::pair<Matrix, Matrix>> change(g.num_objects(),
                                                  {Matrix(ring, 0, 0), Matrix(ring, 0, 0)});
    for (Object y : comp) {
      auto arrows = g.hom(y, base);
      if (arrows.empty()) throw std::logic_error("component without a spanning star");
      star[index(y)] = arrows.front();
      change[index(y)] = y == base ? std::pair{Matrix::identity(ring, n), Matrix::identity(ring, n)}
                                   : random_invertible(ring, n, rng);
    }
    for (Arrow a : g.arrows()) {
      Object t = g.target(a);
      Object s = g.source(a);
      if (ranks[index(t)] != n || std::find(comp.begin(), comp.end(), t) == comp.end()) continue;
      // a = star[t]^{-1} * h * star[s] with h in the isotropy group at base.
      Arrow h = g.product(g.product(star[index(t)], a), g.inverse(star[index(s)]));
      family.transports[index(a)] =
          change[index(t)].second * rep[index(h)] * change[index(s)].first;
    }
  }
  return family;
}

}  // namespace etale::detail
