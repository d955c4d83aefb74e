#include "etale/gsheaf.hpp"

#include <numeric>

#include "etale/error.hpp"
#include "random_family.hpp"

namespace etale {

namespace {

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  return a == b || *a == *b;
}

void require_same_base(const GSheaf& a, const GSheaf& b, const char* op) {
  if (!same_groupoid(a.groupoid_ptr(), b.groupoid_ptr())) {
    throw InvalidArgument(std::string(op) + ": sheaves over different groupoids");
  }
  if (!(a.ring() == b.ring())) {
    throw RingMismatch(std::string(op) + ": " + a.ring().name() + " vs " + b.ring().name());
  }
}

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

GSheaf::GSheaf(GroupoidPtr groupoid, Ring ring, std::vector<std::size_t> stalk_ranks,
               std::vector<Matrix> transports)
    : groupoid_(std::move(groupoid)),
      ring_(ring),
      ranks_(std::move(stalk_ranks)),
      transports_(std::move(transports)) {
  if (!groupoid_) throw InvalidArgument("GSheaf: null groupoid");
  const auto& G = *groupoid_;
  if (ranks_.size() != G.num_objects()) {
    throw DimensionError("GSheaf: " + std::to_string(ranks_.size()) + " stalk ranks for " +
                         std::to_string(G.num_objects()) + " objects");
  }
  if (transports_.size() != G.num_arrows()) {
    throw DimensionError("GSheaf: " + std::to_string(transports_.size()) + " transports for " +
                         std::to_string(G.num_arrows()) + " arrows");
  }
  for (Arrow g : G.arrows()) {
    const Matrix& b = transport(g);
    std::size_t r = stalk_rank(G.target(g));
    std::size_t c = stalk_rank(G.source(g));
    if (b.rows() != r || b.cols() != c) {
      throw DimensionError("GSheaf: transport of " + G.name(g) + " is " +
                           shape(b.rows(), b.cols()) + ", expected " + shape(r, c));
    }
    if (!(b.ring() == ring_)) throw RingMismatch("GSheaf: transport of " + G.name(g));
  }
}

std::size_t GSheaf::total_rank() const {
  return std::accumulate(ranks_.begin(), ranks_.end(), std::size_t{0});
}

bool operator==(const GSheaf& a, const GSheaf& b) {
  return same_groupoid(a.groupoid_, b.groupoid_) && a.ring_ == b.ring_ && a.ranks_ == b.ranks_ &&
         a.transports_ == b.transports_;
}

Report validate_sheaf(const GSheaf& e) {
  const auto& G = e.groupoid();
  for (Object x : G.objects()) {
    if (!e.transport(G.unit(x)).is_identity()) return Report::fail("unit", G.name(G.unit(x)));
  }
  for (Arrow g : G.arrows()) {
    for (Arrow h : G.arrows()) {
      auto gh = G.compose(g, h);
      if (gh && !(e.transport(g) * e.transport(h) == e.transport(*gh))) {
        return Report::fail("composition", G.name(g) + "*" + G.name(h));
      }
    }
  }
  for (Arrow g : G.arrows()) {
    if (!(e.transport(g) * e.transport(G.inverse(g))).is_identity()) {
      return Report::fail("invertibility", G.name(g));
    }
  }
  return Report::pass();
}

Vector apply_transport(const GSheaf& e, const Vector& v, Arrow g) {
  const auto& G = e.groupoid();
  if (v.size() != e.stalk_rank(G.target(g))) {
    throw DimensionError("apply_transport: vector of length " + std::to_string(v.size()) +
                         " is not in the stalk at " + G.name(G.target(g)));
  }
  return vec_mul(v, e.transport(g));
}

GSheaf constant_sheaf(const GroupoidPtr& g, const Ring& ring, std::size_t rank) {
  std::vector<Matrix> transports(g->num_arrows(), Matrix::identity(ring, rank));
  return GSheaf(g, ring, std::vector<std::size_t>(g->num_objects(), rank), std::move(transports));
}

GSheaf zero_sheaf(const GroupoidPtr& g, const Ring& ring) { return constant_sheaf(g, ring, 0); }

GSheaf direct_sum(const GSheaf& a, const GSheaf& b) {
  require_same_base(a, b, "direct_sum");
  std::vector<std::size_t> ranks;
  for (Object x : a.groupoid().objects()) ranks.push_back(a.stalk_rank(x) + b.stalk_rank(x));
  std::vector<Matrix> transports;
  for (Arrow g : a.groupoid().arrows()) {
    transports.push_back(direct_sum(a.transport(g), b.transport(g)));
  }
  return GSheaf(a.groupoid_ptr(), a.ring(), std::move(ranks), std::move(transports));
}

GSheafMor::GSheafMor(GSheaf source, GSheaf target, std::vector<Matrix> maps)
    : source_(std::move(source)), target_(std::move(target)), maps_(std::move(maps)) {
  require_same_base(source_, target_, "GSheafMor");
  const auto& G = source_.groupoid();
  if (maps_.size() != G.num_objects()) {
    throw DimensionError("GSheafMor: " + std::to_string(maps_.size()) + " maps for " +
                         std::to_string(G.num_objects()) + " objects");
  }
  for (Object x : G.objects()) {
    const Matrix& m = at(x);
    if (m.rows() != source_.stalk_rank(x) || m.cols() != target_.stalk_rank(x)) {
      throw DimensionError("GSheafMor: map at " + G.name(x) + " is " + shape(m.rows(), m.cols()) +
                           ", expected " + shape(source_.stalk_rank(x), target_.stalk_rank(x)));
    }
  }
}

Report validate_sheaf_morphism(const GSheafMor& phi) {
  const auto& G = phi.source().groupoid();
  for (Arrow g : G.arrows()) {
    if (!(phi.at(G.target(g)) * phi.target().transport(g) ==
          phi.source().transport(g) * phi.at(G.source(g)))) {
      return Report::fail("equivariance", G.name(g));
    }
  }
  return Report::pass();
}

GSheafMor identity_morphism(const GSheaf& e) {
  std::vector<Matrix> maps;
  for (Object x : e.groupoid().objects()) maps.push_back(Matrix::identity(e.ring(), e.stalk_rank(x)));
  return GSheafMor(e, e, std::move(maps));
}

GSheafMor zero_morphism(const GSheaf& source, const GSheaf& target) {
  std::vector<Matrix> maps;
  for (Object x : source.groupoid().objects()) {
    maps.emplace_back(source.ring(), source.stalk_rank(x), target.stalk_rank(x));
  }
  return GSheafMor(source, target, std::move(maps));
}

GSheafMor compose(const GSheafMor& first, const GSheafMor& second) {
  if (!(first.target() == second.source())) {
    throw InvalidArgument("compose: target of the first morphism is not the source of the second");
  }
  std::vector<Matrix> maps;
  for (Object x : first.source().groupoid().objects()) maps.push_back(first.at(x) * second.at(x));
  return GSheafMor(first.source(), second.target(), std::move(maps));
}

std::optional<GSheafMor> inverse_morphism(const GSheafMor& phi) {
  std::vector<Matrix> maps;
  for (Object x : phi.source().groupoid().objects()) {
    auto inv = inverse(phi.at(x));
    if (!inv) return std::nullopt;
    maps.push_back(std::move(*inv));
  }
  return GSheafMor(phi.target(), phi.source(), std::move(maps));
}

std::vector<GSheafMor> morphism_basis(const GSheaf& a, const GSheaf& b) {
  require_same_base(a, b, "morphism_basis");
  const auto& G = a.groupoid();
  const Ring& ring = a.ring();

  // Variables: entries of every phi_x, laid out object by object.
  std::vector<std::size_t> offset(G.num_objects() + 1, 0);
  for (Object x : G.objects()) {
    offset[index(x) + 1] = offset[index(x)] + a.stalk_rank(x) * b.stalk_rank(x);
  }
  const std::size_t vars = offset.back();
  std::vector<GSheafMor> out;
  if (vars == 0) return out;

  auto var = [&](Object x, std::size_t i, std::size_t j) {
    return offset[index(x)] + i * b.stalk_rank(x) + j;
  };
  std::size_t cols = 0;
  for (Arrow g : G.arrows()) cols += a.stalk_rank(G.target(g)) * b.stalk_rank(G.source(g));
  Matrix k(ring, vars, cols);
  std::size_t col = 0;
  for (Arrow g : G.arrows()) {
    const Object r = G.target(g);
    const Object d = G.source(g);
    const Matrix& bt = b.transport(g);  // n^b_r x n^b_d
    const Matrix& bs = a.transport(g);  // n^a_r x n^a_d
    // (phi_r bt - bs phi_d)[p][q] = 0
    for (std::size_t p = 0; p < a.stalk_rank(r); ++p) {
      for (std::size_t q = 0; q < b.stalk_rank(d); ++q, ++col) {
        for (std::size_t i = 0; i < b.stalk_rank(r); ++i) {
          if (bt(i, q) != 0) k.set(var(r, p, i), col, ring.add(k(var(r, p, i), col), bt(i, q)));
        }
        for (std::size_t i = 0; i < a.stalk_rank(d); ++i) {
          if (bs(p, i) != 0) k.set(var(d, i, q), col, ring.sub(k(var(d, i, q), col), bs(p, i)));
        }
      }
    }
  }
  Matrix sols = kernel_basis(k);
  for (std::size_t s = 0; s < sols.rows(); ++s) {
    std::vector<Matrix> maps;
    for (Object x : G.objects()) {
      Matrix m(ring, a.stalk_rank(x), b.stalk_rank(x));
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, sols(s, var(x, i, j)));
      }
      maps.push_back(std::move(m));
    }
    out.emplace_back(a, b, std::move(maps));
  }
  return out;
}

GSheafMor random_morphism(const GSheaf& a, const GSheaf& b, std::uint64_t seed) {
  detail::Rng rng(seed);
  GSheafMor acc = zero_morphism(a, b);
  std::vector<Matrix> maps = acc.maps();
  for (const auto& basis : morphism_basis(a, b)) {
    Scalar c = rng.scalar(a.ring());
    for (std::size_t i = 0; i < maps.size(); ++i) maps[i] = maps[i] + scale(c, basis.maps()[i]);
  }
  return GSheafMor(a, b, std::move(maps));
}

}  // namespace etale
