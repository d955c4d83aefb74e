#include "etale/gmodule.hpp"

#include "etale/error.hpp"
#include "random_family.hpp"

namespace etale {

namespace {

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  return a == b || *a == *b;
}

void require_same_base(const GModule& a, const GModule& b, const char* op) {
  if (!same_groupoid(a.groupoid_ptr(), b.groupoid_ptr())) {
    throw InvalidArgument(std::string(op) + ": modules over different groupoids");
  }
  if (!(a.ring() == b.ring())) {
    throw RingMismatch(std::string(op) + ": " + a.ring().name() + " vs " + b.ring().name());
  }
}

}  // namespace

GModule::GModule(GroupoidPtr groupoid, Ring ring, std::size_t rank, std::vector<Matrix> action)
    : groupoid_(std::move(groupoid)), ring_(ring), rank_(rank), action_(std::move(action)) {
  if (!groupoid_) throw InvalidArgument("GModule: null groupoid");
  if (action_.size() != groupoid_->num_arrows()) {
    throw DimensionError("GModule: " + std::to_string(action_.size()) + " action matrices for " +
                         std::to_string(groupoid_->num_arrows()) + " arrows");
  }
  for (std::size_t i = 0; i < action_.size(); ++i) {
    const Matrix& a = action_[i];
    if (a.rows() != rank_ || a.cols() != rank_) {
      throw DimensionError("GModule: action of " + groupoid_->name(arrow_at(i)) + " is " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                           ", expected " + std::to_string(rank_) + "x" + std::to_string(rank_));
    }
    if (!(a.ring() == ring_)) {
      throw RingMismatch("GModule: action of " + groupoid_->name(arrow_at(i)) + " over " +
                         a.ring().name());
    }
  }
}

GModule GModule::zero(GroupoidPtr groupoid, Ring ring) {
  std::vector<Matrix> action(groupoid->num_arrows(), Matrix(ring, 0, 0));
  return GModule(std::move(groupoid), ring, 0, std::move(action));
}

Matrix GModule::action_of(const AlgebraElement& f) const {
  if (!same_groupoid(groupoid_, f.groupoid_ptr())) {
    throw InvalidArgument("action_of: element over a different groupoid");
  }
  if (!(f.ring() == ring_)) throw RingMismatch("action_of: " + f.ring().name() + " vs " + ring_.name());
  Matrix out(ring_, rank_, rank_);
  for (const auto& [g, c] : f.coefficients()) out = out + scale(c, action(g));
  return out;
}

bool operator==(const GModule& a, const GModule& b) {
  return same_groupoid(a.groupoid_, b.groupoid_) && a.ring_ == b.ring_ && a.rank_ == b.rank_ &&
         a.action_ == b.action_;
}

Vector act(const GModule& m, const Vector& v, const AlgebraElement& f) {
  if (v.size() != m.rank()) {
    throw DimensionError("act: vector of length " + std::to_string(v.size()) +
                         " on a rank-" + std::to_string(m.rank()) + " module");
  }
  return vec_mul(v, m.action_of(f));
}

Report validate_module(const GModule& m) {
  const auto& G = m.groupoid();
  const Ring& ring = m.ring();
  const std::size_t n = m.rank();

  Matrix sum(ring, n, n);
  for (Object x : G.objects()) {
    const Matrix& e = m.unit_idempotent(x);
    if (!(e * e == e)) return Report::fail("units", G.name(G.unit(x)));
    for (Object y : G.objects()) {
      if (y != x && !(e * m.unit_idempotent(y)).is_zero()) {
        return Report::fail("units", G.name(G.unit(x)) + "," + G.name(G.unit(y)));
      }
    }
    sum = sum + e;
  }
  if (!sum.is_identity()) return Report::fail("units", "sum of unit idempotents");

  for (Arrow g : G.arrows()) {
    const Matrix& a = m.action(g);
    if (!(m.unit_idempotent(G.target(g)) * a * m.unit_idempotent(G.source(g)) == a)) {
      return Report::fail("support", G.name(g));
    }
  }
  for (Arrow g : G.arrows()) {
    for (Arrow h : G.arrows()) {
      auto gh = G.compose(g, h);
      if (gh && !(m.action(g) * m.action(h) == m.action(*gh))) {
        return Report::fail("multiplicativity", G.name(g) + "*" + G.name(h));
      }
    }
  }
  for (Arrow g : G.arrows()) {
    if (!(m.action(g) * m.action(G.inverse(g)) == m.unit_idempotent(G.target(g)))) {
      return Report::fail("invertibility", G.name(g));
    }
  }
  return Report::pass();
}

GModuleHom::GModuleHom(GModule source, GModule target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  require_same_base(source_, target_, "GModuleHom");
  if (matrix_.rows() != source_.rank() || matrix_.cols() != target_.rank()) {
    throw DimensionError("GModuleHom: matrix is " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", expected " +
                         std::to_string(source_.rank()) + "x" + std::to_string(target_.rank()));
  }
  if (!(matrix_.ring() == source_.ring())) throw RingMismatch("GModuleHom: matrix ring");
}

Report validate_hom(const GModuleHom& h) {
  const auto& G = h.source().groupoid();
  for (Arrow g : G.arrows()) {
    if (!(h.source().action(g) * h.matrix() == h.matrix() * h.target().action(g))) {
      return Report::fail("intertwining", G.name(g));
    }
  }
  return Report::pass();
}

GModuleHom identity_hom(const GModule& m) {
  return GModuleHom(m, m, Matrix::identity(m.ring(), m.rank()));
}

GModuleHom zero_hom(const GModule& source, const GModule& target) {
  return GModuleHom(source, target, Matrix(source.ring(), source.rank(), target.rank()));
}

GModuleHom compose(const GModuleHom& first, const GModuleHom& second) {
  if (!(first.target() == second.source())) {
    throw InvalidArgument("compose: target of the first hom is not the source of the second");
  }
  return GModuleHom(first.source(), second.target(), first.matrix() * second.matrix());
}

GModule regular_module(const GroupoidPtr& g, const Ring& ring) {
  const std::size_t n = g->num_arrows();
  std::vector<Matrix> action;
  action.reserve(n);
  for (Arrow a : g->arrows()) {
    Matrix m(ring, n, n);
    // e_h * chi_a = e_{ha}
    for (Arrow h : g->arrows()) {
      if (auto ha = g->compose(h, a)) m.set(index(h), index(*ha), ring.one());
    }
    action.push_back(std::move(m));
  }
  return GModule(g, ring, n, std::move(action));
}

GModule direct_sum(const GModule& a, const GModule& b) {
  require_same_base(a, b, "direct_sum");
  std::vector<Matrix> action;
  for (Arrow g : a.groupoid().arrows()) action.push_back(direct_sum(a.action(g), b.action(g)));
  return GModule(a.groupoid_ptr(), a.ring(), a.rank() + b.rank(), std::move(action));
}

GModule change_basis(const GModule& m, const Matrix& p, const Matrix& p_inverse) {
  if (!(p * p_inverse).is_identity() || !(p_inverse * p).is_identity() || p.rows() != m.rank()) {
    throw InvalidArgument("change_basis: p and p_inverse are not mutually inverse of rank " +
                          std::to_string(m.rank()));
  }
  std::vector<Matrix> action;
  for (const Matrix& a : m.actions()) action.push_back(p_inverse * a * p);
  return GModule(m.groupoid_ptr(), m.ring(), m.rank(), std::move(action));
}

namespace {

GModule module_from_family(const GroupoidPtr& g, const Ring& ring,
                           const detail::TransportFamily& family, detail::Rng& rng) {
  const auto& G = *g;
  std::vector<std::size_t> offset(G.num_objects() + 1, 0);
  for (std::size_t i = 0; i < G.num_objects(); ++i) offset[i + 1] = offset[i] + family.ranks[i];
  const std::size_t n = offset.back();

  std::vector<Matrix> action;
  for (Arrow a : G.arrows()) {
    Matrix m(ring, n, n);
    m.set_block(offset[index(G.target(a))], offset[index(G.source(a))],
                family.transports[index(a)]);
    action.push_back(std::move(m));
  }
  GModule blocky(g, ring, n, std::move(action));
  auto [p, p_inv] = detail::random_invertible(ring, n, rng);
  return change_basis(blocky, p, p_inv);
}

}  // namespace

GModule random_module(const GroupoidPtr& g, const Ring& ring, std::size_t max_rank,
                      std::uint64_t seed) {
  detail::Rng rng(seed);
  auto ranks = detail::random_component_ranks(*g, max_rank, rng);
  auto family = detail::random_transport_family(*g, ring, ranks, rng);
  return module_from_family(g, ring, family, rng);
}

GModule random_module_with_ranks(const GroupoidPtr& g, const Ring& ring,
                                 const std::vector<std::size_t>& stalk_ranks,
                                 std::uint64_t seed) {
  detail::Rng rng(seed);
  auto family = detail::random_transport_family(*g, ring, stalk_ranks, rng);
  return module_from_family(g, ring, family, rng);
}

std::vector<Matrix> hom_basis(const GModule& m, const GModule& n) {
  require_same_base(m, n, "hom_basis");
  const Ring& ring = m.ring();
  const std::size_t a = m.rank();
  const std::size_t b = n.rank();
  const std::size_t arrows = m.groupoid().num_arrows();

  // Unknown F (a x b), variable k*b + q. One column per (arrow, p, q) entry
  // of A_g F - F B_g; solutions are the left kernel.
  Matrix k(ring, a * b, arrows * a * b);
  for (std::size_t g = 0; g < arrows; ++g) {
    const Matrix& A = m.action(arrow_at(g));
    const Matrix& B = n.action(arrow_at(g));
    for (std::size_t p = 0; p < a; ++p) {
      for (std::size_t q = 0; q < b; ++q) {
        const std::size_t col = (g * a + p) * b + q;
        for (std::size_t i = 0; i < a; ++i) {
          if (A(p, i) != 0) k.set(i * b + q, col, ring.add(k(i * b + q, col), A(p, i)));
        }
        for (std::size_t i = 0; i < b; ++i) {
          if (B(i, q) != 0) k.set(p * b + i, col, ring.sub(k(p * b + i, col), B(i, q)));
        }
      }
    }
  }
  std::vector<Matrix> out;
  if (a * b == 0) return out;
  Matrix sols = kernel_basis(k);
  for (std::size_t r = 0; r < sols.rows(); ++r) {
    Matrix f(ring, a, b);
    for (std::size_t i = 0; i < a * b; ++i) f.set(i / b, i % b, sols(r, i));
    out.push_back(std::move(f));
  }
  return out;
}

GModuleHom random_hom(const GModule& m, const GModule& n, std::uint64_t seed) {
  detail::Rng rng(seed);
  Matrix f(m.ring(), m.rank(), n.rank());
  for (const Matrix& basis : hom_basis(m, n)) f = f + scale(rng.scalar(m.ring()), basis);
  return GModuleHom(m, n, f);
}

}  // namespace etale
