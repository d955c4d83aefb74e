#include "etale/equivalence.hpp"

#include "etale/error.hpp"

namespace etale {

// ---- Gamma_c -------------------------------------------------------------

std::vector<std::size_t> block_offsets(const GSheaf& e) {
  std::vector<std::size_t> off(e.groupoid().num_objects() + 1, 0);
  for (Object x : e.groupoid().objects()) off[index(x) + 1] = off[index(x)] + e.stalk_rank(x);
  return off;
}

Vector section_vector(const GSheaf& e, const Section& s) {
  const auto& G = e.groupoid();
  if (s.values.size() != G.num_objects()) {
    throw DimensionError("section has " + std::to_string(s.values.size()) + " values for " +
                         std::to_string(G.num_objects()) + " objects");
  }
  Vector v;
  for (Object x : G.objects()) {
    const Vector& sx = s.values[index(x)];
    if (sx.size() != e.stalk_rank(x)) {
      throw DimensionError("section value at " + G.name(x) + " has length " +
                           std::to_string(sx.size()));
    }
    v.insert(v.end(), sx.begin(), sx.end());
  }
  return v;
}

Section section_from_vector(const GSheaf& e, const Vector& v) {
  auto off = block_offsets(e);
  if (v.size() != off.back()) {
    throw DimensionError("vector of length " + std::to_string(v.size()) +
                         " is not a section (total rank " + std::to_string(off.back()) + ")");
  }
  Section s;
  for (Object x : e.groupoid().objects()) {
    s.values.emplace_back(v.begin() + off[index(x)], v.begin() + off[index(x) + 1]);
  }
  return s;
}

Section act_section(const GSheaf& e, const Section& s, const AlgebraElement& f) {
  const auto& G = e.groupoid();
  const Ring& ring = e.ring();
  section_vector(e, s);  // shape check
  Section out;
  for (Object x : G.objects()) out.values.emplace_back(e.stalk_rank(x), ring.zero());
  for (const auto& [g, c] : f.coefficients()) {
    Vector moved = vec_scale(ring, c, apply_transport(e, s.values[index(G.target(g))], g));
    auto& slot = out.values[index(G.source(g))];
    slot = vec_add(ring, slot, moved);
  }
  return out;
}

GModule gamma_c(const GSheaf& e) {
  const auto& G = e.groupoid();
  auto off = block_offsets(e);
  const std::size_t n = off.back();
  std::vector<Matrix> action;
  for (Arrow g : G.arrows()) {
    Matrix a(e.ring(), n, n);
    a.set_block(off[index(G.target(g))], off[index(G.source(g))], e.transport(g));
    action.push_back(std::move(a));
  }
  return GModule(e.groupoid_ptr(), e.ring(), n, std::move(action));
}

GModuleHom gamma_c_mor(const GSheafMor& phi) {
  const auto& src = phi.source();
  const auto& tgt = phi.target();
  auto so = block_offsets(src);
  auto to = block_offsets(tgt);
  Matrix m(src.ring(), so.back(), to.back());
  for (Object x : src.groupoid().objects()) m.set_block(so[index(x)], to[index(x)], phi.at(x));
  return GModuleHom(gamma_c(src), gamma_c(tgt), std::move(m));
}

// ---- Germs -----------------------------------------------------------------

Germ germ_at(const GModule& m, const Vector& v, Object x) {
  if (v.size() != m.rank()) {
    throw DimensionError("germ_at: vector of length " + std::to_string(v.size()) +
                         " in a rank-" + std::to_string(m.rank()) + " module");
  }
  return Germ{x, v, vec_mul(v, m.unit_idempotent(x))};
}

bool is_zero(const Germ& germ) { return is_zero(germ.normal_form); }

Germ germ_transport(const GModule& m, const Germ& germ, Arrow g) {
  const auto& G = m.groupoid();
  if (germ.base != G.target(g)) {
    throw InvalidArgument("germ_transport: germ at " + G.name(germ.base) + " cannot move along " +
                          G.name(g) + " (target " + G.name(G.target(g)) + ")");
  }
  return germ_at(m, vec_mul(germ.representative, m.action(g)), G.source(g));
}

Germ germ_transport_along(const GModule& m, const Germ& germ, const Bisection& u, Arrow g) {
  const auto& G = m.groupoid();
  if (!u.contains(g)) throw InvalidArgument("germ_transport_along: bisection misses " + G.name(g));
  if (germ.base != G.target(g)) {
    throw InvalidArgument("germ_transport_along: germ at " + G.name(germ.base) +
                          " cannot move along " + G.name(g));
  }
  auto chi = char_fn(m.groupoid_ptr(), u, m.ring());
  return germ_at(m, act(m, germ.representative, chi), G.source(g));
}

// ---- Sh ----------------------------------------------------------------------

Vector Sheafification::coordinates(const Germ& germ) const {
  auto c = solve_in_row_space(bases[index(germ.base)], germ.normal_form);
  if (!c) throw std::logic_error("germ normal form outside the stalk image");
  return *c;
}

Vector Sheafification::representative(Object x, const Vector& coords) const {
  return vec_mul(coords, bases[index(x)]);
}

Sheafification sheafify(const GModule& m) {
  const auto& G = m.groupoid();
  const Ring& ring = m.ring();
  if (!ring.supports_linear_algebra()) {
    throw UnsupportedRing("sheafify needs a field or Z, got " + ring.name());
  }
  std::vector<Matrix> bases;
  std::vector<std::size_t> ranks;
  for (Object x : G.objects()) {
    bases.push_back(echelon_form(m.unit_idempotent(x)));
    ranks.push_back(bases.back().rows());
  }
  std::vector<Matrix> transports;
  for (Arrow g : G.arrows()) {
    const Matrix& from = bases[index(G.target(g))];
    const Matrix& to = bases[index(G.source(g))];
    Matrix b(ring, from.rows(), to.rows());
    for (std::size_t i = 0; i < from.rows(); ++i) {
      auto c = solve_in_row_space(to, vec_mul(from.row(i), m.action(g)));
      if (!c) {
        throw InvalidArgument("sheafify: action of " + G.name(g) +
                              " leaves the stalk image; validate the module first");
      }
      for (std::size_t j = 0; j < c->size(); ++j) b.set(i, j, (*c)[j]);
    }
    transports.push_back(std::move(b));
  }
  GSheaf sheaf(m.groupoid_ptr(), ring, std::move(ranks), std::move(transports));
  return Sheafification{m, std::move(sheaf), std::move(bases)};
}

GSheafMor sh_mor(const GModuleHom& f, const Sheafification& source,
                 const Sheafification& target) {
  const auto& G = f.source().groupoid();
  const Ring& ring = f.source().ring();
  std::vector<Matrix> maps;
  for (Object x : G.objects()) {
    const Matrix& from = source.bases[index(x)];
    const Matrix& to = target.bases[index(x)];
    Matrix phi(ring, from.rows(), to.rows());
    for (std::size_t i = 0; i < from.rows(); ++i) {
      // [m]_x -> [f(m)]_x
      auto c = solve_in_row_space(to, vec_mul(from.row(i), f.matrix()));
      if (!c) {
        throw InvalidArgument("sh_mor: image of a germ at " + G.name(x) +
                              " leaves the target stalk; validate the hom first");
      }
      for (std::size_t j = 0; j < c->size(); ++j) phi.set(i, j, (*c)[j]);
    }
    maps.push_back(std::move(phi));
  }
  return GSheafMor(source.sheaf, target.sheaf, std::move(maps));
}

GSheafMor sh_mor(const GModuleHom& f) {
  return sh_mor(f, sheafify(f.source()), sheafify(f.target()));
}

// ---- eta / epsilon -------------------------------------------------------------

namespace {

// Row i = (coordinates of [e_i]_x)_x.
Matrix eta_matrix(const Sheafification& sh) {
  const auto& m = sh.module;
  const auto& G = m.groupoid();
  auto off = block_offsets(sh.sheaf);
  Matrix h(m.ring(), m.rank(), off.back());
  for (Object x : G.objects()) {
    const Matrix& e = m.unit_idempotent(x);
    for (std::size_t i = 0; i < m.rank(); ++i) {
      auto c = sh.coordinates(Germ{x, e.row(i), e.row(i)});
      for (std::size_t j = 0; j < c.size(); ++j) h.set(i, off[index(x)] + j, c[j]);
    }
  }
  return h;
}

// The partition argument: lift s(x) to m_x and glue m = sum m_x chi_{x}.
Vector partition_preimage(const Sheafification& sh, const Section& s) {
  const auto& m = sh.module;
  Vector out(m.rank(), m.ring().zero());
  for (Object x : m.groupoid().objects()) {
    Vector mx = sh.representative(x, s.values[index(x)]);
    out = vec_add(m.ring(), out, vec_mul(mx, m.unit_idempotent(x)));
  }
  return out;
}

std::vector<Matrix> epsilon_matrices(const Sheafification& sh, const GSheaf& e) {
  auto off = block_offsets(e);
  std::vector<Matrix> eps;
  for (Object x : e.groupoid().objects()) {
    const Matrix& b = sh.bases[index(x)];
    eps.push_back(b.block(0, off[index(x)], b.rows(), e.stalk_rank(x)));
  }
  return eps;
}

std::string first_bad_row(const Matrix& a, const Matrix& b) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (a.row(i) != b.row(i)) return "row " + std::to_string(i);
  }
  return "shape";
}

}  // namespace

CertificateResult eta(const Sheafification& sh) {
  const auto& m = sh.module;
  const auto& G = m.groupoid();
  GModule target = gamma_c(sh.sheaf);
  Matrix h = eta_matrix(sh);
  NaturalIsoCertificate cert{IsoDirection::eta, {h}, {}, {}};

  for (Arrow g : G.arrows()) {
    if (!(m.action(g) * h == h * target.action(g))) {
      return {Report::fail("homomorphism", G.name(g)), std::nullopt};
    }
  }
  cert.checks.push_back("homomorphism");

  if (kernel_basis(h).rows() != 0) {
    return {Report::fail("injectivity", "nonzero kernel"), std::nullopt};
  }
  cert.checks.push_back("injectivity");

  Matrix inv(m.ring(), target.rank(), m.rank());
  for (std::size_t j = 0; j < target.rank(); ++j) {
    Vector unit(target.rank(), m.ring().zero());
    unit[j] = m.ring().one();
    Vector pre = partition_preimage(sh, section_from_vector(sh.sheaf, unit));
    if (vec_mul(pre, h) != unit) {
      return {Report::fail("surjectivity", "section " + std::to_string(j)), std::nullopt};
    }
    for (std::size_t i = 0; i < pre.size(); ++i) inv.set(j, i, pre[i]);
  }
  cert.checks.push_back("surjectivity");
  cert.inverse_components.push_back(std::move(inv));
  return {Report::pass(), std::move(cert)};
}

CertificateResult eta(const GModule& m) { return eta(sheafify(m)); }

CertificateResult epsilon(const GSheaf& e) {
  const auto& G = e.groupoid();
  Sheafification sh = sheafify(gamma_c(e));
  auto off = block_offsets(e);
  NaturalIsoCertificate cert{IsoDirection::epsilon, epsilon_matrices(sh, e), {}, {}};

  // p-compatibility: a germ at x only remembers the value at x.
  for (Object x : G.objects()) {
    const Matrix& b = sh.bases[index(x)];
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) {
        bool inside = j >= off[index(x)] && j < off[index(x) + 1];
        if (!inside && b(i, j) != 0) return {Report::fail("support", G.name(x)), std::nullopt};
      }
    }
  }
  cert.checks.push_back("support");

  for (Object x : G.objects()) {
    auto inv = inverse(cert.components[index(x)]);
    if (!inv) return {Report::fail("bijectivity", G.name(x)), std::nullopt};
    cert.inverse_components.push_back(std::move(*inv));
  }
  cert.checks.push_back("bijectivity");

  for (Arrow g : G.arrows()) {
    if (!(sh.sheaf.transport(g) * cert.components[index(G.source(g))] ==
          cert.components[index(G.target(g))] * e.transport(g))) {
      return {Report::fail("equivariance", G.name(g)), std::nullopt};
    }
  }
  cert.checks.push_back("equivariance");
  return {Report::pass(), std::move(cert)};
}

Report check_naturality(const GModuleHom& f) {
  // a square only means something for a morphism
  if (Report r = validate_hom(f); !r) return r;
  Sheafification src = sheafify(f.source());
  Sheafification tgt = sheafify(f.target());
  Matrix hm = eta_matrix(src);
  Matrix hn = eta_matrix(tgt);
  Matrix shf = gamma_c_mor(sh_mor(f, src, tgt)).matrix();
  Matrix lhs = f.matrix() * hn;
  Matrix rhs = hm * shf;
  if (!(lhs == rhs)) return Report::fail("naturality", first_bad_row(lhs, rhs));
  return Report::pass();
}

Report check_naturality(const GSheafMor& phi) {
  if (Report r = validate_sheaf_morphism(phi); !r) return r;
  const auto& G = phi.source().groupoid();
  Sheafification src = sheafify(gamma_c(phi.source()));
  Sheafification tgt = sheafify(gamma_c(phi.target()));
  auto eps_src = epsilon_matrices(src, phi.source());
  auto eps_tgt = epsilon_matrices(tgt, phi.target());
  GSheafMor sh = sh_mor(gamma_c_mor(phi), src, tgt);
  for (Object x : G.objects()) {
    if (!(sh.at(x) * eps_tgt[index(x)] == eps_src[index(x)] * phi.at(x))) {
      return Report::fail("naturality", G.name(x));
    }
  }
  return Report::pass();
}

}  // namespace etale
