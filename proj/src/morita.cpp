#include "etale/morita.hpp"

#include "etale/error.hpp"
#include "random_family.hpp"

namespace etale {

Report validate_functor(const GroupoidFunctor& f) {
  if (!f.source || !f.target) return Report::fail("shape", "null groupoid");
  const auto& S = *f.source;
  const auto& T = *f.target;
  if (f.obj_map.size() != S.num_objects() || f.arr_map.size() != S.num_arrows()) {
    return Report::fail("shape", "map sizes do not match the source groupoid");
  }
  for (Object x : S.objects()) {
    if (index(f(x)) >= T.num_objects()) return Report::fail("shape", S.name(x));
  }
  for (Arrow g : S.arrows()) {
    if (index(f(g)) >= T.num_arrows()) return Report::fail("shape", S.name(g));
  }
  for (Arrow g : S.arrows()) {
    if (T.source(f(g)) != f(S.source(g))) return Report::fail("source", S.name(g));
  }
  for (Arrow g : S.arrows()) {
    if (T.target(f(g)) != f(S.target(g))) return Report::fail("target", S.name(g));
  }
  for (Object x : S.objects()) {
    if (f(S.unit(x)) != T.unit(f(x))) return Report::fail("units", S.name(x));
  }
  for (Arrow g : S.arrows()) {
    for (Arrow h : S.arrows()) {
      auto gh = S.compose(g, h);
      if (gh && T.compose(f(g), f(h)) != f(*gh)) {
        return Report::fail("composition", S.name(g) + "*" + S.name(h));
      }
    }
  }
  for (Arrow g : S.arrows()) {
    if (f(S.inverse(g)) != T.inverse(f(g))) return Report::fail("inverses", S.name(g));
  }
  return Report::pass();
}

GroupoidFunctor identity_functor(const GroupoidPtr& g) {
  GroupoidFunctor f{g, g, g->objects(), g->arrows()};
  return f;
}

GroupoidFunctor inclusion_functor(const GroupoidPtr& g, const CompactOpen& u) {
  auto pts = make_compact_open(*g, u);
  return GroupoidFunctor{share(restrict_groupoid(*g, pts)), g, pts,
                         restriction_embedding(*g, pts)};
}

GroupoidFunctor compose(const GroupoidFunctor& first, const GroupoidFunctor& second) {
  if (!(*first.target == *second.source)) {
    throw InvalidArgument("compose: functors do not compose");
  }
  GroupoidFunctor out{first.source, second.target, {}, {}};
  for (Object x : first.obj_map) out.obj_map.push_back(second(x));
  for (Arrow g : first.arr_map) out.arr_map.push_back(second(g));
  return out;
}

Report is_essential_equivalence(const GroupoidFunctor& f) {
  if (auto r = validate_functor(f); !r) return r;
  const auto& S = *f.source;
  const auto& T = *f.target;
  for (Object y : T.objects()) {
    bool reached = false;
    for (Object x : S.objects()) {
      if (!T.hom(f(x), y).empty()) {
        reached = true;
        break;
      }
    }
    if (!reached) return Report::fail("essential surjectivity", T.name(y));
  }
  for (Object x : S.objects()) {
    for (Object y : S.objects()) {
      auto here = S.hom(x, y);
      auto there = T.hom(f(x), f(y));
      std::vector<bool> hit(T.num_arrows(), false);
      bool injective = true;
      for (Arrow g : here) {
        if (hit[index(f(g))]) injective = false;
        hit[index(f(g))] = true;
      }
      if (!injective || here.size() != there.size()) {
        return Report::fail("full faithfulness", S.name(x) + "," + S.name(y));
      }
    }
  }
  return Report::pass();
}

GSheaf pullback_sheaf(const GroupoidFunctor& f, const GSheaf& e) {
  if (!(e.groupoid() == *f.target)) throw InvalidArgument("pullback_sheaf: sheaf not over the target");
  std::vector<std::size_t> ranks;
  for (Object x : f.obj_map) ranks.push_back(e.stalk_rank(x));
  std::vector<Matrix> transports;
  for (Arrow g : f.arr_map) transports.push_back(e.transport(g));
  return GSheaf(f.source, e.ring(), std::move(ranks), std::move(transports));
}

GSheafMor pullback_morphism(const GroupoidFunctor& f, const GSheafMor& phi) {
  std::vector<Matrix> maps;
  for (Object x : f.obj_map) maps.push_back(phi.at(x));
  return GSheafMor(pullback_sheaf(f, phi.source()), pullback_sheaf(f, phi.target()),
                   std::move(maps));
}

QuasiInverse::QuasiInverse(GroupoidFunctor f) : f_(std::move(f)) {
  if (auto r = is_essential_equivalence(f_); !r) {
    throw InvalidArgument("quasi-inverse needs an essential equivalence: " + r.summary());
  }
  const auto& S = *f_.source;
  const auto& T = *f_.target;
  for (Object y : T.objects()) {
    for (Object x : S.objects()) {
      auto arrows = T.hom(f_(x), y);
      if (!arrows.empty()) {
        sigma_.push_back(x);
        alpha_.push_back(arrows.front());
        break;
      }
    }
  }
  auto preimage = [&](Object from, Object to, Arrow wanted) {
    for (Arrow k : S.hom(from, to)) {
      if (f_(k) == wanted) return k;
    }
    throw std::logic_error("full faithfulness broke while lifting " + T.name(wanted));
  };
  for (Arrow h : T.arrows()) {
    Object y = T.target(h);
    Object y2 = T.source(h);
    Arrow want = T.product(T.product(T.inverse(alpha(y)), h), alpha(y2));
    lift_.push_back(preimage(sigma(y2), sigma(y), want));
  }
  for (Object x : S.objects()) {
    Object fx = f_(x);
    beta_.push_back(preimage(sigma(fx), x, alpha(fx)));
  }
}

GSheaf QuasiInverse::apply(const GSheaf& e) const {
  if (!(e.groupoid() == *f_.source)) throw InvalidArgument("quasi-inverse: sheaf not over the source");
  const auto& T = *f_.target;
  std::vector<std::size_t> ranks;
  for (Object y : T.objects()) ranks.push_back(e.stalk_rank(sigma(y)));
  std::vector<Matrix> transports;
  for (Arrow h : T.arrows()) transports.push_back(e.transport(lift(h)));
  return GSheaf(f_.target, e.ring(), std::move(ranks), std::move(transports));
}

GSheafMor QuasiInverse::apply(const GSheafMor& phi) const {
  std::vector<Matrix> maps;
  for (Object y : f_.target->objects()) maps.push_back(phi.at(sigma(y)));
  return GSheafMor(apply(phi.source()), apply(phi.target()), std::move(maps));
}

GSheafMor QuasiInverse::unit(const GSheaf& e) const {
  std::vector<Matrix> maps;
  for (Object x : f_.source->objects()) maps.push_back(e.transport(beta_[index(x)]));
  return GSheafMor(e, pullback_sheaf(f_, apply(e)), std::move(maps));
}

GSheafMor QuasiInverse::counit(const GSheaf& e) const {
  std::vector<Matrix> maps;
  for (Object y : f_.target->objects()) maps.push_back(e.transport(alpha(y)));
  return GSheafMor(e, apply(pullback_sheaf(f_, e)), std::move(maps));
}

GSheaf pullback_quasi_inverse(const GroupoidFunctor& f, const GSheaf& e) {
  return QuasiInverse(f).apply(e);
}

Report validate_span(const MoritaSpan& span) {
  if (!span.left.source || !span.right.source || !(*span.left.source == *span.right.source)) {
    return Report::fail("apex", "legs start at different groupoids");
  }
  if (auto r = is_essential_equivalence(span.left); !r) {
    return Report::fail("left leg: " + r.check, r.witness);
  }
  if (auto r = is_essential_equivalence(span.right); !r) {
    return Report::fail("right leg: " + r.check, r.witness);
  }
  return Report::pass();
}

GModule module_transport(const MoritaSpan& span, const GModule& m) {
  QuasiInverse q(span.right);
  return gamma_c(q.apply(pullback_sheaf(span.left, sheafify(m).sheaf)));
}

GModuleHom hom_transport(const MoritaSpan& span, const GModuleHom& f) {
  QuasiInverse q(span.right);
  return gamma_c_mor(q.apply(pullback_morphism(span.left, sh_mor(f))));
}

CertificateResult round_trip(const MoritaSpan& span, const GModule& m) {
  QuasiInverse ql(span.left);
  QuasiInverse qr(span.right);

  Sheafification sh = sheafify(m);
  GSheaf e1 = pullback_sheaf(span.left, sh.sheaf);
  GSheaf there = qr.apply(e1);
  GModule t = gamma_c(there);
  GSheaf e2 = pullback_sheaf(span.right, sheafify(t).sheaf);
  GModule back = gamma_c(ql.apply(e2));

  auto eta_m = eta(sh);
  if (!eta_m) return {Report::fail("eta: " + eta_m.report.check, eta_m.report.witness), {}};
  auto eps_t = epsilon(there);
  if (!eps_t) return {Report::fail("epsilon: " + eps_t.report.check, eps_t.report.witness), {}};

  GSheafMor counit = ql.counit(sh.sheaf);
  GSheafMor unit = qr.unit(e1);
  const std::pair<const char*, const GSheafMor*> naturals[] = {{"counit", &counit},
                                                               {"unit", &unit}};
  for (const auto& [name, mor] : naturals) {
    if (auto r = validate_sheaf_morphism(*mor); !r) {
      return {Report::fail(std::string(name) + ": " + r.check, r.witness), {}};
    }
    if (!inverse_morphism(*mor)) return {Report::fail(std::string(name), "not invertible"), {}};
  }

  GSheafMor eps_inv(there, sheafify(t).sheaf, eps_t.certificate->inverse_components);
  GSheafMor psi = compose(unit, pullback_morphism(span.right, eps_inv));
  GSheafMor chain = compose(counit, ql.apply(psi));
  if (auto r = validate_sheaf_morphism(chain); !r) {
    return {Report::fail("sheaf chain: " + r.check, r.witness), {}};
  }

  Matrix x = eta_m.certificate->components.front() * gamma_c_mor(chain).matrix();
  GModuleHom iso(m, back, x);
  if (auto r = validate_hom(iso); !r) return {Report::fail("homomorphism", r.witness), {}};
  auto inv = inverse(x);
  if (!inv) return {Report::fail("invertibility", "round-trip map is singular"), {}};
  NaturalIsoCertificate cert{IsoDirection::eta, {x}, {*inv}, {"eta", "epsilon", "unit", "counit",
                                                              "homomorphism", "invertibility"}};
  return {Report::pass(), std::move(cert)};
}

namespace {

Matrix flatten(const Ring& ring, const std::vector<Matrix>& ms, std::size_t entries) {
  std::vector<Vector> rows;
  for (const Matrix& m : ms) {
    Vector v;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    }
    rows.push_back(std::move(v));
  }
  return Matrix::from_rows(ring, rows, entries);
}

}  // namespace

Report hom_bijection(const MoritaSpan& span, const GModule& a, const GModule& b) {
  const Ring& ring = a.ring();
  GModule ta = module_transport(span, a);
  GModule tb = module_transport(span, b);
  const std::size_t entries = ta.rank() * tb.rank();

  auto basis = hom_basis(a, b);
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    GModuleHom tf = hom_transport(span, GModuleHom(a, b, basis[i]));
    if (auto r = validate_hom(tf); !r) {
      return Report::fail("transported hom", "basis " + std::to_string(i) + " at " + r.witness);
    }
    images.push_back(tf.matrix());
  }
  Matrix img = flatten(ring, images, entries);
  if (rank(img) != basis.size()) return Report::fail("faithful", "transported basis is dependent");
  Matrix all = flatten(ring, hom_basis(ta, tb), entries);
  if (!(echelon_form(img) == echelon_form(all))) {
    return Report::fail("full", "transported homs miss part of the target hom-set");
  }
  return Report::pass();
}

bool MoritaReport::passed() const {
  if (!span || !regular) return false;
  for (const auto& s : samples) {
    if (!s.round_trip || !s.hom) return false;
  }
  return true;
}

MoritaReport verify_morita(const MoritaSpan& span, const Ring& ring, std::size_t samples,
                           std::uint64_t seed, std::size_t max_rank) {
  MoritaReport report;
  report.span = validate_span(span);
  if (!report.span) return report;
  if (!ring.supports_linear_algebra()) {
    throw UnsupportedRing("verify_morita needs a field or Z, got " + ring.name());
  }

  const std::pair<const char*, MoritaSpan> directions[] = {{"forward", span},
                                                           {"backward", span.reversed()}};
  std::uint64_t stream = 0;
  for (const auto& [name, dir] : directions) {
    std::vector<GModule> mods;
    for (std::size_t i = 0; i < samples; ++i) {
      mods.push_back(random_module(dir.from(), ring, max_rank, detail::derive_seed(seed, stream++)));
    }
    for (std::size_t i = 0; i < samples; ++i) {
      MoritaSample s;
      s.direction = name;
      s.index = i;
      s.rank = mods[i].rank();
      s.transported_rank = module_transport(dir, mods[i]).rank();
      s.round_trip = round_trip(dir, mods[i]).report;
      s.hom = hom_bijection(dir, mods[i], mods[(i + 1) % samples]);
      report.samples.push_back(std::move(s));
    }
  }
  GModule reg = regular_module(span.from(), ring);
  report.regular_rank = reg.rank();
  report.regular_transported_rank = module_transport(span, reg).rank();
  report.regular = round_trip(span, reg).report;
  return report;
}

}  // namespace etale
