#include <doctest.h>

#include "etale/equivalence.hpp"
#include "testkit.hpp"

using namespace etale;
using testkit::make;

namespace {

Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n, Scalar(0));
  v[i] = 1;
  return v;
}

Section random_section(const GSheaf& e, std::mt19937_64& rng) {
  Section s;
  for (Object x : e.groupoid().objects()) {
    s.values.push_back(testkit::random_vector(e.ring(), e.stalk_rank(x), rng));
  }
  return s;
}

// Over F_p, a map is injective iff no nonzero vector maps to zero.
bool injective_by_scan(const Matrix& m, std::uint64_t p) {
  for (const auto& v : testkit::all_vectors(p, m.rows())) {
    if (!is_zero(v) && is_zero(vec_mul(v, m))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("equivalence") {

TEST_CASE("gamma_c examples") {
  Ring q = Ring::rational();
  GModule t = gamma_c(constant_sheaf(testkit::trivial(), q, 1));
  CHECK(t.rank() == 1);
  CHECK(t.action(arrow_at(0)) == make(q, {{1}}));

  auto g = testkit::p2();
  GModule rows = gamma_c(constant_sheaf(g, q, 1));
  CHECK(rows.rank() == 2);
  for (std::size_t i = 1; i <= 2; ++i) {
    for (std::size_t j = 1; j <= 2; ++j) {
      Matrix unit(q, 2, 2);
      unit.set(i - 1, j - 1, 1);
      CHECK(rows.action(g->arrow_named("(" + std::to_string(i) + "," + std::to_string(j) + ")")) == unit);
    }
  }
}

TEST_CASE("sections act through bisections") {
  Ring f5 = Ring::modular(5);
  std::mt19937_64 rng(31);
  for (const auto& [name, g] : testkit::small_groupoids()) {
    CAPTURE(name);
    GSheaf e = random_sheaf(g, f5, 2, rng());
    GModule m = gamma_c(e);
    CHECK(validate_module(m));
    for (const auto& u : enumerate_bisections(*g)) {
      Section s = random_section(e, rng);
      Section su = act_section(e, s, char_fn(g, u, f5));
      CHECK(section_vector(e, su) == act(m, section_vector(e, s), char_fn(g, u, f5)));
      auto domain = source_set(*g, u);
      for (Object x : g->objects()) {
        bool covered = std::find(domain.begin(), domain.end(), x) != domain.end();
        if (!covered) {
          CHECK(is_zero(su.values[index(x)]));
          continue;
        }
        for (Arrow a : u.arrows()) {
          if (g->source(a) == x) {
            CHECK(su.values[index(x)] == apply_transport(e, s.values[index(g->target(a))], a));
          }
        }
      }
    }
  }
}

TEST_CASE("gamma_c on morphisms") {
  auto g = testkit::p2();
  Ring q = Ring::rational();
  GSheaf a = random_sheaf(g, q, 2, 1);
  GSheaf b = random_sheaf(g, q, 2, 2);
  GSheaf c = random_sheaf(g, q, 2, 3);
  CHECK(gamma_c_mor(identity_morphism(a)).matrix().is_identity());
  CHECK(gamma_c_mor(zero_morphism(a, b)).matrix().is_zero());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GSheafMor phi = random_morphism(a, b, seed);
    GSheafMor psi = random_morphism(b, c, seed + 7);
    CHECK(validate_hom(gamma_c_mor(phi)));
    CHECK(gamma_c_mor(compose(phi, psi)).matrix() ==
          gamma_c_mor(phi).matrix() * gamma_c_mor(psi).matrix());
  }
}

TEST_CASE("germs") {
  Ring q = Ring::rational();
  auto g = testkit::p2();
  GModule reg = regular_module(g, q);
  CHECK(is_zero(germ_at(reg, Vector(4, Scalar(0)), g->object_named("1"))));
  Vector chi11 = unit_vector(4, index(g->arrow_named("(1,1)")));
  CHECK_FALSE(is_zero(germ_at(reg, chi11, g->object_named("1"))));
  CHECK(is_zero(germ_at(reg, chi11, g->object_named("2"))));

  // germs only see the smallest neighbourhood
  std::mt19937_64 rng(12);
  for (const auto& [name, gg] : testkit::small_groupoids()) {
    GModule m = random_module(gg, q, 2, rng());
    Vector v = testkit::random_vector(q, m.rank(), rng);
    for (const auto& u : enumerate_compact_opens(*gg)) {
      for (Object x : u) CHECK(germ_at(m, v, x) == germ_at(m, act(m, v, char_fn(gg, u, q)), x));
    }
  }
}

TEST_CASE("germs vanish away from U^-1 U") {
  Ring f5 = Ring::modular(5);
  std::mt19937_64 rng(13);
  for (const auto& [name, g] : testkit::small_groupoids()) {
    CAPTURE(name);
    GModule m = random_module(g, f5, 2, rng());
    for (const auto& u : enumerate_bisections(*g)) {
      auto domain = source_set(*g, u);
      for (Object x : g->objects()) {
        if (std::find(domain.begin(), domain.end(), x) != domain.end()) continue;
        for (int t = 0; t < 3; ++t) {
          Vector v = testkit::random_vector(f5, m.rank(), rng);
          CHECK(is_zero(germ_at(m, act(m, v, char_fn(g, u, f5)), x)));
        }
      }
    }
  }
}

TEST_CASE("germ transport") {
  Ring f5 = Ring::modular(5);
  std::mt19937_64 rng(14);
  auto g = testkit::p2();
  GModule m = random_module(g, f5, 3, 5);
  for (Object x : g->objects()) {
    Germ gx = germ_at(m, testkit::random_vector(f5, m.rank(), rng), x);
    CHECK(germ_transport(m, gx, g->unit(x)) == gx);
  }
  for (Arrow a : g->arrows()) {
    for (Arrow b : g->arrows()) {
      auto ab = g->compose(a, b);
      if (!ab) continue;
      Germ start = germ_at(m, testkit::random_vector(f5, m.rank(), rng), g->target(a));
      CHECK(germ_transport(m, germ_transport(m, start, a), b) == germ_transport(m, start, *ab));
    }
  }
  Germ wrong = germ_at(m, Vector(m.rank(), Scalar(0)), g->object_named("2"));
  CHECK_THROWS_AS(germ_transport(m, wrong, g->arrow_named("(1,2)")), InvalidArgument);

  // any bisection through the arrow gives the same germ
  for (const auto& u : enumerate_bisections(*g)) {
    for (Arrow a : u.arrows()) {
      Germ start = germ_at(m, testkit::random_vector(f5, m.rank(), rng), g->target(a));
      CHECK(germ_transport_along(m, start, u, a) == germ_transport(m, start, a));
    }
  }
}

TEST_CASE("sheafify examples") {
  Ring q = Ring::rational();
  auto g = testkit::p2();
  CHECK(sheafify(GModule::zero(g, q)).sheaf == zero_sheaf(g, q));
  Sheafification sh = sheafify(regular_module(g, q));
  CHECK(sh.sheaf.stalk_ranks() == std::vector<std::size_t>{2, 2});
  CHECK(validate_sheaf(sh.sheaf));
  for (Arrow a : g->arrows()) CHECK(inverse(sh.sheaf.transport(a)).has_value());

  auto t = testkit::trivial();
  Sheafification one = sheafify(GModule(t, q, 1, {make(q, {{1}})}));
  CHECK(one.sheaf.stalk_ranks() == std::vector<std::size_t>{1});

  CHECK_THROWS_AS(sheafify(regular_module(g, Ring::parse("Zmod:6"))), UnsupportedRing);
}

TEST_CASE("sheafified modules are contravariant functors") {
  std::mt19937_64 rng(15);
  for (const auto& [name, g] : testkit::equivalence_groupoids()) {
    for (const Ring& ring : testkit::all_rings()) {
      GSheaf e = sheafify(random_module(g, ring, 3, rng())).sheaf;
      for (Object x : g->objects()) CHECK(e.transport(g->unit(x)).is_identity());
      for (Arrow a : g->arrows()) {
        for (Arrow b : g->arrows()) {
          if (auto ab = g->compose(a, b)) CHECK(e.transport(a) * e.transport(b) == e.transport(*ab));
        }
      }
    }
  }
}

TEST_CASE("sh_mor") {
  Ring q = Ring::rational();
  auto z2 = testkit::z2();
  GModule a = random_module(z2, q, 2, 1);
  GModule b = random_module(z2, q, 2, 2);
  GModule c = random_module(z2, q, 2, 3);
  Sheafification sa = sheafify(a), sb = sheafify(b), sc = sheafify(c);
  GSheafMor id = sh_mor(identity_hom(a), sa, sa);
  for (const auto& m : id.maps()) CHECK(m.is_identity());
  for (const auto& m : sh_mor(zero_hom(a, b), sa, sb).maps()) CHECK(m.is_zero());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GModuleHom f = random_hom(a, b, seed);
    GModuleHom h = random_hom(b, c, seed + 3);
    GSheafMor lhs = sh_mor(compose(f, h), sa, sc);
    GSheafMor rhs = compose(sh_mor(f, sa, sb), sh_mor(h, sb, sc));
    CHECK(validate_sheaf_morphism(lhs));
    CHECK(lhs.maps() == rhs.maps());
  }
}

TEST_CASE("eta examples") {
  Ring q = Ring::rational();
  auto t = testkit::trivial();
  CertificateResult one = eta(GModule(t, q, 1, {make(q, {{1}})}));
  REQUIRE(one);
  CHECK(one.certificate->components.front() == make(q, {{1}}));

  CertificateResult reg = eta(regular_module(testkit::p2(), q));
  REQUIRE(reg);
  const Matrix& m = reg.certificate->components.front();
  CHECK(m.rows() == 4);
  CHECK(m.cols() == 4);
  CHECK(rank(m) == 4);
  CHECK((m * reg.certificate->inverse_components.front()).is_identity());

  Ring f2 = Ring::modular(2);
  auto z2 = testkit::z2();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GModule mod = random_module(z2, f2, 3, seed);
    CertificateResult c = eta(mod);
    REQUIRE(c);
    CHECK(injective_by_scan(c.certificate->components.front(), 2));
  }
}

TEST_CASE("epsilon examples") {
  Ring q = Ring::rational();
  CertificateResult one = epsilon(constant_sheaf(testkit::trivial(), q, 1));
  REQUIRE(one);
  CHECK(one.certificate->components.front().is_identity());

  CertificateResult d = epsilon(constant_sheaf(testkit::p2(), q, 1));
  REQUIRE(d);
  CHECK(d.certificate->components.size() == 2);
  for (const auto& c : d.certificate->components) {
    CHECK(c.rows() == 1);
    CHECK(c.cols() == 1);
    CHECK(c(0, 0) != 0);
  }

  Ring f5 = Ring::modular(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(epsilon(random_sheaf(testkit::p2(), f5, 3, seed)));
}

TEST_CASE("naturality squares") {
  Ring q = Ring::rational();
  for (const auto& g : {testkit::p2(), testkit::z2()}) {
    GModule a = random_module(g, q, 2, 10);
    GModule b = random_module(g, q, 2, 11);
    CHECK(check_naturality(identity_hom(a)));
    CHECK(check_naturality(zero_hom(a, b)));
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      GModule x = random_module(g, q, 2, seed);
      GModule y = random_module(g, q, 2, seed + 1000);
      CHECK(check_naturality(random_hom(x, y, seed)));
    }
    GSheaf e = random_sheaf(g, q, 2, 3);
    GSheaf f = random_sheaf(g, q, 2, 4);
    CHECK(check_naturality(identity_morphism(e)));
    CHECK(check_naturality(zero_morphism(e, f)));
    CHECK(check_naturality(random_morphism(e, f, 1)));
  }
}

TEST_CASE("a non-intertwining map is caught by the naturality check") {
  Ring q = Ring::rational();
  auto z2 = testkit::z2();
  GModule plus(z2, q, 1, {make(q, {{1}}), make(q, {{1}})});
  GModule minus(z2, q, 1, {make(q, {{1}}), make(q, {{-1}})});
  Report r = check_naturality(GModuleHom(plus, minus, make(q, {{1}})));
  CHECK_FALSE(r);
  CHECK(r.check == "intertwining");
}

TEST_CASE("verdicts do not depend on the object order") {
  std::mt19937_64 rng(21);
  for (const auto& [name, g] : testkit::equivalence_groupoids()) {
    auto h = testkit::reverse_objects(*g);
    REQUIRE(validate_groupoid(*h));
    for (const Ring& ring : {Ring::modular(5), Ring::rational(), Ring::integer()}) {
      for (int t = 0; t < 3; ++t) {
        GModule m = random_module(g, ring, 3, rng());
        GModule moved(h, ring, m.rank(), m.actions());
        CAPTURE(name);
        CHECK(validate_module(moved));
        CHECK(bool(eta(m)) == bool(eta(moved)));
        CHECK(bool(eta(moved)));
        GSheaf e = random_sheaf(g, ring, 3, rng());
        std::vector<std::size_t> ranks(e.stalk_ranks().rbegin(), e.stalk_ranks().rend());
        GSheaf e2(h, ring, ranks, e.transports());
        CHECK(validate_sheaf(e2));
        CHECK(bool(epsilon(e)) == bool(epsilon(e2)));
        CHECK(bool(epsilon(e2)));
      }
    }
  }
}

}
