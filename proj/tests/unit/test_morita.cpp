#include <doctest.h>

#include "etale/equivalence.hpp"
#include "etale/morita.hpp"
#include "testkit.hpp"

using namespace etale;
using testkit::make;

namespace {

GroupoidFunctor collapse(const GroupoidPtr& g, const GroupoidPtr& point) {
  GroupoidFunctor f{g, point, {}, {}};
  f.obj_map.assign(g->num_objects(), object_at(0));
  f.arr_map.assign(g->num_arrows(), point->unit(object_at(0)));
  return f;
}

// {1} -> P2, the inclusion of one object.
GroupoidFunctor point_into_p2(const GroupoidPtr& p2) {
  return inclusion_functor(p2, CompactOpen{p2->object_named("1")});
}

// P2 <- point -> point
MoritaSpan p2_point_via_inclusion(const GroupoidPtr& p2) {
  GroupoidFunctor left = point_into_p2(p2);
  return MoritaSpan{left, identity_functor(left.source)};
}

// P2 <- P2 -> point
MoritaSpan p2_point_via_collapse(const GroupoidPtr& p2) {
  return MoritaSpan{identity_functor(p2), collapse(p2, testkit::trivial())};
}

bool isomorphic_by_rank_over_point(const GModule& a, const GModule& b) {
  return a.groupoid().num_arrows() == 1 && a.rank() == b.rank();
}

}  // namespace

TEST_SUITE("morita") {

TEST_CASE("functor validation") {
  auto p2 = testkit::p2();
  CHECK(validate_functor(identity_functor(p2)));
  GroupoidFunctor bad = identity_functor(p2);
  std::swap(bad.arr_map[1], bad.arr_map[2]);
  Report r = validate_functor(bad);
  CHECK_FALSE(r.passed);
  CHECK(r.check == "source");
  GroupoidFunctor c = compose(point_into_p2(p2), collapse(p2, testkit::trivial()));
  CHECK(validate_functor(c));
}

TEST_CASE("essential equivalences") {
  auto p2 = testkit::p2();
  CHECK(is_essential_equivalence(identity_functor(p2)));
  CHECK(is_essential_equivalence(point_into_p2(p2)));
  CHECK(is_essential_equivalence(collapse(p2, testkit::trivial())));
  Report r = is_essential_equivalence(collapse(testkit::z2(), testkit::trivial()));
  CHECK_FALSE(r.passed);
  CHECK(r.check == "full faithfulness");

  // a discrete two-point groupoid misses nothing but is not full
  auto two = share(action_groupoid(cyclic_table(1), {"a", "b"}, {{0, 1}}));
  CHECK(is_essential_equivalence(collapse(two, testkit::trivial())).check == "full faithfulness");
  // the one-object inclusion into two disjoint points is not essentially surjective
  auto one_of_two = inclusion_functor(two, CompactOpen{two->object_named("a")});
  CHECK(is_essential_equivalence(one_of_two).check == "essential surjectivity");
}

TEST_CASE("Z/2 acting on itself is P2") {
  auto p2 = testkit::p2();
  auto act = testkit::z2_translation();
  // objects 0,1 -> 1,2 ; arrow (g,x): x -> g+x goes to (g+x+1, x+1)
  GroupoidFunctor f{act, p2, {object_at(0), object_at(1)}, {}};
  for (Arrow a : act->arrows()) {
    std::size_t src = index(act->source(a)) + 1;
    std::size_t dst = index(act->target(a)) + 1;
    f.arr_map.push_back(p2->arrow_named("(" + std::to_string(dst) + "," + std::to_string(src) + ")"));
  }
  CHECK(validate_functor(f));
  CHECK(is_essential_equivalence(f));
  GroupoidFunctor back{p2, act, {object_at(0), object_at(1)}, std::vector<Arrow>(4)};
  for (Arrow a : act->arrows()) back.arr_map[index(f(a))] = a;
  CHECK(validate_functor(back));
  CHECK(is_essential_equivalence(back));
}

TEST_CASE("pullback") {
  auto p2 = testkit::p2();
  Ring q = Ring::rational();
  GSheaf e = random_sheaf(p2, q, 2, 3);
  CHECK(pullback_sheaf(identity_functor(p2), e) == e);
  auto incl = point_into_p2(p2);
  CHECK(pullback_sheaf(incl, constant_sheaf(p2, q, 2)) == constant_sheaf(incl.source, q, 2));
  GSheaf ones = pullback_sheaf(incl, random_sheaf_with_ranks(p2, q, {1, 1}, 8));
  CHECK(ones.stalk_ranks() == std::vector<std::size_t>{1});
  CHECK(validate_sheaf(ones));
  GSheafMor phi = random_morphism(e, random_sheaf(p2, q, 2, 4), 2);
  CHECK(validate_sheaf_morphism(pullback_morphism(incl, phi)));
}

TEST_CASE("quasi-inverse") {
  auto p2 = testkit::p2();
  Ring q = Ring::rational();
  GSheaf e = random_sheaf(p2, q, 2, 3);
  // only isomorphic: transports are rebased on the least object of each component
  GSheaf back = pullback_quasi_inverse(identity_functor(p2), e);
  CHECK(back.stalk_ranks() == e.stalk_ranks());
  GSheafMor iso = QuasiInverse(identity_functor(p2)).counit(e);
  CHECK(iso.target() == back);
  CHECK(inverse_morphism(iso).has_value());
  CHECK(pullback_quasi_inverse(identity_functor(testkit::z2()), random_sheaf(testkit::z2(), q, 2, 1)) ==
        random_sheaf(testkit::z2(), q, 2, 1));

  auto incl = point_into_p2(p2);
  GSheaf k = constant_sheaf(incl.source, q, 1);
  GSheaf spread = pullback_quasi_inverse(incl, k);
  CHECK(spread.stalk_ranks() == std::vector<std::size_t>{1, 1});
  CHECK(validate_sheaf(spread));
  for (const auto& b : spread.transports()) CHECK(b == make(q, {{1}}));

  QuasiInverse qi(incl);
  Ring f5 = Ring::modular(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GSheaf small = random_sheaf(incl.source, f5, 3, seed);
    GSheafMor unit = qi.unit(small);
    CHECK(unit.source() == pullback_sheaf(incl, qi.apply(small)));
    CHECK(validate_sheaf_morphism(unit));
    CHECK(inverse_morphism(unit).has_value());
    GSheaf big = random_sheaf(p2, f5, 3, seed);
    GSheafMor counit = qi.counit(big);
    CHECK(validate_sheaf_morphism(counit));
    CHECK(inverse_morphism(counit).has_value());
  }

  CHECK_THROWS_AS(QuasiInverse(collapse(testkit::z2(), testkit::trivial())), InvalidArgument);
}

TEST_CASE("module transport") {
  Ring q = Ring::rational();
  auto p2 = testkit::p2();
  MoritaSpan same{identity_functor(p2), identity_functor(p2)};
  GModule m = random_module(p2, q, 2, 1);
  GModule moved = module_transport(same, m);
  CHECK(moved.rank() == m.rank());
  CHECK(round_trip(same, m));

  GModule reg = regular_module(p2, q);
  CHECK(module_transport(p2_point_via_inclusion(p2), reg).rank() == 2);
  CHECK(module_transport(p2_point_via_collapse(p2), reg).rank() == 2);

  auto act = testkit::z2_translation();
  MoritaSpan halve{identity_functor(act), collapse(act, testkit::trivial())};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GModule x = random_module(act, q, 3, seed);
    CHECK(module_transport(halve, x).rank() * 2 == x.rank());
  }
}

TEST_CASE("transport halves ranks on the P2/point span") {
  Ring f5 = Ring::modular(5);
  auto p2 = testkit::p2();
  MoritaSpan span = p2_point_via_collapse(p2);
  for (std::size_t r = 0; r <= 3; ++r) {
    GModule m = random_module_with_ranks(p2, f5, {r, r}, r);
    CHECK(module_transport(span, m).rank() == r);
  }
}

TEST_CASE("transport is additive") {
  Ring q = Ring::rational();
  auto p2 = testkit::p2();
  MoritaSpan span = p2_point_via_collapse(p2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GModule a = random_module(p2, q, 2, seed);
    GModule b = random_module(p2, q, 2, seed + 9);
    GModule sum = module_transport(span, direct_sum(a, b));
    GModule parts = direct_sum(module_transport(span, a), module_transport(span, b));
    CHECK(validate_module(sum));
    CHECK(isomorphic_by_rank_over_point(sum, parts));
  }
}

TEST_CASE("hom transport and bijections") {
  Ring q = Ring::rational();
  auto p2 = testkit::p2();
  MoritaSpan span = p2_point_via_collapse(p2);
  GModule a = random_module(p2, q, 2, 2);
  GModule b = random_module(p2, q, 2, 3);
  GModuleHom f = random_hom(a, b, 1);
  GModuleHom tf = hom_transport(span, f);
  CHECK(validate_hom(tf));
  CHECK(hom_transport(span, identity_hom(a)).matrix().is_identity());
  CHECK(hom_bijection(span, a, b));
  CHECK(hom_bijection(span.reversed(), module_transport(span, a), module_transport(span, b)));
}

TEST_CASE("transport is deterministic") {
  Ring f5 = Ring::modular(5);
  auto p2 = testkit::p2();
  MoritaSpan span = p2_point_via_inclusion(p2);
  GModule m = random_module(p2, f5, 3, 4);
  CHECK(module_transport(span, m) == module_transport(span, m));
}

TEST_CASE("verify_morita") {
  Ring q = Ring::rational();
  auto p2 = testkit::p2();
  MoritaReport same = verify_morita(MoritaSpan{identity_functor(p2), identity_functor(p2)}, q, 4, 1);
  CHECK(same.passed());

  MoritaReport rep = verify_morita(p2_point_via_collapse(p2), q, 6, 7);
  CHECK(rep.passed());
  CHECK(rep.samples.size() == 12);
  CHECK(rep.regular_rank == 4);
  CHECK(rep.regular_transported_rank == 2);
  for (const auto& s : rep.samples) {
    if (s.direction == "forward") CHECK(s.transported_rank * 2 == s.rank);
    if (s.direction == "backward") CHECK(s.transported_rank == s.rank * 2);
  }

  // the simple module of M2(k) is the natural row module, rank 2 -> 1
  GModule simple = gamma_c(constant_sheaf(p2, q, 1));
  CHECK(module_transport(p2_point_via_collapse(p2), simple).rank() == 1);

  auto two = share(action_groupoid(cyclic_table(1), {"a", "b"}, {{0, 1}}));
  MoritaSpan broken{identity_functor(two), collapse(two, testkit::trivial())};
  MoritaReport no = verify_morita(broken, q, 5, 0);
  CHECK_FALSE(no.passed());
  CHECK_FALSE(no.span.passed);
  CHECK(no.span.check == "right leg: full faithfulness");
  CHECK(no.samples.empty());

  CHECK_THROWS_AS(verify_morita(p2_point_via_collapse(p2), Ring::parse("Zmod:6"), 1, 0), UnsupportedRing);
}

TEST_CASE("spans with a bad apex are rejected") {
  auto p2 = testkit::p2();
  MoritaSpan mismatched{identity_functor(p2), identity_functor(testkit::z2())};
  Report r = validate_span(mismatched);
  CHECK_FALSE(r.passed);
  CHECK(r.check == "apex");
}

}
