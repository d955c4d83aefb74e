#include <doctest.h>

#include "etale/algebra.hpp"
#include "etale/builders.hpp"
#include "etale/error.hpp"
#include "testkit.hpp"

using namespace etale;

TEST_SUITE("algebra") {

TEST_CASE("characteristic functions") {
  auto g = testkit::p2();
  Ring q = Ring::rational();
  CHECK(char_fn(g, Bisection(), q).is_zero());
  auto chi = singleton(g, g->arrow_named("(1,2)"), q);
  CHECK(chi.support() == std::vector<Arrow>{g->arrow_named("(1,2)")});
  CHECK(chi.coefficient(g->arrow_named("(1,2)")) == 1);
}

TEST_CASE("the unit space gives the identity") {
  Ring f5 = Ring::modular(5);
  std::mt19937_64 rng(3);
  for (const auto& [name, g] : testkit::small_groupoids()) {
    CAPTURE(name);
    auto one = char_fn(g, all_objects(*g), f5);
    for (int t = 0; t < 50; ++t) {
      auto f = testkit::random_element(g, f5, rng);
      CHECK(f * one == f);
      CHECK(one * f == f);
    }
  }
}

TEST_CASE("single surviving term") {
  auto g = testkit::p2();
  Ring q = Ring::rational();
  CHECK(singleton(g, g->arrow_named("(1,2)"), q) * singleton(g, g->arrow_named("(2,1)"), q) ==
        singleton(g, g->arrow_named("(1,1)"), q));
  CHECK((singleton(g, g->arrow_named("(2,1)"), q) * singleton(g, g->arrow_named("(2,1)"), q)).is_zero());
}

TEST_CASE("chi_U * chi_V = chi_UV on P2") {
  auto g = testkit::p2();
  auto all = enumerate_bisections(*g);
  int pairs = 0;
  for (const Ring& ring : {Ring::rational(), Ring::modular(2)}) {
    for (const auto& u : all) {
      for (const auto& v : all) {
        CHECK(char_fn(g, u, ring) * char_fn(g, v, ring) ==
              char_fn(g, bisection_product(*g, u, v), ring));
        ++pairs;
      }
    }
  }
  CHECK(pairs == 2 * 49);
}

TEST_CASE("convolution agrees with the fibre-sum formula") {
  std::mt19937_64 rng(17);
  for (const auto& [name, g] : testkit::small_groupoids()) {
    for (const Ring& ring : testkit::all_rings()) {
      CAPTURE(name);
      CAPTURE(ring.name());
      for (int t = 0; t < 30; ++t) {
        auto f1 = testkit::random_element(g, ring, rng);
        auto f2 = testkit::random_element(g, ring, rng);
        CHECK(testkit::coefficients_of(f1 * f2) == testkit::brute_convolve(f1, f2));
      }
    }
  }
}

TEST_CASE("associativity and bilinearity") {
  std::mt19937_64 rng(23);
  for (const auto& [name, g] : testkit::small_groupoids()) {
    for (const Ring& ring : testkit::all_rings()) {
      CAPTURE(name);
      CAPTURE(ring.name());
      for (int t = 0; t < 100; ++t) {
        auto f = testkit::random_element(g, ring, rng);
        auto h = testkit::random_element(g, ring, rng);
        auto k = testkit::random_element(g, ring, rng);
        CHECK((f * h) * k == f * (h * k));
        Scalar c = ring.element(testkit::random_scalar(ring, rng));
        CHECK((f + h) * k == f * k + h * k);
        CHECK(f * (h + k) == f * h + f * k);
        CHECK(scale(c, f) * h == scale(c, f * h));
        CHECK(f * scale(c, h) == scale(c, f * h));
      }
    }
  }
}

TEST_CASE("mismatched operands are rejected") {
  auto g = testkit::p2();
  auto h = testkit::z2();
  Ring q = Ring::rational();
  CHECK_THROWS_AS(singleton(g, arrow_at(0), q) * singleton(h, arrow_at(0), q), InvalidArgument);
  CHECK_THROWS_AS(singleton(g, arrow_at(0), q) * singleton(g, arrow_at(0), Ring::modular(2)),
                  RingMismatch);
}

TEST_CASE("local units") {
  auto g = testkit::p2();
  Ring q = Ring::rational();
  auto one = [&](const CompactOpen& u) { return char_fn(g, u, q); };
  std::vector<AlgebraElement> fs{singleton(g, g->arrow_named("(1,2)"), q)};
  CHECK(local_unit(fs) == all_objects(*g));
  fs = {singleton(g, g->arrow_named("(1,1)"), q)};
  CHECK(local_unit(fs) == CompactOpen{g->object_named("1")});
  fs = {AlgebraElement(g, q)};
  auto u = local_unit(fs);
  CHECK((one(u) * fs[0] * one(u)) == fs[0]);
  CHECK_THROWS_AS(local_unit(std::vector<AlgebraElement>{}), InvalidArgument);

  std::mt19937_64 rng(8);
  for (const auto& [name, gg] : testkit::small_groupoids()) {
    for (int t = 0; t < 20; ++t) {
      std::vector<AlgebraElement> many;
      for (int i = 0; i < 3; ++i) many.push_back(testkit::random_element(gg, q, rng));
      auto e = char_fn(gg, local_unit(many), q);
      for (const auto& f : many) CHECK(e * f * e == f);
    }
  }
}

TEST_CASE("corner algebras") {
  auto g = testkit::p2();
  Ring q = Ring::rational();
  auto full = corner_algebra(g, all_objects(*g), q);
  CHECK(full.verification);
  CHECK(full.dimension == 4);
  CHECK(full.restricted == *g);

  auto one = corner_algebra(g, CompactOpen{g->object_named("1")}, q);
  CHECK(one.verification);
  CHECK(one.dimension == 1);
  auto chi1 = char_fn(g, CompactOpen{g->object_named("1")}, q);
  int survivors = 0;
  for (Arrow a : g->arrows()) survivors += !(chi1 * singleton(g, a, q) * chi1).is_zero();
  CHECK(survivors == 1);

  for (const auto& [name, gg] : testkit::small_groupoids()) {
    for (const auto& u : enumerate_compact_opens(*gg)) {
      auto c = corner_algebra(gg, u, Ring::modular(2));
      CHECK(c.verification);
      CHECK(c.dimension == c.restricted.num_arrows());
    }
  }
}

TEST_CASE("multiplication tables") {
  Ring q = Ring::rational();
  auto t1 = multiplication_table(testkit::trivial(), q);
  CHECK(t1.entries.size() == 1);
  CHECK(t1.entries[0] == singleton(testkit::trivial(), arrow_at(0), q));

  // (i,j)(k,l) = delta_jk (i,l), matrix units
  auto g = testkit::p2();
  auto t = multiplication_table(g, q);
  for (std::size_t i = 1; i <= 2; ++i) {
    for (std::size_t j = 1; j <= 2; ++j) {
      for (std::size_t k = 1; k <= 2; ++k) {
        for (std::size_t l = 1; l <= 2; ++l) {
          auto name = [](std::size_t a, std::size_t b) {
            return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
          };
          const auto& e = t.at(g->arrow_named(name(i, j)), g->arrow_named(name(k, l)));
          if (j == k) {
            CHECK(e == singleton(g, g->arrow_named(name(i, l)), q));
          } else {
            CHECK(e.is_zero());
          }
        }
      }
    }
  }
  CHECK(t.to_tsv() ==
        "*\t(1,1)\t(1,2)\t(2,1)\t(2,2)\n"
        "(1,1)\t(1,1)\t(1,2)\t0\t0\n"
        "(1,2)\t0\t0\t(1,1)\t(1,2)\n"
        "(2,1)\t(2,1)\t(2,2)\t0\t0\n"
        "(2,2)\t0\t0\t(2,1)\t(2,2)\n");

  auto z2 = testkit::z2();
  auto tz = multiplication_table(z2, Ring::modular(2));
  CHECK(tz.at(arrow_at(1), arrow_at(1)) == singleton(z2, arrow_at(0), Ring::modular(2)));

  CHECK_THROWS_AS(multiplication_table(share(pair_groupoid(9)), q), SizeLimitExceeded);
}

}
