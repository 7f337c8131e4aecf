#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

using namespace qgs;

namespace {

bool is_identity_power(const WeylElement& a, int e) { return power(a, e).is_identity(); }

}  // namespace

TEST(Weyl, GroupOrder) {
  for (int n = 1; n <= 5; ++n) {
    const auto all = enumerate(n);
    EXPECT_EQ(all.size(), static_cast<std::size_t>(std::ldexp(factorial(n), n)));
    std::set<std::uint64_t> keys;
    for (const auto& p : all) keys.insert(p.key());
    EXPECT_EQ(keys.size(), all.size());
  }
  EXPECT_THROW(enumerate(7), IndexError);
}

TEST(Weyl, GeneratorRelations) {
  for (int n = 2; n <= 4; ++n) {
    const WeylElement r1 = generator_r1(n);
    EXPECT_TRUE(is_identity_power(r1, 2));
    EXPECT_TRUE(is_identity_power(compose(r1, generator_t(1, n)), 4));
    for (int i = 1; i < n; ++i) {
      const WeylElement ti = generator_t(i, n);
      EXPECT_TRUE(is_identity_power(ti, 2));
      EXPECT_FALSE(ti.is_identity());
      if (i + 1 < n) {
        EXPECT_TRUE(is_identity_power(compose(ti, generator_t(i + 1, n)), 3));
      }
      if (i > 1) {
        EXPECT_TRUE(is_identity_power(compose(r1, ti), 2));
      }
      for (int j = i + 2; j < n; ++j) EXPECT_TRUE(is_identity_power(compose(ti, generator_t(j, n)), 2));
    }
  }
  EXPECT_THROW(generator_t(0, 3), IndexError);
  EXPECT_THROW(generator_t(3, 3), IndexError);
}

TEST(Weyl, RightActionLaw) {
  const WaveTuple k{1.5, -2.25, 3.0, 0.5};
  const auto all = enumerate(4);
  for (std::size_t a = 0; a < all.size(); a += 37)
    for (std::size_t b = 0; b < all.size(); b += 23)
      EXPECT_EQ(act(compose(all[a], all[b]), k), act(all[b], act(all[a], k)));
}

TEST(Weyl, CyclicAndReflections) {
  const WaveTuple k{1, 2, 3};
  EXPECT_EQ(act(element_c(3), k), (WaveTuple{3, 1, 2}));
  EXPECT_EQ(act(generator_r1(3), k), (WaveTuple{-1, 2, 3}));
  EXPECT_EQ(act(element_r(3, 3), k), (WaveTuple{1, 2, -3}));
  for (int n = 2; n <= 5; ++n) {
    const WeylElement c = element_c(n);
    EXPECT_TRUE(power(c, n).is_identity());
    EXPECT_EQ(element_r(n, n), compose({c, generator_r1(n), inverse(c)}));
    for (int i = 1; i <= n; ++i) EXPECT_TRUE(is_identity_power(element_r(i, n), 2));
  }
}

TEST(Weyl, InverseAndClosure) {
  const auto all = enumerate(3);
  std::set<std::uint64_t> keys;
  for (const auto& p : all) keys.insert(p.key());
  for (const auto& a : all) {
    EXPECT_TRUE(compose(a, inverse(a)).is_identity());
    for (const auto& b : all) EXPECT_TRUE(keys.count(compose(a, b).key()));
  }
}

TEST(Weyl, QuotientIsBijective) {
  for (int n = 2; n <= 4; ++n) {
    const auto q = quotient_decomposition(n);
    std::set<std::uint64_t> keys;
    for (const auto& e : q) keys.insert(e.element.key());
    EXPECT_EQ(q.size(), enumerate(n).size());
    EXPECT_EQ(keys.size(), q.size());
  }
}

TEST(Weyl, RejectsBadElements) {
  EXPECT_THROW(WeylElement({0, 0}, {1, 1}), ValidationError);
  EXPECT_THROW(WeylElement({0, 1}, {1, 2}), ValidationError);
  EXPECT_THROW(WeylElement({0, 1}, {1}), ValidationError);
}
