#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace abelcode;

TEST(Arith, ModAndGcd) {
  EXPECT_EQ(mod_floor(-1, 4), 3);
  EXPECT_EQ(mod_floor(9, 4), 1);
  auto [g, s, t] = xgcd(12, 18);
  EXPECT_EQ(g, 6);
  EXPECT_EQ(12 * s + 18 * t, 6);
  EXPECT_EQ(mul_mod(kMaxModulus - 2, kMaxModulus - 3, kMaxModulus - 1), 2);
}

TEST(Arith, PrimePowersAndDivisors) {
  EXPECT_EQ(prime_power(9), (std::pair<Residue, int>{3, 2}));
  EXPECT_EQ(prime_power(6).first, 0);
  EXPECT_EQ(prime_power(1).first, 0);
  EXPECT_EQ(prime_divisors(72), (std::vector<Residue>{2, 3}));
  EXPECT_EQ(divisors(12), (std::vector<Residue>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(p_part(72, 2), 8);
  EXPECT_EQ(log_p(27, 3), 3);
}

TEST(Smith, KnownDiagonal) {
  IntMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  auto r = smith_normal_form(m);
  EXPECT_EQ(r.diagonal(), (std::vector<BigInt>{2, 6, 12}));
  EXPECT_EQ(r.U * m * r.V, r.D);
}

TEST(Smith, ZeroAndRectangular) {
  IntMatrix z(2, 3);
  auto r = smith_normal_form(z);
  EXPECT_EQ(r.diagonal(), (std::vector<BigInt>{0, 0}));
  IntMatrix m{{0, 3}, {0, 0}, {0, 5}};
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.diagonal(), (std::vector<BigInt>{1, 0}));
  EXPECT_EQ(s.U * m * s.V, s.D);
}

TEST(Smith, RandomAgainstDeterminantalDivisors) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    IntMatrix m(rows, cols);
    oracle::Matrix plain(rows, std::vector<BigInt>(cols));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) plain[i][j] = m(i, j) = std::uniform_int_distribution<int>(-9, 9)(rng);
    auto r = smith_normal_form(m);
    ASSERT_EQ(r.U * m * r.V, r.D);
    EXPECT_EQ(abs(determinant(r.U)), 1);
    EXPECT_EQ(abs(determinant(r.V)), 1);
    auto d = r.diagonal();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (i != j) {
          EXPECT_EQ(r.D(i, j), 0);
        }
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
      EXPECT_GE(d[k], 0);
      if (d[k] != 0) {
        EXPECT_EQ(d[k + 1] % d[k], 0);
      } else {
        EXPECT_EQ(d[k + 1], 0);
      }
    }
    EXPECT_EQ(d, oracle::invariant_factors(plain, rows, cols));
  }
}

TEST(Solve, AgreesWithBruteForce) {
  std::mt19937 rng(5);
  const std::vector<Residue> choices{2, 3, 4, 5, 6, 8, 9};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<Residue> mods;
    for (std::size_t i = 0; i < rows; ++i) mods.push_back(choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)]);
    Residue l = 1;
    for (Residue m : mods) l = std::lcm(l, m);
    if (ipow(l, static_cast<int>(cols)) > 4096) continue;
    IntMatrix a(rows, cols);
    std::vector<std::vector<Residue>> plain(rows, std::vector<Residue>(cols));
    std::vector<BigInt> b(rows);
    oracle::Vec pb(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = plain[i][j] = std::uniform_int_distribution<int>(-8, 8)(rng);
      b[i] = pb[i] = std::uniform_int_distribution<int>(0, static_cast<int>(mods[i]) - 1)(rng);
    }
    auto x = solve_mixed_modulus(a, b, ModulusVector(mods));
    EXPECT_EQ(x.has_value(), oracle::brute_solvable(plain, pb, mods, l));
    if (x) {
      for (std::size_t i = 0; i < rows; ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j) * (*x)[j];
        EXPECT_EQ(((s - b[i]) % mods[i] + mods[i]) % mods[i], 0);
      }
    }
  }
}

TEST(Solve, RejectsShapeMismatch) {
  IntMatrix a{{1, 2}};
  EXPECT_THROW(solve_mixed_modulus(a, {1, 2}, ModulusVector({4})), InputError);
  EXPECT_THROW(ModulusVector({0}), InputError);
}
