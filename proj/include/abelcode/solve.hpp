#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "abelcode/int_matrix.hpp"
#include "abelcode/smith.hpp"

namespace abelcode {

/// Cyclic orders of the flattened ambient factors, one per equation row.
class ModulusVector {
 public:
  ModulusVector() = default;
  explicit ModulusVector(std::vector<Residue> moduli) : moduli_(std::move(moduli)) {
    for (Residue m : moduli_)
      if (m < 1) throw InputError("ModulusVector: every modulus must be >= 1");
  }
  std::size_t size() const noexcept { return moduli_.size(); }
  Residue operator[](std::size_t i) const { return moduli_[i]; }
  const std::vector<Residue>& values() const noexcept { return moduli_; }

 private:
  std::vector<Residue> moduli_;
};

/// Additive order of column j of A inside the group sum of Z(mods[i]).
inline BigInt column_order(const IntMatrix& a, std::size_t j, const ModulusVector& mods) {
  BigInt ord = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    BigInt m = mods[i];
    BigInt g = gcd(a(i, j), m);
    BigInt o = m / g;
    ord = lcm(ord, o);
  }
  return ord;
}

/// Finds x with A*x = b componentwise modulo mods, by appending the modulus
/// columns and solving the resulting integer system through its Smith form.
/// Each x_j is reduced into [0, order of column j).
inline std::optional<std::vector<BigInt>> solve_mixed_modulus(const IntMatrix& a, const std::vector<BigInt>& b,
                                                              const ModulusVector& mods) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (mods.size() != rows) throw InputError("solve_mixed_modulus: modulus count does not match row count");
  if (b.size() != rows) throw InputError("solve_mixed_modulus: right-hand side length does not match row count");

  IntMatrix aug(rows, cols + rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols + i) = mods[i];
  }
  SnfResult snf = smith_normal_form(aug);
  std::vector<BigInt> c = snf.U.apply(b);
  std::vector<BigInt> w(cols + rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const BigInt di = i < cols + rows ? snf.D(i, i) : BigInt(0);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    if (c[i] % di != 0) return std::nullopt;
    w[i] = c[i] / di;
  }
  std::vector<BigInt> z = snf.V.apply(w);
  std::vector<BigInt> x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    BigInt ord = column_order(a, j, mods);
    x[j] %= ord;
    if (x[j] < 0) x[j] += ord;
  }
  return x;
}

}  // namespace abelcode
