#pragma once

// Small-integer number theory used throughout the library. Residues and
// moduli are 64-bit; every modulus is bounded by kMaxModulus so products of
// two residues never overflow a 128-bit intermediate.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace abelcode {

using Residue = std::int64_t;

inline constexpr Residue kMaxModulus = Residue{1} << 31;

/// Raised for malformed or out-of-contract inputs (bad files, index out of
/// range, preconditions the caller is responsible for).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Floor modulo into [0, m).
constexpr Residue mod_floor(Residue a, Residue m) {
  Residue r = a % m;
  return r < 0 ? r + m : r;
}

constexpr Residue mul_mod(Residue a, Residue b, Residue m) {
  __int128 r = static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m);
  return static_cast<Residue>(r % m);
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
constexpr std::tuple<Residue, Residue, Residue> xgcd(Residue a, Residue b) {
  Residue old_r = a, r = b;
  Residue old_s = 1, s = 0;
  Residue old_t = 0, t = 1;
  while (r != 0) {
    Residue q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

constexpr Residue lcm_checked(Residue a, Residue b) {
  if (a == 0 || b == 0) return 0;
  Residue g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > INT64_MAX) throw std::overflow_error("lcm overflow");
  return static_cast<Residue>(l);
}

constexpr bool is_prime(Residue n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (Residue d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Returns (p, k) with n = p^k and p prime, or (0, 0) if n is not a prime power.
constexpr std::pair<Residue, int> prime_power(Residue n) {
  if (n < 2) return {0, 0};
  Residue p = 0;
  for (Residue d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return {n, 1};
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  if (n != 1) return {0, 0};
  return {p, k};
}

/// Distinct prime divisors, increasing.
inline std::vector<Residue> prime_divisors(Residue n) {
  std::vector<Residue> out;
  for (Residue d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// All positive divisors, increasing.
inline std::vector<Residue> divisors(Residue n) {
  std::vector<Residue> small, large;
  for (Residue d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

constexpr Residue ipow(Residue base, int exp) {
  Residue r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Largest power of p dividing n.
constexpr Residue p_part(Residue n, Residue p) {
  Residue r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

/// Exponent k with p^k = n; requires n to be a power of p.
constexpr int log_p(Residue n, Residue p) {
  int k = 0;
  while (n > 1) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace abelcode
