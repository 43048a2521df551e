#pragma once

// Echelon (Hermite-style) forms of subgroups of Z(m_1) + ... + Z(m_F).
//
// A subgroup corresponds to the full-rank lattice spanned by the generators
// and the vectors m_f * e_f. Its Hermite form in a chosen column order is
// unique; the rows kept here are the ones whose pivot g_f is a proper divisor
// of m_f (the remaining basis rows are the implicit m_f * e_f). Every element
// of the subgroup is uniquely sum_i q_i * row_i with 0 <= q_i < m_{c_i} / g_{c_i}.

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "abelcode/arith.hpp"

namespace abelcode::detail {

using Vec = std::vector<Residue>;

inline void reduce(Vec& v, std::span<const Residue> mods) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod_floor(v[i], mods[i]);
}

inline bool is_zero(const Vec& v) {
  for (Residue x : v)
    if (x != 0) return false;
  return true;
}

// a*x + b*y, reduced.
inline Vec combine(Residue a, const Vec& x, Residue b, const Vec& y, std::span<const Residue> mods) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = mod_floor(mul_mod(a, x[i], mods[i]) + mul_mod(b, y[i], mods[i]), mods[i]);
  return out;
}

inline Vec scale(Residue a, const Vec& x, std::span<const Residue> mods) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = mul_mod(a, x[i], mods[i]);
  return out;
}

// x -= q * y
inline void sub_multiple(Vec& x, Residue q, const Vec& y, std::span<const Residue> mods) {
  if (q == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_floor(x[i] - mul_mod(q, y[i], mods[i]), mods[i]);
}

struct Echelon {
  std::vector<Vec> rows;
  std::vector<std::size_t> pivots;  // pivot column of each row
  std::vector<std::size_t> order;   // column order used

  Residue pivot_value(std::size_t r) const { return rows[r][pivots[r]]; }
};

inline std::vector<std::size_t> natural_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), std::size_t{0});
  return o;
}

inline Echelon echelonize(std::vector<Vec> pending, std::span<const Residue> mods, std::vector<std::size_t> order) {
  for (Vec& v : pending) reduce(v, mods);
  std::erase_if(pending, [](const Vec& v) { return is_zero(v); });

  Echelon e;
  e.order = std::move(order);
  for (std::size_t col : e.order) {
    const Residue m = mods[col];
    std::optional<Vec> piv;
    std::vector<Vec> rest;
    rest.reserve(pending.size() + 1);
    for (Vec& v : pending) {
      if (v[col] == 0) {
        rest.push_back(std::move(v));
        continue;
      }
      if (!piv) {
        piv = std::move(v);
        continue;
      }
      const Residue a = (*piv)[col], b = v[col];
      auto [g, s, t] = xgcd(a, b);
      Vec other = combine(b / g, *piv, -(a / g), v, mods);
      piv = combine(s, *piv, t, v, mods);
      if (!is_zero(other)) rest.push_back(std::move(other));
    }
    if (piv) {
      auto [g, s, t] = xgcd((*piv)[col], m);
      (void)t;
      Vec extra = scale(m / g, *piv, mods);
      Vec p = scale(s, *piv, mods);
      if (!is_zero(extra)) rest.push_back(std::move(extra));
      if (p[col] != 0) {
        e.rows.push_back(std::move(p));
        e.pivots.push_back(col);
      }
    }
    pending = std::move(rest);
  }

  // Reduce entries above each pivot into [0, g).
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    const std::size_t c = e.pivots[i];
    const Residue g = e.rows[i][c];
    for (std::size_t j = 0; j < i; ++j) {
      Residue q = e.rows[j][c] / g;
      sub_multiple(e.rows[j], q, e.rows[i], mods);
    }
  }
  return e;
}

// Position of each column in e.order.
inline std::vector<std::size_t> order_rank(const Echelon& e) {
  std::vector<std::size_t> rank(e.order.size());
  for (std::size_t k = 0; k < e.order.size(); ++k) rank[e.order[k]] = k;
  return rank;
}

/// Reduce x against the echelon. Returns coefficients q (one per row) with
/// x = sum q_i row_i when x is in the span, nullopt otherwise.
inline std::optional<std::vector<Residue>> decompose(Vec x, const Echelon& e, std::span<const Residue> mods) {
  reduce(x, mods);
  std::vector<Residue> q(e.rows.size(), 0);
  std::size_t r = 0;
  for (std::size_t col : e.order) {
    if (r < e.rows.size() && e.pivots[r] == col) {
      const Residue g = e.rows[r][col];
      if (x[col] % g != 0) return std::nullopt;
      q[r] = x[col] / g;
      sub_multiple(x, q[r], e.rows[r], mods);
      ++r;
    } else if (x[col] != 0) {
      return std::nullopt;
    }
  }
  return q;
}

/// Canonical representative of the coset x + span(e).
inline Vec normal_form(Vec x, const Echelon& e, std::span<const Residue> mods) {
  reduce(x, mods);
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    const std::size_t col = e.pivots[r];
    sub_multiple(x, x[col] / e.rows[r][col], e.rows[r], mods);
  }
  return x;
}

}  // namespace abelcode::detail
