#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "abelcode/int_matrix.hpp"

namespace abelcode {

/// U * M * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... ,
/// nonnegative, zeros trailing.
struct SnfResult {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

// Position of the nonzero entry of least absolute value in the block
// [t.., t..], or nullopt if the block is zero.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_nonzero(const IntMatrix& d, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  BigInt best_abs;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      BigInt a = abs(d(i, j));
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = a;
        if (best_abs == 1) return best;
      }
    }
  return best;
}

}  // namespace detail

/// Smith normal form by elementary row/column reduction, pivoting on the
/// entry of smallest absolute value.
inline SnfResult smith_normal_form(const IntMatrix& m) {
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());
  const std::size_t rank_bound = std::min(m.rows(), m.cols());

  for (std::size_t t = 0; t < rank_bound; ++t) {
    auto pos = detail::smallest_nonzero(d, t);
    if (!pos) break;
    d.swap_rows(t, pos->first);
    u.swap_rows(t, pos->first);
    d.swap_cols(t, pos->second);
    v.swap_cols(t, pos->second);

    for (;;) {
      bool pivot_changed = false;
      for (std::size_t i = t + 1; i < d.rows() && !pivot_changed; ++i) {
        if (d(i, t) == 0) continue;
        BigInt q = d(i, t) / d(t, t);
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) {
          d.swap_rows(t, i);
          u.swap_rows(t, i);
          pivot_changed = true;
        }
      }
      for (std::size_t j = t + 1; j < d.cols() && !pivot_changed; ++j) {
        if (d(t, j) == 0) continue;
        BigInt q = d(t, j) / d(t, t);
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) {
          d.swap_cols(t, j);
          v.swap_cols(t, j);
          pivot_changed = true;
        }
      }
      if (pivot_changed) continue;

      // Row and column t are clear; enforce divisibility of the rest.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < d.rows() && !offender; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      d.add_row(t, *offender, 1);
      u.add_row(t, *offender, 1);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(d), std::move(v)};
}

}  // namespace abelcode
