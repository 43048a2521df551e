#pragma once

// p-primary structure of window subgroups: socles, p-heights, maximal-height
// prefix witnesses and the decomposition of a group into its primary parts.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abelcode/subgroup.hpp"

namespace abelcode {

/// A basis of the F_p-vector space G[p].
struct SocleBasis {
  Residue prime = 0;
  std::vector<Element> basis;

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// p-height h(g, G): the largest n with p^n * x = g solvable in G.
struct Height {
  int value = 0;
  friend auto operator<=>(const Height&, const Height&) = default;
};

inline void require_prime(Residue p) {
  if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
}

inline SocleBasis socle(const WindowSubgroup& g, Residue p) {
  require_prime(p);
  return {p, torsion(g, p).basis()};
}

inline WindowSubgroup socle_subgroup(const WindowSubgroup& g, Residue p) {
  require_prime(p);
  return torsion(g, p);
}

inline Height height(const Element& x, const WindowSubgroup& g, Residue p) {
  require_prime(p);
  if (x.is_zero()) throw InputError("the height of 0 is not defined");
  if (!g.contains(x)) throw InputError("height: element is not in the group");
  int n = 0;
  WindowSubgroup cur = g;
  for (;;) {
    WindowSubgroup next = multiple(cur, p);
    if (!next.contains(x)) return {n};
    if (next == cur) throw InputError("element has infinite " + std::to_string(p) + "-height (its order is prime to p)");
    ++n;
    cur = std::move(next);
  }
}

struct PrefixWitness {
  Element element;
  Height height;                       // height inside `section`
  Interval section;                    // the section the height is measured in
  bool special_case = false;           // true when the [j+1, n_i] section was used
};

namespace detail {

// Some element of V whose projection onto [1, i] is `target`, made canonical
// modulo the part of V that vanishes on [1, i].
inline std::optional<Element> lift_prefix(const WindowSubgroup& v, std::size_t i, const Element& target) {
  const Interval head{1, i};
  WindowPtr sub = target.window_ptr();
  auto basis = v.basis();
  std::vector<Element> projected;
  for (const Element& b : basis) projected.push_back(restrict_to(b, sub, head));
  auto c = solve_combination(projected, target);
  if (!c) return std::nullopt;
  Element x = Element::zero(v.window_ptr());
  for (std::size_t k = 0; k < basis.size(); ++k) x += (*c)[k] * basis[k];
  if (i < v.window().size()) x = section(v, {i + 1, v.window().size()}).normal_form(x);
  return x;
}

}  // namespace detail

/// Given x in G_{[1,n_i]}[p] with π_{[1,i]}(x) != 0, returns the element of
/// G_{[1,n_i]}[p] with the same [1, i]-prefix and the largest height inside
/// the section. When π_{[1,i-1]}(x) = 0 and some n_j < i (taking the largest
/// such j) the search runs in G_{[j+1, n_i]} instead. `n_sequence[k - 1]` is
/// n_k; only entries below i are consulted.
inline PrefixWitness max_height_prefix_witness(const Element& x, std::size_t i, const WindowSubgroup& g,
                                               const std::vector<std::size_t>& n_sequence, Residue p) {
  require_prime(p);
  const std::size_t n = g.window().size();
  if (i < 1 || i > n_sequence.size()) throw InputError("prefix index outside the index sequence");
  const std::size_t ni = n_sequence[i - 1];
  if (ni < i || ni > n) throw InputError("n_i must lie in [i, N]");
  if (!(p * x).is_zero()) throw InputError("element is not in the p-socle");
  if (!section(g, {1, ni}).contains(x)) throw InputError("element is not in G_[1,n_i]");
  WindowPtr head = sub_window(g.window(), {1, i});
  Element target = restrict_to(x, head, {1, i});
  if (target.is_zero()) throw InputError("element vanishes on [1, i]");

  Interval where{1, ni};
  bool special = false;
  if (i >= 2 && truncate(x, {1, i - 1}).is_zero()) {
    std::size_t j = 0;
    for (std::size_t k = 1; k < i; ++k)
      if (n_sequence[k - 1] < i) j = k;
    if (j > 0) {
      where = {j + 1, ni};
      special = true;
    }
  }
  const WindowSubgroup s = section(g, where);
  const Residue e = exponent(s);

  int best = -1;
  std::optional<Element> found;
  Residue pt = 1;
  for (int t = 0; pt <= e; ++t, pt *= p) {
    auto cand = detail::lift_prefix(torsion(multiple(s, pt), p), i, target);
    if (!cand) break;
    best = t;
    found = std::move(cand);
  }
  if (!found) throw InputError("no element of the section matches the prefix (is n_i an order-controllability index?)");
  return {*found, {best}, where, special};
}

inline PrefixWitness max_height_prefix_witness(const Element& x, std::size_t i, const WindowSubgroup& g,
                                               std::size_t n_i, Residue p) {
  std::vector<std::size_t> seq(i, n_i);
  for (std::size_t k = 0; k + 1 < i; ++k) seq[k] = i;  // no n_j < i: the special case is off
  return max_height_prefix_witness(x, i, g, seq, p);
}

/// One primary part: the p-factors of every coordinate (trivial components
/// where G_i has no p-part), and the image of G there.
struct PrimaryPart {
  Residue prime = 0;
  std::vector<std::size_t> coordinates;  // N_p: coordinates with a nontrivial p-part, 1-based
  std::vector<std::size_t> factors;      // flattened ambient factors kept, in order
  WindowSubgroup part;                   // G^(p)

  Element restrict(const Element& g) const {
    std::vector<Residue> r;
    for (std::size_t f : factors) r.push_back(g[f]);
    return Element(part.window_ptr(), std::move(r));
  }
  Element embed(const Element& x, const WindowPtr& ambient) const {
    std::vector<Residue> r(ambient->factor_count(), 0);
    for (std::size_t k = 0; k < factors.size(); ++k) r[factors[k]] = x[k];
    return Element(ambient, std::move(r));
  }
};

struct PrimaryDecomposition {
  WindowPtr window;
  std::vector<PrimaryPart> parts;  // increasing primes

  std::vector<Residue> primes() const {
    std::vector<Residue> out;
    for (const auto& p : parts) out.push_back(p.prime);
    return out;
  }
  /// g = sum of its p-parts, each embedded back into the ambient window.
  std::vector<Element> split(const Element& g) const {
    std::vector<Element> out;
    for (const auto& p : parts) out.push_back(p.embed(p.restrict(g), window));
    return out;
  }
};

inline PrimaryPart primary_part(const WindowSubgroup& g, Residue p) {
  const auto& w = g.window();
  PrimaryPart part;
  part.prime = p;
  std::vector<ComponentGroup> comps;
  for (std::size_t i = 1; i <= w.size(); ++i) {
    std::vector<Residue> orders;
    auto [b, e] = w.factor_range(i);
    for (std::size_t f = b; f < e; ++f)
      if (w.moduli()[f] % p == 0) {
        orders.push_back(w.moduli()[f]);
        part.factors.push_back(f);
      }
    if (!orders.empty()) part.coordinates.push_back(i);
    comps.emplace_back(std::move(orders));
  }
  WindowPtr pw = make_window(std::move(comps));
  std::vector<Element> gens;
  for (const Element& b : g.basis()) {
    std::vector<Residue> r;
    for (std::size_t f : part.factors) r.push_back(b[f]);
    gens.emplace_back(pw, std::move(r));
  }
  part.part = WindowSubgroup(pw, std::move(gens));
  return part;
}

/// G^(p) for every prime dividing |G|, in increasing order.
inline PrimaryDecomposition primary_decompose(const WindowSubgroup& g) {
  PrimaryDecomposition d;
  d.window = g.window_ptr();
  for (Residue p : prime_divisors(exponent(g))) d.parts.push_back(primary_part(g, p));
  return d;
}

}  // namespace abelcode
