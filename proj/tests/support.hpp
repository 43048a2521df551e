#pragma once

// Random instance generators and glue between library objects and the
// brute-force oracle.

#include <random>
#include <vector>

#include "abelcode/abelcode.hpp"
#include "oracle.hpp"

namespace testing_support {

using namespace abelcode;

/// Element set of the group generated by g's original generators, built by
/// the oracle's closure (no echelon involved).
inline oracle::Set elements_of(const WindowSubgroup& g) {
  std::vector<oracle::Vec> gens;
  for (const Element& x : g.generators()) gens.push_back(x.residues());
  return oracle::closure(g.window().moduli(), gens);
}

inline oracle::Set elements_of(const WindowPtr& w, const std::vector<Element>& gens) {
  std::vector<oracle::Vec> v;
  for (const Element& x : gens) v.push_back(x.residues());
  return oracle::closure(w->moduli(), v);
}

/// Subgroup of a window spanned by generators with staggered supports: the
/// g-th generator starts no earlier than the previous one and is 1-3
/// coordinates wide.
inline WindowSubgroup random_staggered(std::mt19937& rng, const WindowPtr& w, std::size_t gens) {
  const std::size_t n = w->size();
  std::vector<Element> out;
  std::size_t start = 1;
  for (std::size_t g = 0; g < gens; ++g) {
    start = std::min(n, start + std::uniform_int_distribution<std::size_t>(0, 1)(rng));
    const std::size_t width = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<Residue> r(w->factor_count(), 0);
    for (std::size_t i = start; i <= std::min(n, start + width - 1); ++i) {
      auto [b, e] = w->factor_range(i);
      for (std::size_t f = b; f < e; ++f) r[f] = std::uniform_int_distribution<Residue>(0, w->moduli()[f] - 1)(rng);
    }
    out.emplace_back(w, std::move(r));
  }
  return WindowSubgroup(w, std::move(out));
}

/// A nontrivial p-group of order at most 2^12 on a window of 2-5
/// coordinates, components Z(p) or Z(p^2), occasionally two factors.
inline WindowSubgroup random_p_group(std::mt19937& rng, Residue p) {
  for (;;) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    std::vector<ComponentGroup> comps;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Residue> orders{ipow(p, std::uniform_int_distribution<int>(1, 2)(rng))};
      if (std::uniform_int_distribution<int>(0, 5)(rng) == 0) orders.push_back(p);
      comps.emplace_back(orders);
    }
    WindowPtr w = make_window(std::move(comps));
    WindowSubgroup g = random_staggered(rng, w, std::uniform_int_distribution<std::size_t>(1, n + 1)(rng));
    if (!g.is_trivial() && g.order() <= 4096) return g;
  }
}

/// A nontrivial group on components drawn from {Z(2), Z(4), Z(3), Z(9),
/// Z(2) x Z(3)}, order at most 2^12.
inline WindowSubgroup random_mixed_group(std::mt19937& rng) {
  static const std::vector<std::vector<Residue>> pool{{2}, {4}, {3}, {9}, {2, 3}};
  for (;;) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::vector<ComponentGroup> comps;
    for (std::size_t i = 0; i < n; ++i) comps.emplace_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    WindowPtr w = make_window(std::move(comps));
    WindowSubgroup g = random_staggered(rng, w, std::uniform_int_distribution<std::size_t>(1, n + 1)(rng));
    if (!g.is_trivial() && g.order() <= 4096 && prime_divisors(exponent(g)).size() >= 1) return g;
  }
}

/// The running example: Z(4) components, y_1 = (2, 1), y_n = e_n + e_{n+1}.
inline TemplateSpec chain_template() {
  TemplateSpec t;
  t.period = 1;
  t.orders = {ComponentGroup({4})};
  t.fixed_generators = {SupportMap{{1, {2}}, {2, {1}}}};
  t.shifted_generators = {ShiftedPattern{2, 1, SupportMap{{0, {1}}, {1, {1}}}}};
  return t;
}

}  // namespace testing_support
