#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abelcode/echelon.hpp"
#include "abelcode/int_matrix.hpp"
#include "abelcode/solve.hpp"
#include "abelcode/window.hpp"

namespace abelcode {

/// A subgroup G of a product window, kept with the generators it was built
/// from and a canonical echelon form. Two subgroups are equal iff their
/// canonical forms are identical.
class WindowSubgroup {
 public:
  WindowSubgroup() = default;
  WindowSubgroup(WindowPtr window, std::vector<Element> generators)
      : window_(std::move(window)), generators_(std::move(generators)) {
    std::vector<detail::Vec> rows;
    rows.reserve(generators_.size());
    for (const Element& g : generators_) {
      if (!same_window(g.window_ptr(), window_)) throw InputError("generator does not belong to the subgroup's window");
      rows.push_back(g.residues());
    }
    canon_ = detail::echelonize(std::move(rows), window_->moduli(), detail::natural_order(window_->factor_count()));
  }

  static WindowSubgroup trivial(WindowPtr w) { return WindowSubgroup(std::move(w), {}); }
  static WindowSubgroup full(WindowPtr w) {
    std::vector<Element> gens;
    for (std::size_t f = 0; f < w->factor_count(); ++f) {
      std::vector<Residue> r(w->factor_count(), 0);
      r[f] = 1;
      gens.emplace_back(w, std::move(r));
    }
    return WindowSubgroup(w, std::move(gens));
  }

  const WindowPtr& window_ptr() const noexcept { return window_; }
  const ProductWindow& window() const noexcept { return *window_; }
  const std::vector<Element>& generators() const noexcept { return generators_; }

  /// Canonical generator rows, in pivot order.
  std::vector<Element> basis() const {
    std::vector<Element> out;
    out.reserve(canon_.rows.size());
    for (const auto& r : canon_.rows) out.emplace_back(window_, r);
    return out;
  }
  const std::vector<detail::Vec>& canonical_rows() const noexcept { return canon_.rows; }
  const std::vector<std::size_t>& pivots() const noexcept { return canon_.pivots; }

  /// Number of values each canonical coefficient ranges over.
  std::vector<Residue> radices() const {
    std::vector<Residue> out;
    for (std::size_t r = 0; r < canon_.rows.size(); ++r)
      out.push_back(window_->moduli()[canon_.pivots[r]] / canon_.pivot_value(r));
    return out;
  }

  BigInt order() const {
    BigInt n = 1;
    for (Residue r : radices()) n *= r;
    return n;
  }
  bool is_trivial() const noexcept { return canon_.rows.empty(); }

  bool contains(const Element& x) const {
    check(x);
    return detail::decompose(x.residues(), canon_, window_->moduli()).has_value();
  }
  /// Coefficients of x on the canonical rows, if x is in G.
  std::optional<std::vector<Residue>> coordinates(const Element& x) const {
    check(x);
    return detail::decompose(x.residues(), canon_, window_->moduli());
  }
  /// Canonical representative of the coset x + G.
  Element normal_form(const Element& x) const {
    check(x);
    return Element(window_, detail::normal_form(x.residues(), canon_, window_->moduli()));
  }

  bool is_subgroup_of(const WindowSubgroup& other) const {
    if (!same_window(window_, other.window_)) return false;
    for (const auto& r : canon_.rows)
      if (!detail::decompose(r, other.canon_, window_->moduli())) return false;
    return true;
  }

  /// Visit every element exactly once, in mixed-radix order of the canonical
  /// coefficients.
  void for_each(const std::function<void(const Element&)>& fn) const {
    const auto rad = radices();
    const auto& mods = window_->moduli();
    std::vector<Residue> q(rad.size(), 0);
    detail::Vec cur(window_->factor_count(), 0);
    for (;;) {
      fn(Element(window_, cur));
      std::size_t k = 0;
      while (k < rad.size()) {
        // cur += row_k; wrap the digit when it reaches its radix.
        for (std::size_t f = 0; f < cur.size(); ++f) cur[f] = mod_floor(cur[f] + canon_.rows[k][f], mods[f]);
        if (++q[k] < rad[k]) break;
        for (std::size_t f = 0; f < cur.size(); ++f)
          cur[f] = mod_floor(cur[f] - mul_mod(rad[k], canon_.rows[k][f], mods[f]), mods[f]);
        q[k] = 0;
        ++k;
      }
      if (k == rad.size()) return;
    }
  }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    for_each([&](const Element& e) { out.push_back(e); });
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const WindowSubgroup& a, const WindowSubgroup& b) {
    return same_window(a.window_, b.window_) && a.canon_.rows == b.canon_.rows;
  }

 private:
  void check(const Element& x) const {
    if (!same_window(x.window_ptr(), window_)) throw InputError("element and subgroup live in different windows");
  }

  WindowPtr window_;
  std::vector<Element> generators_;
  detail::Echelon canon_;
};

inline bool membership(const Element& x, const WindowSubgroup& g) { return g.contains(x); }

/// exp(G): lcm of the orders of the canonical generators.
inline Residue exponent(const WindowSubgroup& g) {
  Residue e = 1;
  for (const Element& b : g.basis()) e = lcm_checked(e, element_order(b));
  return e;
}

/// Subgroup generated by a list of elements of w.
inline WindowSubgroup span_of(WindowPtr w, std::vector<Element> gens) { return WindowSubgroup(std::move(w), std::move(gens)); }

/// H + K.
inline WindowSubgroup sum(const WindowSubgroup& h, const WindowSubgroup& k) {
  if (!same_window(h.window_ptr(), k.window_ptr())) throw InputError("sum of subgroups from different windows");
  auto gens = h.basis();
  for (Element& e : k.basis()) gens.push_back(std::move(e));
  return WindowSubgroup(h.window_ptr(), std::move(gens));
}

/// k*G.
inline WindowSubgroup multiple(const WindowSubgroup& g, Residue k) {
  std::vector<Element> gens;
  for (const Element& b : g.basis()) gens.push_back(k * b);
  return WindowSubgroup(g.window_ptr(), std::move(gens));
}

namespace detail {

// Elements g of G with f(g) = 0, where f is an ambient homomorphism into a
// mixed-modulus group given by its values on G's canonical rows.
inline WindowSubgroup kernel_on(const WindowSubgroup& g, const std::vector<Vec>& images,
                                std::span<const Residue> target_mods) {
  const std::size_t t = target_mods.size();
  const auto& mods = g.window().moduli();
  std::vector<Residue> all(target_mods.begin(), target_mods.end());
  all.insert(all.end(), mods.begin(), mods.end());
  std::vector<Vec> rows;
  const auto& basis = g.canonical_rows();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Vec v = images[i];
    v.insert(v.end(), basis[i].begin(), basis[i].end());
    rows.push_back(std::move(v));
  }
  Echelon e = echelonize(std::move(rows), all, natural_order(all.size()));
  std::vector<Element> gens;
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    if (e.pivots[r] >= t) gens.emplace_back(g.window_ptr(), Vec(e.rows[r].begin() + static_cast<std::ptrdiff_t>(t), e.rows[r].end()));
  return WindowSubgroup(g.window_ptr(), std::move(gens));
}

}  // namespace detail

/// G[d] = { g in G : d*g = 0 }.
inline WindowSubgroup torsion(const WindowSubgroup& g, Residue d) {
  std::vector<detail::Vec> images;
  for (const auto& r : g.canonical_rows()) images.push_back(detail::scale(d, r, g.window().moduli()));
  return detail::kernel_on(g, images, g.window().moduli());
}

/// H ∩ K (Zassenhaus).
inline WindowSubgroup intersection(const WindowSubgroup& h, const WindowSubgroup& k) {
  if (!same_window(h.window_ptr(), k.window_ptr())) throw InputError("intersection of subgroups from different windows");
  const auto& mods = h.window().moduli();
  const std::size_t f = mods.size();
  std::vector<Residue> all(mods);
  all.insert(all.end(), mods.begin(), mods.end());
  std::vector<detail::Vec> rows;
  for (const auto& r : h.canonical_rows()) {
    detail::Vec v = r;
    v.insert(v.end(), r.begin(), r.end());
    rows.push_back(std::move(v));
  }
  for (const auto& r : k.canonical_rows()) {
    detail::Vec v = r;
    v.resize(2 * f, 0);
    rows.push_back(std::move(v));
  }
  auto e = detail::echelonize(std::move(rows), all, detail::natural_order(2 * f));
  std::vector<Element> gens;
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    if (e.pivots[r] >= f)
      gens.emplace_back(h.window_ptr(), detail::Vec(e.rows[r].begin() + static_cast<std::ptrdiff_t>(f), e.rows[r].end()));
  return WindowSubgroup(h.window_ptr(), std::move(gens));
}

/// G_{|J} = π_J(G), living in the sub-window indexed by J.
inline WindowSubgroup project(const WindowSubgroup& g, Interval j) {
  WindowPtr sub = sub_window(g.window(), j);
  std::vector<Element> gens;
  for (const Element& b : g.basis()) gens.push_back(restrict_to(b, sub, j));
  return WindowSubgroup(sub, std::move(gens));
}

/// G_J = { c in G : c(j) = 0 for j outside J }, embedded in the full window.
inline WindowSubgroup section(const WindowSubgroup& g, Interval j) {
  if (j.empty()) return WindowSubgroup::trivial(g.window_ptr());
  g.window().check_interval(j);
  const auto& w = g.window();
  std::vector<std::size_t> order;
  std::vector<bool> inside(w.factor_count(), false);
  for (std::size_t f : w.factors_in(j)) inside[f] = true;
  for (std::size_t f = 0; f < w.factor_count(); ++f)
    if (!inside[f]) order.push_back(f);
  const std::size_t outside = order.size();
  for (std::size_t f = 0; f < w.factor_count(); ++f)
    if (inside[f]) order.push_back(f);
  auto e = detail::echelonize(g.canonical_rows(), w.moduli(), order);
  auto rank = detail::order_rank(e);
  std::vector<Element> gens;
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    if (rank[e.pivots[r]] >= outside) gens.emplace_back(g.window_ptr(), e.rows[r]);
  return WindowSubgroup(g.window_ptr(), std::move(gens));
}

/// G ∩ (elements supported in J): the window reading of G ∩ ⊕ G_i.
inline WindowSubgroup intersect_with_sum(const WindowSubgroup& g, Interval j) { return section(g, j); }

/// Subgroup { c in G : d * π_J(c) = 0 }.
inline WindowSubgroup prefix_torsion(const WindowSubgroup& g, Interval j, Residue d) {
  WindowPtr sub = sub_window(g.window(), j);
  std::vector<detail::Vec> images;
  for (const Element& b : g.basis()) images.push_back((d * restrict_to(b, sub, j)).residues());
  return detail::kernel_on(g, images, sub->moduli());
}

/// Embeds an element of the sub-window J back into the full window.
inline Element embed(const Element& x, WindowPtr full, Interval j) {
  std::vector<Residue> r(full->factor_count(), 0);
  auto fs = full->factors_in(j);
  for (std::size_t k = 0; k < fs.size(); ++k) r[fs[k]] = x[k];
  return Element(std::move(full), std::move(r));
}

/// Rank over F_p of an elementary abelian p-subgroup.
inline std::size_t dimension(const WindowSubgroup& g) { return g.canonical_rows().size(); }

/// Integer coefficients c with sum c_i * gens_i = x, found through
/// solve_mixed_modulus; nullopt if x is not in the span.
inline std::optional<std::vector<Residue>> solve_combination(const std::vector<Element>& gens, const Element& x) {
  const auto& mods = x.window().moduli();
  IntMatrix a(mods.size(), gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t f = 0; f < mods.size(); ++f) a(f, j) = gens[j][f];
  std::vector<BigInt> b(x.residues().begin(), x.residues().end());
  auto sol = solve_mixed_modulus(a, b, ModulusVector(mods));
  if (!sol) return std::nullopt;
  std::vector<Residue> out;
  for (const BigInt& c : *sol) out.push_back(static_cast<Residue>(c));
  return out;
}

/// Some y in H with k*y = x, or nullopt when x is not in k*H.
inline std::optional<Element> divide_in(const WindowSubgroup& h, const Element& x, Residue k) {
  auto basis = h.basis();
  std::vector<Element> scaled;
  for (const Element& b : basis) scaled.push_back(k * b);
  auto c = solve_combination(scaled, x);
  if (!c) return std::nullopt;
  Element y = Element::zero(h.window_ptr());
  for (std::size_t i = 0; i < basis.size(); ++i) y += (*c)[i] * basis[i];
  return y;
}

}  // namespace abelcode
