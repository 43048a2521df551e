#pragma once

// Ambient products of finite abelian groups truncated to a window of
// coordinates 1..N, and their elements. Coordinates are 1-based throughout
// the public interface, matching interval notation such as [1, n_i].

#include <algorithm>
#include <compare>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "abelcode/arith.hpp"

namespace abelcode {

/// Cyclic decomposition of one component G_i: a list of prime-power orders.
/// The empty list is the trivial group.
class ComponentGroup {
 public:
  ComponentGroup() = default;
  explicit ComponentGroup(std::vector<Residue> factor_orders) : orders_(std::move(factor_orders)) {
    for (Residue m : orders_) {
      if (m >= kMaxModulus) throw InputError("factor order " + std::to_string(m) + " exceeds the supported range");
      if (prime_power(m).first == 0)
        throw InputError("factor order " + std::to_string(m) + " is not a prime power p^k with k >= 1");
    }
  }
  const std::vector<Residue>& factor_orders() const noexcept { return orders_; }
  std::size_t factor_count() const noexcept { return orders_.size(); }
  bool is_trivial() const noexcept { return orders_.empty(); }

  friend bool operator==(const ComponentGroup&, const ComponentGroup&) = default;

 private:
  std::vector<Residue> orders_;
};

/// Closed 1-based coordinate interval [first, last]; empty when first > last.
struct Interval {
  std::size_t first = 1;
  std::size_t last = 0;

  bool empty() const noexcept { return first > last; }
  bool contains(std::size_t i) const noexcept { return first <= i && i <= last; }
  std::size_t length() const noexcept { return empty() ? 0 : last - first + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class ProductWindow;
using WindowPtr = std::shared_ptr<const ProductWindow>;

/// The product G_1 x ... x G_N. Factors of all components are flattened into
/// a single modulus list; factor f belongs to coordinate coordinate_of(f).
class ProductWindow {
 public:
  explicit ProductWindow(std::vector<ComponentGroup> components) : components_(std::move(components)) {
    if (components_.empty()) throw InputError("a product window needs at least one coordinate");
    offsets_.reserve(components_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < components_.size(); ++i) {
      for (Residue m : components_[i].factor_orders()) {
        moduli_.push_back(m);
        coordinate_.push_back(i + 1);
      }
      offsets_.push_back(moduli_.size());
    }
  }

  std::size_t size() const noexcept { return components_.size(); }
  std::size_t factor_count() const noexcept { return moduli_.size(); }
  const std::vector<ComponentGroup>& components() const noexcept { return components_; }
  const ComponentGroup& component(std::size_t coord) const { return components_.at(coord - 1); }
  const std::vector<Residue>& moduli() const noexcept { return moduli_; }

  /// Flattened factor range [begin, end) of a 1-based coordinate.
  std::pair<std::size_t, std::size_t> factor_range(std::size_t coord) const {
    return {offsets_.at(coord - 1), offsets_.at(coord)};
  }
  std::size_t coordinate_of(std::size_t factor) const { return coordinate_.at(factor); }

  /// Flattened factors belonging to coordinates inside J.
  std::vector<std::size_t> factors_in(Interval j) const {
    std::vector<std::size_t> out;
    if (j.empty()) return out;
    for (std::size_t f = offsets_.at(j.first - 1); f < offsets_.at(std::min(j.last, size())); ++f) out.push_back(f);
    return out;
  }

  Interval full() const noexcept { return {1, size()}; }

  void check_interval(Interval j) const {
    if (j.empty() || j.first < 1 || j.last > size())
      throw InputError("interval [" + std::to_string(j.first) + ", " + std::to_string(j.last) +
                       "] is not inside the window [1, " + std::to_string(size()) + "]");
  }

  friend bool operator==(const ProductWindow& a, const ProductWindow& b) { return a.components_ == b.components_; }

 private:
  std::vector<ComponentGroup> components_;
  std::vector<Residue> moduli_;
  std::vector<std::size_t> coordinate_;
  std::vector<std::size_t> offsets_;
};

inline WindowPtr make_window(std::vector<ComponentGroup> components) {
  return std::make_shared<const ProductWindow>(std::move(components));
}

/// N copies of the same component.
inline WindowPtr uniform_window(std::size_t n, const ComponentGroup& c) {
  return make_window(std::vector<ComponentGroup>(n, c));
}

/// Sub-window made of the components whose coordinates lie in J.
inline WindowPtr sub_window(const ProductWindow& w, Interval j) {
  w.check_interval(j);
  std::vector<ComponentGroup> comps(w.components().begin() + static_cast<std::ptrdiff_t>(j.first - 1),
                                    w.components().begin() + static_cast<std::ptrdiff_t>(j.last));
  return make_window(std::move(comps));
}

inline bool same_window(const WindowPtr& a, const WindowPtr& b) { return a == b || *a == *b; }

/// A point of the window: one residue per flattened factor, each in [0, m).
class Element {
 public:
  Element() = default;
  Element(WindowPtr window, std::vector<Residue> residues) : window_(std::move(window)), r_(std::move(residues)) {
    if (r_.size() != window_->factor_count()) throw InputError("element residue count does not match the window");
    const auto& m = window_->moduli();
    for (std::size_t f = 0; f < r_.size(); ++f) r_[f] = mod_floor(r_[f], m[f]);
  }
  static Element zero(WindowPtr window) {
    std::size_t n = window->factor_count();
    return Element(std::move(window), std::vector<Residue>(n, 0));
  }

  const WindowPtr& window_ptr() const noexcept { return window_; }
  const ProductWindow& window() const noexcept { return *window_; }
  const std::vector<Residue>& residues() const noexcept { return r_; }
  Residue operator[](std::size_t factor) const { return r_[factor]; }

  /// Residues of one coordinate's factors.
  std::vector<Residue> at(std::size_t coord) const {
    auto [b, e] = window_->factor_range(coord);
    return {r_.begin() + static_cast<std::ptrdiff_t>(b), r_.begin() + static_cast<std::ptrdiff_t>(e)};
  }

  bool is_zero() const noexcept {
    return std::all_of(r_.begin(), r_.end(), [](Residue x) { return x == 0; });
  }
  bool is_zero_at(std::size_t coord) const {
    auto [b, e] = window_->factor_range(coord);
    for (std::size_t f = b; f < e; ++f)
      if (r_[f] != 0) return false;
    return true;
  }

  /// supp(x) = { i : x_i != 0 }, 1-based and increasing.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 1; i <= window_->size(); ++i)
      if (!is_zero_at(i)) s.push_back(i);
    return s;
  }
  bool supported_in(Interval j) const {
    for (std::size_t i = 1; i <= window_->size(); ++i)
      if (!j.contains(i) && !is_zero_at(i)) return false;
    return true;
  }

  Element& operator+=(const Element& o) {
    check_same(o);
    const auto& m = window_->moduli();
    for (std::size_t f = 0; f < r_.size(); ++f) r_[f] = mod_floor(r_[f] + o.r_[f], m[f]);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_same(o);
    const auto& m = window_->moduli();
    for (std::size_t f = 0; f < r_.size(); ++f) r_[f] = mod_floor(r_[f] - o.r_[f], m[f]);
    return *this;
  }
  Element& operator*=(Residue k) {
    const auto& m = window_->moduli();
    for (std::size_t f = 0; f < r_.size(); ++f) r_[f] = mul_mod(r_[f], k, m[f]);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Residue k, Element a) { return a *= k; }
  Element operator-() const { return Element::zero(window_) - *this; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.r_ == b.r_ && same_window(a.window_, b.window_);
  }
  /// Lexicographic on the flattened residues.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) { return a.r_ <=> b.r_; }

 private:
  void check_same(const Element& o) const {
    if (!same_window(window_, o.window_)) throw InputError("elements live in different windows");
  }

  WindowPtr window_;
  std::vector<Residue> r_;
};

/// Build an element from per-coordinate residue lists.
inline Element element_from_coordinates(WindowPtr w, const std::vector<std::vector<Residue>>& coords) {
  if (coords.size() != w->size()) throw InputError("element has the wrong number of coordinates");
  std::vector<Residue> flat;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].size() != w->components()[i].factor_count())
      throw InputError("coordinate " + std::to_string(i + 1) + " has the wrong number of residues");
    flat.insert(flat.end(), coords[i].begin(), coords[i].end());
  }
  return Element(std::move(w), std::move(flat));
}

/// Least n >= 1 with n*g = 0: the lcm of the residue orders.
inline Residue element_order(const Element& g) {
  Residue ord = 1;
  const auto& m = g.window().moduli();
  for (std::size_t f = 0; f < m.size(); ++f) ord = lcm_checked(ord, m[f] / std::gcd(g[f], m[f]));
  return ord;
}

/// Restriction of x to the coordinates of J, as an element of the sub-window.
inline Element restrict_to(const Element& x, WindowPtr sub, Interval j) {
  std::vector<Residue> r;
  for (std::size_t f : x.window().factors_in(j)) r.push_back(x[f]);
  return Element(std::move(sub), std::move(r));
}

/// x with every coordinate outside J set to zero.
inline Element truncate(const Element& x, Interval j) {
  std::vector<Residue> r(x.residues().size(), 0);
  for (std::size_t f : x.window().factors_in(j)) r[f] = x[f];
  return Element(x.window_ptr(), std::move(r));
}

}  // namespace abelcode
