#pragma once

// Periodic descriptions of infinite products and shift-invariant generator
// families, and their materialization at a finite window.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "abelcode/subgroup.hpp"

namespace abelcode {

/// Coordinate -> residue list, one residue per cyclic factor of that coordinate.
using SupportMap = std::map<std::size_t, std::vector<Residue>>;

struct ShiftedPattern {
  std::size_t start = 1;
  std::size_t stride = 1;
  SupportMap pattern;  // offset (from the instance start) -> residues

  std::size_t width() const {
    if (pattern.empty()) return 0;
    return pattern.rbegin()->first - pattern.begin()->first + 1;
  }
};

struct TemplateSpec {
  std::size_t period = 1;
  std::vector<ComponentGroup> orders;  // G_i = orders[(i - 1) % period]
  std::vector<SupportMap> fixed_generators;
  std::vector<ShiftedPattern> shifted_generators;

  const ComponentGroup& component(std::size_t coord) const { return orders.at((coord - 1) % period); }

  /// Widest shifted pattern; instances near the right edge of a window are
  /// cut off, so coordinates within this distance of N are unreliable.
  std::size_t margin() const {
    std::size_t m = 0;
    for (const auto& s : shifted_generators) m = std::max(m, s.width());
    return m;
  }

  void validate() const {
    if (period < 1) throw InputError("component_template.period must be >= 1");
    if (orders.size() != period) throw InputError("component_template.orders must list exactly `period` components");
    for (const auto& s : shifted_generators) {
      if (s.stride < 1) throw InputError("shifted generator stride must be >= 1");
      if (s.start < 1) throw InputError("shifted generator start must be >= 1");
    }
  }
};

struct SkippedInstance {
  std::size_t pattern = 0;  // index into shifted_generators
  std::size_t start = 0;    // 1-based start coordinate of the instance
  std::size_t extent = 0;   // last coordinate the instance would need
};

/// A template materialized at window N.
struct UnrolledTemplate {
  WindowPtr window;
  /// Generated by the fixed generators and every shifted instance that fits
  /// entirely inside [1, N]: elements known to have support in the window.
  WindowSubgroup subgroup;
  /// Generated by all generators truncated to [1, N]: the projection of the
  /// infinite group onto the window.
  WindowSubgroup truncated;
  std::vector<SkippedInstance> skipped;
  std::size_t margin = 0;
};

namespace detail {

inline Element element_from_support(const WindowPtr& w, const SupportMap& support, std::size_t shift, bool clip) {
  std::vector<Residue> flat(w->factor_count(), 0);
  for (const auto& [offset, residues] : support) {
    const std::size_t coord = offset + shift;
    if (coord < 1 || coord > w->size()) {
      if (clip) continue;
      throw InputError("generator support index " + std::to_string(coord) + " lies outside the window [1, " +
                       std::to_string(w->size()) + "]");
    }
    auto [b, e] = w->factor_range(coord);
    if (residues.size() != e - b)
      throw InputError("coordinate " + std::to_string(coord) + " expects " + std::to_string(e - b) + " residues, got " +
                       std::to_string(residues.size()));
    for (std::size_t k = 0; k < residues.size(); ++k) {
      const Residue m = w->moduli()[b + k];
      if (residues[k] < 0 || residues[k] >= m)
        throw InputError("residue " + std::to_string(residues[k]) + " at coordinate " + std::to_string(coord) +
                         " is outside [0, " + std::to_string(m) + ")");
      flat[b + k] = residues[k];
    }
  }
  return Element(w, std::move(flat));
}

}  // namespace detail

inline UnrolledTemplate unroll_template(const TemplateSpec& t, std::size_t n) {
  t.validate();
  if (n < 1) throw InputError("window length must be >= 1");
  for (const auto& g : t.fixed_generators)
    if (!g.empty() && g.rbegin()->first > n)
      throw InputError("window " + std::to_string(n) + " is smaller than fixed generator support index " +
                       std::to_string(g.rbegin()->first));

  std::vector<ComponentGroup> comps;
  for (std::size_t i = 1; i <= n; ++i) comps.push_back(t.component(i));
  WindowPtr w = make_window(std::move(comps));

  std::vector<Element> inside, clipped;
  for (const auto& g : t.fixed_generators) inside.push_back(detail::element_from_support(w, g, 0, false));

  struct Instance {
    std::size_t start, pattern;
  };
  std::vector<Instance> instances;
  for (std::size_t k = 0; k < t.shifted_generators.size(); ++k) {
    const auto& s = t.shifted_generators[k];
    if (s.pattern.empty()) continue;
    for (std::size_t st = s.start; st + s.pattern.begin()->first <= n; st += s.stride) instances.push_back({st, k});
  }
  std::sort(instances.begin(), instances.end(),
            [](const Instance& a, const Instance& b) { return std::pair(a.start, a.pattern) < std::pair(b.start, b.pattern); });

  UnrolledTemplate out;
  out.window = w;
  out.margin = t.margin();
  for (const auto& in : instances) {
    const auto& s = t.shifted_generators[in.pattern];
    const std::size_t extent = in.start + s.pattern.rbegin()->first;
    if (extent <= n) {
      inside.push_back(detail::element_from_support(w, s.pattern, in.start, false));
    } else {
      out.skipped.push_back({in.pattern, in.start, extent});
      clipped.push_back(detail::element_from_support(w, s.pattern, in.start, true));
    }
  }
  std::vector<Element> all = inside;
  all.insert(all.end(), clipped.begin(), clipped.end());
  out.subgroup = WindowSubgroup(w, std::move(inside));
  out.truncated = WindowSubgroup(w, std::move(all));
  return out;
}

/// A group observed through a window. For a group given outright the two
/// parts coincide and the view is exact; for an unrolled template `finite`
/// holds the elements known to be supported inside the window and `prefix`
/// the projection of the whole group onto it.
struct WindowView {
  WindowSubgroup finite;
  WindowSubgroup prefix;
  std::size_t margin = 0;
  bool exact = true;

  const ProductWindow& window() const { return prefix.window(); }
  std::size_t size() const { return prefix.window().size(); }
};

inline WindowView exact_view(const WindowSubgroup& g) { return {g, g, 0, true}; }

inline WindowView template_view(const UnrolledTemplate& u) { return {u.subgroup, u.truncated, u.margin, false}; }

}  // namespace abelcode
