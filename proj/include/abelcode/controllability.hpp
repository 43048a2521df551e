#pragma once

// Controllability, order controllability, weak controllability, weak
// observability and rectangularity of window groups, with certificates.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "abelcode/template_spec.hpp"
#include "abelcode/torsion.hpp"

namespace abelcode {

enum class Status { holds, fails, undetermined };
enum class Property { weakly_controllable, controllable, order_controllable, weakly_observable, rectangular };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::undetermined: return "undetermined-at-window";
  }
  return "";
}

inline std::string_view to_string(Property p) {
  switch (p) {
    case Property::weakly_controllable: return "weakly-controllable";
    case Property::controllable: return "controllable";
    case Property::order_controllable: return "order-controllable";
    case Property::weakly_observable: return "weakly-observable";
    case Property::rectangular: return "rectangular";
  }
  return "";
}

inline Property parse_property(std::string_view s) {
  for (Property p : {Property::weakly_controllable, Property::controllable, Property::order_controllable,
                     Property::weakly_observable, Property::rectangular})
    if (to_string(p) == s) return p;
  throw InputError("unknown property '" + std::string(s) + "'");
}

inline Status parse_status(std::string_view s) {
  for (Status st : {Status::holds, Status::fails, Status::undetermined})
    if (to_string(st) == s) return st;
  throw InputError("unknown status '" + std::string(s) + "'");
}

/// How a failing order-controllability witness behaves: the order of its
/// [1, n] prefix against the least order of a companion supported in [1, n]
/// with the same [1, i] prefix.
struct WitnessDetail {
  std::size_t index = 0;   // i
  std::size_t tested = 0;  // n
  Residue prefix_order = 0;
  std::optional<Residue> companion_order;
  std::optional<Element> companion;
  bool in_group = false;
  bool reproduces_failure = false;
};

struct Certificate {
  Property property = Property::order_controllable;
  std::size_t window = 0;
  Status status = Status::undetermined;
  std::map<std::size_t, std::size_t> indices;
  std::optional<Element> witness;
  std::map<std::size_t, bool> stabilization;
  std::optional<WitnessDetail> detail;
  std::vector<std::string> notes;
};

namespace detail {

inline void check_index(const WindowView& v, std::size_t i, std::size_t cap) {
  if (i < 1 || i > cap || cap > v.size())
    throw InputError("index " + std::to_string(i) + " with cap " + std::to_string(cap) + " is outside the window [1, " +
                     std::to_string(v.size()) + "]");
}

inline Element head_of(const Element& x, std::size_t i) {
  return restrict_to(x, sub_window(x.window(), {1, i}), {1, i});
}

// Elements of `pool` satisfying `bad`, smallest order first, then the
// lexicographically greatest residues. Small pools are scanned completely;
// large ones through their canonical rows, one of which must be bad when any
// element is (the good elements form a subgroup).
inline std::optional<Element> select_witness(const WindowSubgroup& pool, const std::function<bool(const Element&)>& bad) {
  std::optional<Element> best;
  Residue best_order = 0;
  auto consider = [&](const Element& c) {
    if (!bad(c)) return;
    const Residue o = element_order(c);
    if (!best || o < best_order || (o == best_order && c > *best)) {
      best = c;
      best_order = o;
    }
  };
  if (pool.order() <= BigInt(1) << 16)
    pool.for_each(consider);
  else
    for (const Element& b : pool.basis()) consider(b);
  return best;
}

template <class Fn>
auto map_indices(const std::vector<std::size_t>& idx, unsigned jobs, Fn fn) {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  if (jobs <= 1 || idx.size() <= 1) {
    for (std::size_t i : idx) out.push_back(fn(i));
    return out;
  }
  std::vector<std::future<R>> fut;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (fut.size() >= jobs) {
      out.push_back(fut.front().get());
      fut.erase(fut.begin());
    }
    fut.push_back(std::async(std::launch::async, fn, idx[k]));
  }
  for (auto& f : fut) out.push_back(f.get());
  return out;
}

}  // namespace detail

/// Least n in [i, cap] with π_{[1,i]}(G) = π_{[1,i]}(G_{[1,n]}).
inline std::optional<std::size_t> controllability_index(const WindowView& v, std::size_t i, std::size_t cap) {
  detail::check_index(v, i, cap);
  const WindowSubgroup target = project(v.prefix, {1, i});
  for (std::size_t n = i; n <= cap; ++n)
    if (project(section(v.finite, {1, n}), {1, i}) == target) return n;
  return std::nullopt;
}

inline std::optional<std::size_t> controllability_index(const WindowSubgroup& g, std::size_t i, std::size_t cap) {
  return controllability_index(exact_view(g), i, cap);
}

/// Smallest d such that some c in G with d * π_{[1,n]}(c) = 0 has no
/// companion in G_{[1,n]}[d] with the same [1, i] prefix; nullopt when the
/// order condition holds at (i, n).
inline std::optional<Residue> order_condition_failure(const WindowView& v, std::size_t i, std::size_t n) {
  const WindowSubgroup sec = section(v.finite, {1, n});
  for (Residue d : divisors(exponent(v.prefix))) {
    const WindowSubgroup lhs = project(prefix_torsion(v.prefix, {1, n}, d), {1, i});
    const WindowSubgroup rhs = project(torsion(sec, d), {1, i});
    if (!lhs.is_subgroup_of(rhs)) return d;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> order_controllability_index(const WindowView& v, std::size_t i, std::size_t cap) {
  detail::check_index(v, i, cap);
  for (std::size_t n = i; n <= cap; ++n)
    if (!order_condition_failure(v, i, n)) return n;
  return std::nullopt;
}

inline std::optional<std::size_t> order_controllability_index(const WindowSubgroup& g, std::size_t i, std::size_t cap) {
  return order_controllability_index(exact_view(g), i, cap);
}

/// Re-runs the defining check on a single element c for the pair (i, n).
inline WitnessDetail validate_order_witness(const WindowView& v, std::size_t i, std::size_t n, const Element& c) {
  detail::check_index(v, i, n);
  WitnessDetail w;
  w.index = i;
  w.tested = n;
  w.in_group = v.prefix.contains(c);
  w.prefix_order = element_order(truncate(c, {1, n}));
  const Element target = detail::head_of(c, i);
  const WindowSubgroup sec = section(v.finite, {1, n});
  for (Residue e : divisors(exponent(sec))) {
    const WindowSubgroup t = torsion(sec, e);
    if (project(t, {1, i}).contains(target)) {
      w.companion_order = e;
      w.companion = detail::lift_prefix(t, i, target);
      break;
    }
  }
  w.reproduces_failure = w.in_group && (!w.companion_order || w.prefix_order % *w.companion_order != 0);
  return w;
}

/// A failing element for the order condition at (i, n), if there is one.
inline std::optional<Element> order_controllability_witness(const WindowView& v, std::size_t i, std::size_t n) {
  detail::check_index(v, i, n);
  auto d = order_condition_failure(v, i, n);
  if (!d) return std::nullopt;
  const WindowSubgroup rhs = project(torsion(section(v.finite, {1, n}), *d), {1, i});
  return detail::select_witness(prefix_torsion(v.prefix, {1, n}, *d),
                                [&](const Element& c) { return !rhs.contains(detail::head_of(c, i)); });
}

/// An element of G whose [1, i] prefix no element of G_{[1,n]} matches.
inline std::optional<Element> controllability_witness(const WindowView& v, std::size_t i, std::size_t n) {
  detail::check_index(v, i, n);
  const WindowSubgroup rhs = project(section(v.finite, {1, n}), {1, i});
  return detail::select_witness(v.prefix, [&](const Element& c) { return !rhs.contains(detail::head_of(c, i)); });
}

/// Order-controllability indices n_1..n_N of a plain window group.
inline std::vector<std::optional<std::size_t>> order_controllability_sequence(const WindowView& v, unsigned jobs = 1) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i <= v.size(); ++i) idx.push_back(i);
  return detail::map_indices(idx, jobs, [&](std::size_t i) { return order_controllability_index(v, i, v.size()); });
}

/// A group given outright, or a template that can be unrolled at any window.
class GroupSource {
 public:
  static GroupSource from_group(WindowSubgroup g) {
    GroupSource s;
    s.src_ = std::move(g);
    return s;
  }
  static GroupSource from_template(TemplateSpec t) {
    t.validate();
    GroupSource s;
    s.src_ = std::move(t);
    return s;
  }

  bool is_template() const noexcept { return std::holds_alternative<TemplateSpec>(src_); }
  const WindowSubgroup& group() const { return std::get<WindowSubgroup>(src_); }
  const TemplateSpec& spec() const { return std::get<TemplateSpec>(src_); }

  WindowView view(std::size_t n) const {
    if (!is_template()) {
      const auto& g = group();
      if (n != g.window().size())
        throw InputError("window " + std::to_string(n) + " does not match the group file's " +
                         std::to_string(g.window().size()) + " components");
      return exact_view(g);
    }
    return template_view(unroll_template(spec(), n));
  }

 private:
  std::variant<WindowSubgroup, TemplateSpec> src_;
};

namespace detail {

// Indices checked at window n: all of [1, min(cap, n)] for exact views, and
// only those clear of the template margin otherwise.
inline std::vector<std::size_t> queried_indices(const WindowView& v, std::optional<std::size_t> max_index) {
  std::size_t top = v.size();
  if (!v.exact) top = v.size() > v.margin ? v.size() - v.margin : 0;
  if (max_index) top = std::min(top, *max_index);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= top; ++i) out.push_back(i);
  return out;
}

inline std::optional<WindowView> smaller_view(const GroupSource& src, std::size_t n) {
  if (!src.is_template() || n < 2) return std::nullopt;
  try {
    return src.view(n - 1);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

using IndexFn = std::function<std::optional<std::size_t>(const WindowView&, std::size_t, std::size_t)>;

inline Certificate certify_indices(const GroupSource& src, Property prop, std::size_t n, std::optional<std::size_t> max_index,
                                   unsigned jobs, const IndexFn& index_fn) {
  const WindowView v = src.view(n);
  Certificate c;
  c.property = prop;
  c.window = n;
  const auto idx = queried_indices(v, max_index);
  if (idx.empty()) {
    c.status = Status::undetermined;
    c.notes.push_back("the template margin leaves no index to check at this window");
    return c;
  }
  const auto found = map_indices(idx, jobs, [&](std::size_t i) { return index_fn(v, i, n); });
  const auto prev = smaller_view(src, n);
  std::vector<std::size_t> prev_idx;
  if (prev) prev_idx = queried_indices(*prev, max_index);

  std::optional<std::size_t> first_missing;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    if (found[k]) c.indices[i] = *found[k];
    else if (!first_missing) first_missing = i;
    bool stable = !src.is_template();
    if (prev && i <= prev_idx.size()) stable = index_fn(*prev, i, n - 1) == found[k];
    c.stabilization[i] = stable;
  }
  if (!first_missing) {
    c.status = Status::holds;
    return c;
  }
  c.status = Status::fails;
  const std::size_t i = *first_missing;
  if (prop == Property::order_controllable) {
    auto w = order_controllability_witness(v, i, n);
    c.witness = *w;
    c.detail = validate_order_witness(v, i, n, *w);
  } else {
    c.witness = *controllability_witness(v, i, n);
    c.detail = WitnessDetail{i, n, element_order(*c.witness), std::nullopt, std::nullopt, true, true};
  }
  return c;
}

}  // namespace detail

inline Certificate certify_controllable(const GroupSource& src, std::size_t n, std::optional<std::size_t> max_index = {},
                                        unsigned jobs = 1) {
  return detail::certify_indices(src, Property::controllable, n, max_index, jobs,
                                 [](const WindowView& v, std::size_t i, std::size_t cap) { return controllability_index(v, i, cap); });
}

inline Certificate certify_order_controllable(const GroupSource& src, std::size_t n,
                                              std::optional<std::size_t> max_index = {}, unsigned jobs = 1) {
  return detail::certify_indices(src, Property::order_controllable, n, max_index, jobs,
                                 [](const WindowView& v, std::size_t i, std::size_t cap) {
                                   return order_controllability_index(v, i, cap);
                                 });
}

/// π_{[1,i]} of the finitely supported part equals π_{[1,i]}(G) for every
/// index clear of the margin. Indices record the controllability index.
inline Certificate is_weakly_controllable(const GroupSource& src, std::size_t n, std::optional<std::size_t> max_index = {},
                                          unsigned jobs = 1) {
  // G_{[1,N]} is the whole finite part, so an index exists exactly when the
  // finite part reaches every prefix.
  Certificate c = certify_controllable(src, n, max_index, jobs);
  c.property = Property::weakly_controllable;
  return c;
}

inline Certificate is_weakly_controllable(const WindowSubgroup& g) {
  return is_weakly_controllable(GroupSource::from_group(g), g.window().size());
}

/// H ⊆ G given as subgroups of one window. A window subgroup is its own
/// closure, so the verdict is holds once H ⊆ G is confirmed.
inline Certificate is_weakly_observable(const WindowSubgroup& h, const WindowSubgroup& g) {
  if (!h.is_subgroup_of(g)) throw InputError("weak observability: H is not contained in G");
  Certificate c;
  c.property = Property::weakly_observable;
  c.window = g.window().size();
  c.status = Status::holds;
  return c;
}

namespace detail {

// Sections of the finite part against sections of the window closure, for
// n clear of the margin; the first n where they differ, or nullopt.
inline std::optional<std::pair<std::size_t, Element>> observability_gap(const WindowView& v) {
  const std::size_t top = v.size() > v.margin ? v.size() - v.margin : 0;
  for (std::size_t n = 1; n <= top; ++n) {
    const WindowSubgroup fin = section(v.finite, {1, n});
    const WindowSubgroup clo = section(v.prefix, {1, n});
    if (!(fin == clo)) {
      auto w = select_witness(clo, [&](const Element& x) { return !fin.contains(x); });
      return std::pair{n, *w};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Weak observability of a template group: its finitely supported elements
/// compared with those of the window closure, at windows n and n + 1.
inline Certificate is_weakly_observable(const GroupSource& src, std::size_t n) {
  Certificate c;
  c.property = Property::weakly_observable;
  c.window = n;
  if (!src.is_template()) {
    const auto& g = src.group();
    if (n != g.window().size()) throw InputError("window does not match the group file");
    c.status = Status::holds;
    return c;
  }
  const WindowView v = src.view(n), w = src.view(n + 1);
  if (v.size() <= v.margin) {
    c.status = Status::undetermined;
    c.notes.push_back("the template margin leaves no section to compare at this window");
    return c;
  }
  const auto gap_n = detail::observability_gap(v);
  const auto gap_next = detail::observability_gap(w);
  c.notes.push_back("window reading: finite-support sections compared with the window closure at N and N + 1");
  if (!gap_n && !gap_next) {
    c.status = Status::holds;
  } else if (gap_n && gap_next) {
    c.status = Status::fails;
    c.witness = gap_n->second;
  } else {
    c.status = Status::undetermined;
    c.notes.push_back("verdict changed between N and N + 1");
  }
  return c;
}

/// G = ∏ π_{[i,i]}(G). On failure the witness lies in the product of the
/// coordinate projections but not in G.
inline Certificate is_rectangular(const WindowSubgroup& g) {
  Certificate c;
  c.property = Property::rectangular;
  const std::size_t n = g.window().size();
  c.window = n;
  std::vector<Element> gens;
  for (std::size_t i = 1; i <= n; ++i)
    for (const Element& b : project(g, {i, i}).basis()) gens.push_back(embed(b, g.window_ptr(), {i, i}));
  const WindowSubgroup prod(g.window_ptr(), std::move(gens));
  if (prod == g) {
    c.status = Status::holds;
    for (std::size_t i = 1; i <= n; ++i) c.indices[i] = i;
  } else {
    c.status = Status::fails;
    c.witness = *detail::select_witness(prod, [&](const Element& x) { return !g.contains(x); });
  }
  for (std::size_t i = 1; i <= n; ++i) c.stabilization[i] = true;
  return c;
}

inline Certificate is_rectangular(const GroupSource& src, std::size_t n) {
  const WindowView v = src.view(n);
  Certificate c = is_rectangular(v.finite);
  if (src.is_template()) {
    c.stabilization.clear();
    c.notes.push_back("checked on the subgroup generated by generators supported inside the window");
  }
  return c;
}

/// Dispatch on the property name.
inline Certificate certify(const GroupSource& src, Property p, std::size_t n, std::optional<std::size_t> max_index = {},
                           unsigned jobs = 1) {
  switch (p) {
    case Property::weakly_controllable: return is_weakly_controllable(src, n, max_index, jobs);
    case Property::controllable: return certify_controllable(src, n, max_index, jobs);
    case Property::order_controllable: return certify_order_controllable(src, n, max_index, jobs);
    case Property::weakly_observable: return is_weakly_observable(src, n);
    case Property::rectangular: return is_rectangular(src, n);
  }
  throw InputError("unknown property");
}

}  // namespace abelcode
