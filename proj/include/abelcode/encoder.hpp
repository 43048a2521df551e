#pragma once

// Block-by-block construction of finite-support generating sets for
// order-controllable p-groups, the encoder Φ(k) = Σ k_m y_m built on them,
// and the multi-prime assembly.

#include <cstddef>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abelcode/controllability.hpp"

namespace abelcode {

/// Raised when synthesis is asked to run without a usable certificate.
class SynthesisRefused : public std::runtime_error {
 public:
  SynthesisRefused(Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  Status status() const noexcept { return status_; }

 private:
  Status status_;
};

struct Block {
  std::size_t d = 0;      // block boundary d_k
  std::size_t count = 0;  // |B_k|
};

struct GeneratingSet {
  Residue prime = 0;
  WindowPtr window;
  std::vector<Block> blocks;
  std::vector<Element> socle;       // x_m
  std::vector<Element> generators;  // y_m, with x_m = p^{h_m} y_m
  std::vector<int> heights;         // h_m
  std::vector<std::size_t> n_sequence;  // n_i at position i - 1
  Status status = Status::holds;    // undetermined when built from a partial certificate

  std::size_t size() const noexcept { return generators.size(); }

  /// m(k): number of elements in blocks 1..k (m(0) = 0).
  std::size_t cumulative(std::size_t k) const {
    std::size_t m = 0;
    for (std::size_t b = 0; b < k && b < blocks.size(); ++b) m += blocks[b].count;
    return m;
  }
  /// Orders p^{h_m + 1} of the cyclic factors of the domain.
  std::vector<Residue> orders() const {
    std::vector<Residue> out;
    for (int h : heights) out.push_back(ipow(prime, h + 1));
    return out;
  }
};

/// Φ: ∏ Z(orders_m) -> window, k -> Σ k_m y_m.
struct Encoder {
  WindowPtr window;
  std::vector<Residue> orders;
  std::vector<Element> generators;
  std::vector<Residue> primes;  // prime of each generator

  Element encode(const std::vector<Residue>& coeffs) const {
    if (coeffs.size() != generators.size())
      throw InputError("expected " + std::to_string(generators.size()) + " coefficients, got " + std::to_string(coeffs.size()));
    Element z = Element::zero(window);
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
      if (coeffs[m] < 0 || coeffs[m] >= orders[m])
        throw InputError("coefficient " + std::to_string(m + 1) + " = " + std::to_string(coeffs[m]) + " is outside [0, " +
                         std::to_string(orders[m]) + ")");
      z += coeffs[m] * generators[m];
    }
    return z;
  }

  BigInt domain_order() const {
    BigInt n = 1;
    for (Residue o : orders) n *= o;
    return n;
  }
};

inline Encoder make_encoder(const GeneratingSet& gs) {
  return {gs.window, gs.orders(), gs.generators, std::vector<Residue>(gs.size(), gs.prime)};
}

inline Element encode(const Encoder& e, const std::vector<Residue>& coeffs) { return e.encode(coeffs); }

namespace detail {

inline void require_p_group(const WindowSubgroup& g, Residue p) {
  const Residue e = exponent(g);
  if (e != 1 && prime_power(e).first != p) throw InputError("group is not a " + std::to_string(p) + "-group");
}

inline std::vector<std::size_t> n_sequence_from(const Certificate& cert, std::size_t n, bool& partial) {
  std::vector<std::size_t> seq;
  partial = false;
  for (std::size_t i = 1; i <= n; ++i) {
    auto it = cert.indices.find(i);
    if (it == cert.indices.end()) {
      seq.push_back(n);
      partial = true;
    } else {
      seq.push_back(it->second);
    }
  }
  return seq;
}

}  // namespace detail

/// Generating set {y_m} of an order-controllable p-group on its window.
inline GeneratingSet synthesize_p(const WindowSubgroup& g, Residue p, const Certificate& cert, bool allow_undetermined = false) {
  require_prime(p);
  detail::require_p_group(g, p);
  const std::size_t n = g.window().size();
  if (cert.property != Property::order_controllable) throw InputError("synthesis needs an order-controllability certificate");
  if (cert.window != n) throw InputError("certificate window does not match the group");
  if (cert.status == Status::fails) throw SynthesisRefused(Status::fails, "the group is not order controllable on this window");
  if (cert.status == Status::undetermined && !allow_undetermined)
    throw SynthesisRefused(Status::undetermined, "order controllability is undetermined at this window");

  GeneratingSet gs;
  gs.prime = p;
  gs.window = g.window_ptr();
  bool partial = false;
  gs.n_sequence = detail::n_sequence_from(cert, n, partial);
  gs.status = (partial || cert.status != Status::holds) ? Status::undetermined : Status::holds;
  for (std::size_t i = 1; i <= n; ++i)
    if (gs.n_sequence[i - 1] < i || gs.n_sequence[i - 1] > n) throw InputError("certificate index n_i outside [i, N]");

  const WindowSubgroup socle_g = torsion(g, p);
  WindowSubgroup span_x = WindowSubgroup::trivial(g.window_ptr());
  std::size_t d_prev = 0;
  while (!(span_x == socle_g)) {
    std::size_t d = d_prev + 1;
    while (dimension(project(socle_g, {1, d})) == dimension(project(span_x, {1, d}))) ++d;
    const std::size_t nd = gs.n_sequence[d - 1];
    const std::size_t target = dimension(project(socle_g, {1, d}));
    const WindowSubgroup c = section(socle_g, {d_prev + 1, nd});
    std::size_t j = 0;
    for (std::size_t k = 1; k < d; ++k)
      if (gs.n_sequence[k - 1] < d) j = k;
    const WindowSubgroup q = section(g, {j + 1, nd});

    std::size_t count = 0;
    for (int t = log_p(exponent(q), p); t >= 0; --t) {
      if (dimension(project(span_x, {1, d})) == target) break;
      const Residue pt = ipow(p, t);
      const WindowSubgroup v = intersection(c, multiple(q, pt));
      const WindowSubgroup lift_kernel = torsion(q, pt);
      for (const Element& x : v.basis()) {
        if (project(span_x, {1, d}).contains(detail::head_of(x, d))) continue;
        auto y = divide_in(q, x, pt);
        gs.socle.push_back(x);
        gs.generators.push_back(lift_kernel.normal_form(*y));
        gs.heights.push_back(t);
        span_x = sum(span_x, span_of(g.window_ptr(), {x}));
        ++count;
        if (dimension(project(span_x, {1, d})) == target) break;
      }
    }
    if (dimension(project(span_x, {1, d})) != target)
      throw SynthesisRefused(Status::fails, "block " + std::to_string(gs.blocks.size() + 1) +
                                                " cannot be completed inside G_[d_{k-1}+1, n_d]; the indices do not certify "
                                                "order controllability");
    gs.blocks.push_back({d, count});
    d_prev = d;
  }
  return gs;
}

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first failure, empty when passed
};

struct BlockReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

class Checker {
 public:
  explicit Checker(std::string name) { r_.name = std::move(name); }
  void expect(bool ok, const std::string& what) {
    if (!ok && r_.passed) {
      r_.passed = false;
      r_.detail = what;
    }
  }
  CheckResult done() { return std::move(r_); }

 private:
  CheckResult r_;
};

inline bool shape_ok(const GeneratingSet& gs, const WindowSubgroup& g, std::string& why) {
  const std::size_t m = gs.generators.size();
  if (gs.socle.size() != m || gs.heights.size() != m) why = "socle, generator and height lists differ in length";
  else if (gs.cumulative(gs.blocks.size()) != m) why = "block counts do not add up to the number of generators";
  else if (gs.n_sequence.size() != g.window().size()) why = "n_sequence does not cover the window";
  else if (!same_window(gs.window, g.window_ptr())) why = "generating set and group live in different windows";
  else return true;
  return false;
}

}  // namespace detail

/// Re-checks the block conditions (a)-(f), the prefix identity
/// π_{[1,d_k]}(G[p]) = π_{[1,d_k]}(<B_1> + ... + <B_k>), that the x_m span
/// G[p] and that the y_m span G.
inline BlockReport verify_block_properties(const GeneratingSet& gs, const WindowSubgroup& g) {
  BlockReport rep;
  std::string why;
  if (!detail::shape_ok(gs, g, why)) {
    for (const char* name : {"a", "b", "c", "d", "e", "f", "prefix_identity", "coverage", "spanning"}) rep.checks.push_back({name, false, why});
    return rep;
  }
  const Residue p = gs.prime;
  const std::size_t n = g.window().size();
  const WindowPtr w = g.window_ptr();
  const WindowSubgroup socle_g = torsion(g, p);
  detail::Checker a("a"), b("b"), c("c"), d("d"), e("e"), f("f"), prefix_id("prefix_identity");

  std::vector<Element> before;  // x's of earlier blocks
  std::size_t d_prev = 0, m0 = 0;
  for (std::size_t k = 0; k < gs.blocks.size(); ++k) {
    const std::size_t dk = gs.blocks[k].d, cnt = gs.blocks[k].count;
    const std::string tag = "block " + std::to_string(k + 1) + ": ";
    if (dk <= d_prev || dk > n) {
      for (auto* ch : {&a, &b, &c, &d, &e, &f, &prefix_id}) ch->expect(false, tag + "block boundaries must increase inside the window");
      break;
    }
    const Interval local{d_prev + 1, dk}, head{1, dk};
    const std::size_t ndk = gs.n_sequence[dk - 1];
    std::vector<Element> bk(gs.socle.begin() + static_cast<std::ptrdiff_t>(m0),
                            gs.socle.begin() + static_cast<std::ptrdiff_t>(m0 + cnt));
    std::vector<Element> upto = before;
    upto.insert(upto.end(), bk.begin(), bk.end());
    const WindowSubgroup span_bk = span_of(w, bk), span_upto = span_of(w, upto);

    a.expect(dimension(project(span_bk, local)) == cnt && (multiple(span_bk, p).is_trivial()),
             tag + "projections onto [d_{k-1}+1, d_k] are dependent");
    b.expect(project(span_upto, local) == project(socle_g, local), tag + "projections do not generate π(G[p])");
    c.expect(dimension(project(span_upto, head)) == upto.size() && project(span_upto, head) == project(socle_g, head),
             tag + "π_[1,d_k] of B_1..B_k is not a basis of π_[1,d_k](G[p])");
    prefix_id.expect(project(socle_g, head) == project(span_upto, head), tag + "prefix identity fails");

    const WindowSubgroup ck = section(socle_g, {d_prev + 1, ndk});
    for (std::size_t r = 0; r < cnt; ++r) {
      const std::size_t mj = m0 + r;
      const Element& x = gs.socle[mj];
      const Element& y = gs.generators[mj];
      const int h = gs.heights[mj];
      const std::string jt = "x_" + std::to_string(mj + 1) + ": ";
      std::vector<Element> pred = before;
      pred.insert(pred.end(), bk.begin(), bk.begin() + static_cast<std::ptrdiff_t>(r));
      const WindowSubgroup span_pred = span_of(w, pred);

      d.expect(ck.contains(x), jt + "not in G_[d_{k-1}+1, n_{d_k}][p]");
      d.expect(!span_pred.contains(x), jt + "lies in the span of its predecessors");
      if (!x.is_zero() && g.contains(x)) {
        d.expect(height(x, g, p).value == h, jt + "recorded height differs from its height in G");
        d.expect(project(intersection(ck, multiple(g, ipow(p, h + 1))), head).is_subgroup_of(project(span_pred, head)),
                 jt + "a taller independent candidate exists");
      }
      if (r > 0) d.expect(gs.heights[mj - 1] >= h, jt + "heights increase inside the block");

      e.expect(h >= 0 && ipow(p, h) * y == x, jt + "x is not p^h * y");
      e.expect(section(g, {1, ndk}).contains(y), jt + "y is not in G_[1, n_{d_k}]");
      e.expect(element_order(y) == ipow(p, h + 1), jt + "y does not have order p^(h+1)");
      for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t ni = gs.n_sequence[i - 1];
        if (mj + 1 > gs.cumulative(ni)) e.expect(y.is_zero_at(i), jt + "y(" + std::to_string(i) + ") != 0 although j > m(n_i)");
      }
    }
    const WindowSubgroup tail = section(socle_g, {dk + 1, n});
    f.expect(sum(span_upto, tail) == socle_g && intersection(span_upto, tail).is_trivial() &&
                 dimension(span_upto) == upto.size(),
             tag + "G[p] is not <B_1> + ... + <B_k> (+) G_[d_k+1, N][p]");
    before = std::move(upto);
    m0 += cnt;
    d_prev = dk;
  }
  for (auto* ch : {&a, &b, &c, &d, &e, &f, &prefix_id}) rep.checks.push_back(ch->done());

  detail::Checker cov("coverage"), spn("spanning");
  cov.expect(span_of(w, gs.socle) == socle_g, "the x_m do not span G[p]");
  bool inside = true;
  for (const Element& y : gs.generators) inside = inside && g.contains(y);
  spn.expect(inside && span_of(w, gs.generators) == g, "the y_m do not generate G");
  rep.checks.push_back(cov.done());
  rep.checks.push_back(spn.done());
  return rep;
}

/// Φ is well defined, onto G, and |domain| = |G|.
inline bool verify_isomorphic_encoder(const Encoder& enc, const WindowSubgroup& g) {
  if (!same_window(enc.window, g.window_ptr()) || enc.orders.size() != enc.generators.size()) return false;
  for (std::size_t m = 0; m < enc.generators.size(); ++m) {
    if (!g.contains(enc.generators[m])) return false;
    if (!(enc.orders[m] * enc.generators[m]).is_zero()) return false;
  }
  return span_of(enc.window, enc.generators) == g && enc.domain_order() == g.order();
}

inline bool verify_isomorphic_encoder(const GeneratingSet& gs, const WindowSubgroup& g) {
  return verify_isomorphic_encoder(make_encoder(gs), g);
}

/// Coefficients λ with Φ(λ) = z for a p-group, by descending the order of
/// the remainder: if p^s r = Σ α_m x_m then r - Σ α_m p^{h_m - s} y_m has
/// smaller order.
inline std::vector<Residue> represent(const Element& z, const GeneratingSet& gs, const WindowSubgroup& g) {
  if (!g.contains(z)) throw InputError("represent: element is not in the group");
  const Residue p = gs.prime;
  const auto orders = gs.orders();
  std::vector<Residue> lambda(gs.size(), 0);
  Element r = z;
  while (!r.is_zero()) {
    const int s = log_p(element_order(r), p) - 1;
    auto alpha = solve_combination(gs.socle, ipow(p, s) * r);
    if (!alpha) throw InputError("represent: p^s z is outside the span of the socle generators");
    for (std::size_t m = 0; m < gs.size(); ++m) {
      const Residue am = mod_floor((*alpha)[m], p);
      if (am == 0) continue;
      if (s > gs.heights[m]) throw InputError("represent: a socle generator is not of maximal height");
      const Residue step = am * ipow(p, gs.heights[m] - s);
      lambda[m] = mod_floor(lambda[m] + step, orders[m]);
      r -= step * gs.generators[m];
    }
  }
  return lambda;
}

struct ImplicitProductVerdict {
  bool image_matches = false;   // Φ(⊕<y_m>) = G ∩ ⊕ G_i inside the window
  Status socle_observable = Status::undetermined;  // weak observability of Σ<x_m>
  bool holds() const noexcept { return image_matches && socle_observable == Status::holds; }
};

inline ImplicitProductVerdict check_implicit_direct_product(const Encoder& enc, const std::vector<Element>& socle,
                                                            const WindowSubgroup& g) {
  ImplicitProductVerdict v;
  const WindowSubgroup finite_part = intersect_with_sum(g, g.window().full());
  v.image_matches = span_of(enc.window, enc.generators) == finite_part;
  const WindowSubgroup xs = span_of(enc.window, socle);
  v.socle_observable = xs.is_subgroup_of(g) ? is_weakly_observable(xs, g).status : Status::fails;
  return v;
}

inline ImplicitProductVerdict check_implicit_direct_product(const GeneratingSet& gs, const WindowSubgroup& g) {
  return check_implicit_direct_product(make_encoder(gs), gs.socle, g);
}

struct PrimeSynthesis {
  PrimaryPart part;
  Certificate certificate;  // order controllability of G^(p)
  GeneratingSet set;
  BlockReport report;
  bool isomorphic = false;
  ImplicitProductVerdict implicit;
};

struct Synthesis {
  Certificate certificate;  // order controllability of G
  std::vector<PrimeSynthesis> primes;
  Encoder combined;  // generators embedded back in G's window, primes in increasing order
  Status status = Status::holds;
  bool isomorphic = false;
  bool implicit_direct_product = false;
};

/// Per-prime synthesis on the primary parts plus the combined encoder of G.
inline Synthesis synthesize(const WindowSubgroup& g, bool allow_undetermined = false, unsigned jobs = 1) {
  const std::size_t n = g.window().size();
  Synthesis out;
  out.certificate = certify_order_controllable(GroupSource::from_group(g), n, std::nullopt, jobs);
  if (out.certificate.status == Status::fails) throw SynthesisRefused(Status::fails, "the group is not order controllable on this window");
  if (out.certificate.status == Status::undetermined && !allow_undetermined)
    throw SynthesisRefused(Status::undetermined, "order controllability is undetermined at this window");

  const PrimaryDecomposition dec = primary_decompose(g);
  auto run = [&](const PrimaryPart& part) {
    PrimeSynthesis ps;
    ps.part = part;
    ps.certificate = certify_order_controllable(GroupSource::from_group(part.part), n);
    ps.set = synthesize_p(part.part, part.prime, ps.certificate, allow_undetermined);
    ps.report = verify_block_properties(ps.set, part.part);
    ps.isomorphic = verify_isomorphic_encoder(ps.set, part.part);
    ps.implicit = check_implicit_direct_product(ps.set, part.part);
    return ps;
  };
  if (jobs > 1 && dec.parts.size() > 1) {
    std::vector<std::future<PrimeSynthesis>> fut;
    for (const auto& part : dec.parts) fut.push_back(std::async(std::launch::async, run, std::cref(part)));
    for (auto& f : fut) out.primes.push_back(f.get());
  } else {
    for (const auto& part : dec.parts) out.primes.push_back(run(part));
  }

  out.combined.window = g.window_ptr();
  std::vector<Element> socle;
  for (const auto& ps : out.primes) {
    const auto orders = ps.set.orders();
    for (std::size_t m = 0; m < ps.set.size(); ++m) {
      out.combined.generators.push_back(ps.part.embed(ps.set.generators[m], g.window_ptr()));
      out.combined.orders.push_back(orders[m]);
      out.combined.primes.push_back(ps.part.prime);
      socle.push_back(ps.part.embed(ps.set.socle[m], g.window_ptr()));
    }
  }
  bool all_implicit = true, stamped = out.certificate.status != Status::holds;
  for (const auto& ps : out.primes) {
    all_implicit = all_implicit && ps.implicit.holds();
    stamped = stamped || ps.set.status != Status::holds;
  }
  out.isomorphic = verify_isomorphic_encoder(out.combined, g);
  out.implicit_direct_product = all_implicit && check_implicit_direct_product(out.combined, socle, g).image_matches;
  out.status = stamped ? Status::undetermined : Status::holds;
  return out;
}

/// Coefficients of z for the combined encoder: each p-part represented in
/// its own generating set.
inline std::vector<Residue> represent(const Element& z, const Synthesis& s, const WindowSubgroup& g) {
  if (!g.contains(z)) throw InputError("represent: element is not in the group");
  std::vector<Residue> out;
  for (const auto& ps : s.primes) {
    auto part = represent(ps.part.restrict(z), ps.set, ps.part.part);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace abelcode
