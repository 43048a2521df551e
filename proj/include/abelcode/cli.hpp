#pragma once

// Command-line front end: check, synthesize, verify, unroll, decompose.
// Kept in a header so tests can drive it in-process.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abelcode/io.hpp"

namespace abelcode::cli {

enum ExitCode : int { kOk = 0, kFails = 1, kUndetermined = 2, kInputError = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::optional<std::size_t> window;
  std::optional<std::size_t> max_index;
  std::string property = "order-controllable";
  std::string out;
  bool override_undetermined = false;
  bool closure = false;
  std::string encoder;
  std::string manifest;
  std::string certificate;
  unsigned jobs = 1;
};

inline int exit_for(Status s) {
  switch (s) {
    case Status::holds: return kOk;
    case Status::fails: return kFails;
    case Status::undetermined: return kUndetermined;
  }
  return kInputError;
}

/// Hash of a window group that ignores how it was presented.
inline std::string group_hash(const WindowSubgroup& g) {
  OrderedJson j;
  j["components"] = components_to_json(g.window());
  OrderedJson rows = OrderedJson::array();
  for (const Element& b : g.basis()) rows.push_back(element_to_json(b));
  j["basis"] = rows;
  return "fnv1a64:" + fnv1a64(j.dump());
}

namespace detail {

inline std::size_t window_for(const InputFile& in, const RunConfig& cfg) {
  if (cfg.window && *cfg.window < 1) throw InputError("--window must be >= 1");
  if (in.is_template()) {
    if (!cfg.window) throw InputError("--window is required for template files");
    return *cfg.window;
  }
  const std::size_t n = in.source.group().window().size();
  if (cfg.window && *cfg.window != n)
    throw InputError("--window " + std::to_string(*cfg.window) + " does not match the group file's " + std::to_string(n) +
                     " components");
  return n;
}

inline std::optional<std::size_t> cap_for(const RunConfig& cfg, std::size_t n) {
  if (cfg.max_index && (*cfg.max_index < 1 || *cfg.max_index > n))
    throw InputError("--max-index must lie in [1, " + std::to_string(n) + "]");
  return cfg.max_index;
}

// The group a command works on: the file's group, or for a template the
// subgroup generated inside the window (--closure: the window closure).
inline WindowSubgroup materialize(const InputFile& in, const RunConfig& cfg) {
  const std::size_t n = window_for(in, cfg);
  const WindowView v = in.source.view(n);
  return cfg.closure ? v.prefix : v.finite;
}

inline void emit(const RunConfig& cfg, const OrderedJson& j, std::ostream& out) {
  if (cfg.out.empty()) out << dump(j);
  else write_file(cfg.out, dump(j));
}

}  // namespace detail

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  InputFile in = load_input(cfg.input);
  const std::size_t n = detail::window_for(in, cfg);
  const auto cap = detail::cap_for(cfg, n);
  const Property prop = parse_property(cfg.property);
  GroupSource src = in.source;
  std::string hash = in.hash;
  if (cfg.closure && in.is_template()) {
    const WindowSubgroup g = src.view(n).prefix;
    src = GroupSource::from_group(g);
    hash = group_hash(g);
  }
  const Certificate c = certify(src, prop, n, cap, cfg.jobs);
  detail::emit(cfg, certificate_to_json(c, hash), out);
  err << to_string(c.property) << " at window " << n << ": " << to_string(c.status) << "\n";
  return exit_for(c.status);
}

inline OrderedJson manifest_json(const Synthesis& s, const WindowSubgroup& g, const std::vector<std::string>& files) {
  OrderedJson m;
  m["window"] = g.window().size();
  m["components"] = components_to_json(g.window());
  m["group_hash"] = group_hash(g);
  m["group_order"] = g.order().str();
  m["status"] = to_string(s.status);
  m["certificate"] = certificate_to_json(s.certificate);
  OrderedJson primes = OrderedJson::array();
  for (std::size_t k = 0; k < s.primes.size(); ++k) {
    const auto& ps = s.primes[k];
    OrderedJson e;
    e["prime"] = ps.part.prime;
    if (!files.empty()) e["file"] = files[k];
    e["coordinates"] = ps.part.coordinates;
    e["order"] = ps.part.part.order().str();
    e["block_checks"] = ps.report.all_passed();
    e["isomorphic"] = ps.isomorphic;
    e["implicit_direct_product"] = ps.implicit.holds();
    if (files.empty()) e["encoder"] = encoder_to_json(ps.set, group_hash(ps.part.part));
    primes.push_back(e);
  }
  m["primes"] = primes;
  OrderedJson gens = OrderedJson::array();
  for (const Element& y : s.combined.generators) gens.push_back(element_to_json(y));
  m["combined"] = {{"orders", s.combined.orders}, {"primes", s.combined.primes}, {"generators", gens}};
  m["isomorphic"] = s.isomorphic;
  m["implicit_direct_product"] = s.implicit_direct_product;
  return m;
}

inline int cmd_synthesize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  InputFile in = load_input(cfg.input);
  const std::size_t n = detail::window_for(in, cfg);
  Status template_status = Status::holds;
  if (in.is_template() && !cfg.closure) {
    // The template itself must be certified before its window part is used.
    const Certificate c = certify_order_controllable(in.source, n, std::nullopt, cfg.jobs);
    template_status = c.status;
    if (c.status == Status::fails) {
      err << "refused: the template is not order controllable at window " << n << "\n";
      return kFails;
    }
    if (c.status == Status::undetermined && !cfg.override_undetermined) {
      err << "refused: order controllability is undetermined at window " << n << " (pass --override-undetermined)\n";
      return kUndetermined;
    }
  }
  const WindowSubgroup g = detail::materialize(in, cfg);
  Synthesis s;
  try {
    s = synthesize(g, cfg.override_undetermined, cfg.jobs);
  } catch (const SynthesisRefused& e) {
    err << "refused: " << e.what() << "\n";
    return exit_for(e.status());
  }
  if (template_status != Status::holds) s.status = Status::undetermined;

  std::vector<std::string> files;
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    for (const auto& ps : s.primes) {
      const std::string name = "encoder_p" + std::to_string(ps.part.prime) + ".json";
      write_file((std::filesystem::path(cfg.out) / name).string(), dump(encoder_to_json(ps.set, group_hash(ps.part.part))));
      files.push_back(name);
    }
    write_file((std::filesystem::path(cfg.out) / "manifest.json").string(), dump(manifest_json(s, g, files)));
  } else {
    out << dump(manifest_json(s, g, files));
  }
  bool ok = s.isomorphic;
  for (const auto& ps : s.primes) ok = ok && ps.report.all_passed();
  err << "synthesized " << s.combined.generators.size() << " generators over " << s.primes.size() << " prime(s): "
      << to_string(s.status) << (ok ? "" : " (verification failed)") << "\n";
  if (!ok) return kFails;
  return exit_for(s.status);
}

namespace detail {

struct VerifyOutcome {
  OrderedJson report = OrderedJson::array();
  bool ok = true;

  void add(const std::string& name, bool passed, const std::string& detail = "") {
    OrderedJson e = {{"check", name}, {"passed", passed}};
    if (!passed && !detail.empty()) e["detail"] = detail;
    report.push_back(e);
    ok = ok && passed;
  }
};

inline void verify_encoder(const GeneratingSet& gs, const WindowSubgroup& g, const std::string& tag, VerifyOutcome& v,
                           const Json& raw) {
  const PrimaryPart part = primary_part(g, gs.prime);
  if (!same_window(gs.window, part.part.window_ptr()))
    throw InputError(tag + ": encoder components do not match the " + std::to_string(gs.prime) + "-part of the group's window");
  if (raw.contains("group_hash") && raw["group_hash"].is_string())
    v.add(tag + ":group_hash", raw["group_hash"].get<std::string>() == group_hash(part.part), "encoder was built for a different group");
  const BlockReport rep = verify_block_properties(gs, part.part);
  for (const auto& c : rep.checks) v.add(tag + ":" + c.name, c.passed, c.detail);
  v.add(tag + ":isomorphic", verify_isomorphic_encoder(gs, part.part));
  const auto idp = check_implicit_direct_product(gs, part.part);
  v.add(tag + ":implicit_direct_product", idp.image_matches);
  v.add(tag + ":socle_weakly_observable", idp.socle_observable == Status::holds);
}

}  // namespace detail

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.encoder.empty() && cfg.manifest.empty() && cfg.certificate.empty())
    throw InputError("verify needs --encoder, --manifest or --certificate");
  InputFile in = load_input(cfg.input);
  detail::VerifyOutcome v;

  if (!cfg.certificate.empty()) {
    const std::size_t n = detail::window_for(in, cfg);
    GroupSource src = in.source;
    if (cfg.closure && in.is_template()) src = GroupSource::from_group(src.view(n).prefix);
    const WindowView view = src.view(n);
    const Json raw = parse_json_file(cfg.certificate);
    const Certificate c = certificate_from_json(raw, view.prefix.window_ptr());
    if (c.window != n) throw InputError("certificate window " + std::to_string(c.window) + " does not match --window");
    const Certificate again = certify(src, c.property, n, cfg.max_index);
    v.add("certificate:status", again.status == c.status);
    v.add("certificate:indices", again.indices == c.indices);
    if (c.status == Status::fails) {
      v.add("certificate:witness_present", c.witness.has_value());
      if (c.witness && c.property == Property::order_controllable && raw.contains("witness_detail")) {
        const auto& d = raw["witness_detail"];
        const std::size_t i = io::positive(io::member(d, "index", "/witness_detail"), "/witness_detail/index");
        const std::size_t t = io::positive(io::member(d, "tested", "/witness_detail"), "/witness_detail/tested");
        v.add("certificate:witness_revalidates", validate_order_witness(view, i, t, *c.witness).reproduces_failure);
      } else if (c.witness) {
        v.add("certificate:witness_matches", again.witness && *again.witness == *c.witness);
      }
    }
  }
  if (!cfg.encoder.empty() || !cfg.manifest.empty()) {
    const WindowSubgroup g = detail::materialize(in, cfg);
    if (!cfg.encoder.empty()) {
      const Json raw = parse_json_file(cfg.encoder);
      const GeneratingSet gs = encoder_from_json(raw);
      detail::verify_encoder(gs, g, "p" + std::to_string(gs.prime), v, raw);
    }
    if (!cfg.manifest.empty()) {
      const Json m = parse_json_file(cfg.manifest);
      const auto dir = std::filesystem::path(cfg.manifest).parent_path();
      const Json& primes = io::array(io::member(m, "primes", ""), "/primes");
      if (m.contains("components") && !(*make_window(io::components(m["components"], "/components")) == g.window()))
        throw InputError("manifest components do not match the group's window");
      if (m.contains("group_hash") && m["group_hash"].is_string())
        v.add("group_hash", m["group_hash"].get<std::string>() == group_hash(g), "manifest was built for a different group");
      Encoder combined;
      combined.window = g.window_ptr();
      std::set<Residue> seen;
      for (std::size_t k = 0; k < primes.size(); ++k) {
        const std::string p = io::child("/primes", k);
        Json raw;
        if (primes[k].contains("file")) raw = parse_json_file((dir / primes[k]["file"].get<std::string>()).string());
        else raw = io::member(primes[k], "encoder", p);
        GeneratingSet set = encoder_from_json(raw);
        detail::verify_encoder(set, g, "p" + std::to_string(set.prime), v, raw);
        seen.insert(set.prime);
        const PrimaryPart part = primary_part(g, set.prime);
        const auto orders = set.orders();
        for (std::size_t j = 0; j < set.size(); ++j) {
          combined.generators.push_back(part.embed(set.generators[j], g.window_ptr()));
          combined.orders.push_back(orders[j]);
          combined.primes.push_back(set.prime);
        }
      }
      const auto want = prime_divisors(exponent(g));
      v.add("primes_cover_group", std::set<Residue>(want.begin(), want.end()) == seen);
      v.add("combined_isomorphic", verify_isomorphic_encoder(combined, g));
    }
  }
  OrderedJson report;
  report["passed"] = v.ok;
  report["checks"] = v.report;
  detail::emit(cfg, report, out);
  err << "verify: " << (v.ok ? "all checks passed" : "some checks failed") << "\n";
  return v.ok ? kOk : kFails;
}

inline int cmd_unroll(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  InputFile in = load_input(cfg.input);
  if (!in.is_template()) throw InputError("unroll needs a template file");
  const std::size_t n = detail::window_for(in, cfg);
  const UnrolledTemplate u = unroll_template(in.source.spec(), n);
  OrderedJson j = group_to_json(cfg.closure ? u.truncated : u.subgroup);
  OrderedJson skipped = OrderedJson::array();
  for (const auto& s : u.skipped) skipped.push_back({{"pattern", s.pattern}, {"start", s.start}, {"extent", s.extent}});
  j["metadata"] = {{"window", n},       {"margin", u.margin}, {"closure", cfg.closure},
                   {"skipped", skipped}, {"source_hash", in.hash}};
  detail::emit(cfg, j, out);
  err << "unrolled at window " << n << ", " << u.skipped.size() << " instance(s) cut at the window edge\n";
  return kOk;
}

inline int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  InputFile in = load_input(cfg.input);
  const WindowSubgroup g = detail::materialize(in, cfg);
  const PrimaryDecomposition d = primary_decompose(g);
  OrderedJson j;
  j["group_order"] = g.order().str();
  OrderedJson parts = OrderedJson::array();
  for (const auto& p : d.parts) {
    OrderedJson e;
    e["prime"] = p.prime;
    e["coordinates"] = p.coordinates;
    e["order"] = p.part.order().str();
    OrderedJson basis = OrderedJson::array();
    for (const Element& b : p.part.basis()) basis.push_back(element_to_json(b));
    e["components"] = components_to_json(p.part.window());
    e["generators"] = basis;
    const Certificate c = certify_order_controllable(GroupSource::from_group(p.part), g.window().size(), std::nullopt, cfg.jobs);
    e["order_controllability"] = {{"status", to_string(c.status)}, {"indices", index_map_to_json(c.indices)}};
    parts.push_back(e);
  }
  j["parts"] = parts;
  detail::emit(cfg, j, out);
  err << "decomposed into " << d.parts.size() << " primary part(s)\n";
  return kOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "check") return cmd_check(cfg, out, err);
    if (cfg.command == "synthesize") return cmd_synthesize(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "unroll") return cmd_unroll(cfg, out, err);
    if (cfg.command == "decompose") return cmd_decompose(cfg, out, err);
    throw InputError("unknown command '" + cfg.command + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Controllability certificates and homomorphic encoders for subgroups of products of finite abelian groups",
               "abelcode"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::size_t window = 0, max_index = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "group or template file")->required();
    sub->add_option("--window", window, "window length N");
    sub->add_option("--out", cfg.out, "output path (directory for synthesize)");
    sub->add_flag("--closure", cfg.closure, "use the window closure of a template instead of its finite part");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };
  auto* check = app.add_subcommand("check", "certify a property at a window");
  common(check);
  check->add_option("--max-index", max_index, "largest index i to check");
  check->add_option("--property", cfg.property, "weakly-controllable | controllable | order-controllable | weakly-observable | rectangular");
  auto* synth = app.add_subcommand("synthesize", "build generating sets and encoders");
  common(synth);
  synth->add_flag("--override-undetermined", cfg.override_undetermined, "accept an undetermined certificate");
  auto* verify = app.add_subcommand("verify", "re-check an encoder, manifest or certificate against a group");
  common(verify);
  verify->add_option("--encoder", cfg.encoder, "encoder file");
  verify->add_option("--manifest", cfg.manifest, "manifest written by synthesize");
  verify->add_option("--certificate", cfg.certificate, "certificate written by check");
  verify->add_option("--max-index", max_index, "largest index i used by the certificate");
  auto* unroll = app.add_subcommand("unroll", "materialize a template at a window");
  common(unroll);
  auto* decompose = app.add_subcommand("decompose", "split a group into its primary parts");
  common(decompose);

  std::vector<const char*> argv{"abelcode"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  for (auto* sub : {check, synth, verify, unroll, decompose})
    if (sub->parsed()) {
      cfg.command = sub->get_name();
      if (sub->count("--window")) cfg.window = window;
      if (sub->get_option_no_throw("--max-index") && sub->count("--max-index")) cfg.max_index = max_index;
    }
  return dispatch(cfg, out, err);
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace abelcode::cli
