#pragma once

// JSON reading and writing for group, template, certificate, encoder and
// manifest files. Parse errors name the offending JSON pointer.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelcode/encoder.hpp"

namespace abelcode {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace io {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t k) { return path + "/" + std::to_string(k); }

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(child(path, key), "missing required key");
  return *it;
}

inline Residue integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Residue>();
}

inline std::size_t positive(const Json& j, const std::string& path) {
  const Residue v = integer(j, path);
  if (v < 1) fail(path, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

inline std::size_t index_key(const std::string& key, const std::string& path, bool allow_zero) {
  std::size_t pos = 0;
  long long v = -1;
  try {
    v = std::stoll(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || key.empty() || v < (allow_zero ? 0 : 1)) fail(path, "key '" + key + "' is not a valid index");
  return static_cast<std::size_t>(v);
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline ComponentGroup component(const Json& j, const std::string& path) {
  std::vector<Residue> orders;
  for (std::size_t k = 0; k < array(j, path).size(); ++k) orders.push_back(integer(j[k], child(path, k)));
  try {
    return ComponentGroup(std::move(orders));
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

inline std::vector<ComponentGroup> components(const Json& j, const std::string& path) {
  std::vector<ComponentGroup> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(component(j[i], child(path, i)));
  if (out.empty()) fail(path, "at least one component is required");
  return out;
}

inline std::vector<Residue> residues_for(const Json& j, const ComponentGroup& c, const std::string& path) {
  array(j, path);
  if (j.size() != c.factor_count())
    fail(path, "expected " + std::to_string(c.factor_count()) + " residues, got " + std::to_string(j.size()));
  std::vector<Residue> r;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Residue v = integer(j[k], child(path, k));
    const Residue m = c.factor_orders()[k];
    if (v < 0 || v >= m) fail(child(path, k), "residue " + std::to_string(v) + " is outside [0, " + std::to_string(m) + ")");
    r.push_back(v);
  }
  return r;
}

}  // namespace io

/// An element written as one residue list per coordinate.
inline Element element_from_json(const Json& j, const WindowPtr& w, const std::string& path = "") {
  io::array(j, path);
  if (j.size() != w->size())
    io::fail(path, "expected " + std::to_string(w->size()) + " coordinates, got " + std::to_string(j.size()));
  std::vector<Residue> flat;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto r = io::residues_for(j[i], w->components()[i], io::child(path, i));
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Element(w, std::move(flat));
}

inline OrderedJson element_to_json(const Element& x) {
  OrderedJson out = OrderedJson::array();
  for (std::size_t i = 1; i <= x.window().size(); ++i) out.push_back(x.at(i));
  return out;
}

inline OrderedJson components_to_json(const ProductWindow& w) {
  OrderedJson out = OrderedJson::array();
  for (const auto& c : w.components()) out.push_back(c.factor_orders());
  return out;
}

inline WindowSubgroup group_from_json(const Json& j) {
  WindowPtr w = make_window(io::components(io::member(j, "components", ""), "/components"));
  std::vector<Element> gens;
  if (j.contains("generators")) {
    const Json& g = io::array(j["generators"], "/generators");
    for (std::size_t k = 0; k < g.size(); ++k) gens.push_back(element_from_json(g[k], w, io::child("/generators", k)));
  }
  return WindowSubgroup(w, std::move(gens));
}

inline OrderedJson group_to_json(const WindowSubgroup& g) {
  OrderedJson out;
  out["components"] = components_to_json(g.window());
  OrderedJson gens = OrderedJson::array();
  for (const Element& x : g.generators()) gens.push_back(element_to_json(x));
  out["generators"] = std::move(gens);
  return out;
}

namespace io {

// Residues of a support entry, checked against every component the
// coordinate can land on (several when the stride and period disagree).
inline std::vector<Residue> template_residues(const Json& j, const TemplateSpec& t, std::size_t first_coord,
                                              std::size_t stride, const std::string& path) {
  std::vector<Residue> r;
  const std::size_t reps = stride == 0 ? 1 : t.period;
  for (std::size_t k = 0; k < reps; ++k) {
    auto v = residues_for(j, t.component(first_coord + k * stride), path);
    if (k == 0) r = std::move(v);
  }
  return r;
}

}  // namespace io

inline TemplateSpec template_from_json(const Json& j) {
  TemplateSpec t;
  const Json& ct = io::member(j, "component_template", "");
  t.period = io::positive(io::member(ct, "period", "/component_template"), "/component_template/period");
  const Json& orders = io::member(ct, "orders", "/component_template");
  t.orders = io::components(orders, "/component_template/orders");
  if (t.orders.size() != t.period)
    io::fail("/component_template/orders", "expected " + std::to_string(t.period) + " components (one per period step)");

  if (j.contains("fixed_generators")) {
    const Json& fg = io::array(j["fixed_generators"], "/fixed_generators");
    for (std::size_t k = 0; k < fg.size(); ++k) {
      const std::string p = io::child("/fixed_generators", k);
      const Json& sup = io::member(fg[k], "support", p);
      if (!sup.is_object()) io::fail(p + "/support", "expected an object");
      SupportMap m;
      for (const auto& [key, val] : sup.items()) {
        const std::string kp = p + "/support/" + key;
        const std::size_t coord = io::index_key(key, kp, false);
        m[coord] = io::template_residues(val, t, coord, 0, kp);
      }
      t.fixed_generators.push_back(std::move(m));
    }
  }
  if (j.contains("shifted_generators")) {
    const Json& sg = io::array(j["shifted_generators"], "/shifted_generators");
    for (std::size_t k = 0; k < sg.size(); ++k) {
      const std::string p = io::child("/shifted_generators", k);
      ShiftedPattern s;
      s.start = io::positive(io::member(sg[k], "start", p), p + "/start");
      s.stride = sg[k].contains("stride") ? io::positive(sg[k]["stride"], p + "/stride") : 1;
      const Json& pat = io::member(sg[k], "pattern", p);
      if (!pat.is_object()) io::fail(p + "/pattern", "expected an object");
      for (const auto& [key, val] : pat.items()) {
        const std::string kp = p + "/pattern/" + key;
        const std::size_t off = io::index_key(key, kp, true);
        s.pattern[off] = io::template_residues(val, t, s.start + off, s.stride, kp);
      }
      t.shifted_generators.push_back(std::move(s));
    }
  }
  return t;
}

inline OrderedJson support_to_json(const SupportMap& m) {
  OrderedJson out = OrderedJson::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

inline OrderedJson template_to_json(const TemplateSpec& t) {
  OrderedJson out;
  OrderedJson orders = OrderedJson::array();
  for (const auto& c : t.orders) orders.push_back(c.factor_orders());
  out["component_template"] = {{"period", t.period}, {"orders", orders}};
  OrderedJson fixed = OrderedJson::array();
  for (const auto& g : t.fixed_generators) fixed.push_back({{"support", support_to_json(g)}});
  out["fixed_generators"] = fixed;
  OrderedJson shifted = OrderedJson::array();
  for (const auto& s : t.shifted_generators)
    shifted.push_back({{"start", s.start}, {"stride", s.stride}, {"pattern", support_to_json(s.pattern)}});
  out["shifted_generators"] = shifted;
  return out;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// A parsed input file: a group or a template.
struct InputFile {
  Json raw;
  GroupSource source;
  std::string hash;  // FNV-1a of the key-sorted compact dump

  bool is_template() const { return source.is_template(); }
};

inline InputFile parse_input(const std::string& text) {
  InputFile in;
  try {
    in.raw = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  if (!in.raw.is_object()) io::fail("", "expected a JSON object");
  if (in.raw.contains("component_template")) in.source = GroupSource::from_template(template_from_json(in.raw));
  else if (in.raw.contains("components")) in.source = GroupSource::from_group(group_from_json(in.raw));
  else io::fail("", "neither 'components' (group file) nor 'component_template' (template file) is present");
  in.hash = "fnv1a64:" + fnv1a64(in.raw.dump());
  return in;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline InputFile load_input(const std::string& path) {
  try {
    return parse_input(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

inline std::string dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

inline OrderedJson index_map_to_json(const std::map<std::size_t, std::size_t>& m) {
  OrderedJson out = OrderedJson::object();
  for (const auto& [i, n] : m) out[std::to_string(i)] = n;
  return out;
}

inline OrderedJson certificate_to_json(const Certificate& c, const std::string& group_hash = "") {
  OrderedJson out;
  out["property"] = to_string(c.property);
  out["window"] = c.window;
  out["status"] = to_string(c.status);
  out["indices"] = index_map_to_json(c.indices);
  if (c.witness) out["witness"] = element_to_json(*c.witness);
  OrderedJson stab = OrderedJson::object();
  for (const auto& [i, s] : c.stabilization) stab[std::to_string(i)] = s;
  out["stabilization"] = stab;
  if (c.detail) {
    const auto& d = *c.detail;
    OrderedJson dj;
    dj["index"] = d.index;
    dj["tested"] = d.tested;
    dj["prefix_order"] = d.prefix_order;
    dj["companion_order"] = d.companion_order ? OrderedJson(*d.companion_order) : OrderedJson(nullptr);
    if (d.companion) dj["companion"] = element_to_json(*d.companion);
    dj["reproduces_failure"] = d.reproduces_failure;
    out["witness_detail"] = dj;
  }
  if (!c.notes.empty()) out["notes"] = c.notes;
  if (!group_hash.empty()) out["group_hash"] = group_hash;
  return out;
}

/// Reads back the verdict part of a certificate (status, indices, witness).
inline Certificate certificate_from_json(const Json& j, const WindowPtr& w) {
  Certificate c;
  try {
    c.property = parse_property(io::member(j, "property", "").get<std::string>());
    c.status = parse_status(io::member(j, "status", "").get<std::string>());
  } catch (const Json::type_error&) {
    io::fail("", "property and status must be strings");
  }
  c.window = io::positive(io::member(j, "window", ""), "/window");
  if (j.contains("indices")) {
    if (!j["indices"].is_object()) io::fail("/indices", "expected an object");
    for (const auto& [k, v] : j["indices"].items())
      c.indices[io::index_key(k, "/indices/" + k, false)] = io::positive(v, "/indices/" + k);
  }
  if (j.contains("witness") && w) c.witness = element_from_json(j["witness"], w, "/witness");
  if (j.contains("stabilization") && j["stabilization"].is_object())
    for (const auto& [k, v] : j["stabilization"].items())
      c.stabilization[io::index_key(k, "/stabilization/" + k, false)] = v.is_boolean() && v.get<bool>();
  return c;
}

/// Encoder file for one prime. Block "m" values are cumulative counts m(k).
inline OrderedJson encoder_to_json(const GeneratingSet& gs, const std::string& group_hash = "") {
  OrderedJson out;
  out["prime"] = gs.prime;
  out["orders"] = gs.orders();
  OrderedJson gens = OrderedJson::array(), socle = OrderedJson::array();
  for (const Element& y : gs.generators) gens.push_back(element_to_json(y));
  for (const Element& x : gs.socle) socle.push_back(element_to_json(x));
  out["generators"] = gens;
  OrderedJson blocks = OrderedJson::array();
  std::size_t m = 0;
  for (const Block& b : gs.blocks) {
    m += b.count;
    blocks.push_back({{"d", b.d}, {"m", m}});
  }
  out["blocks"] = blocks;
  out["heights"] = gs.heights;
  OrderedJson ns = OrderedJson::object();
  for (std::size_t i = 0; i < gs.n_sequence.size(); ++i) ns[std::to_string(i + 1)] = gs.n_sequence[i];
  out["n_sequence"] = ns;
  out["components"] = components_to_json(*gs.window);
  out["socle"] = socle;
  out["status"] = to_string(gs.status);
  if (!group_hash.empty()) out["group_hash"] = group_hash;
  return out;
}

inline GeneratingSet encoder_from_json(const Json& j) {
  GeneratingSet gs;
  gs.prime = io::integer(io::member(j, "prime", ""), "/prime");
  if (!is_prime(gs.prime)) io::fail("/prime", "not a prime");
  gs.window = make_window(io::components(io::member(j, "components", ""), "/components"));
  const Json& gens = io::array(io::member(j, "generators", ""), "/generators");
  for (std::size_t k = 0; k < gens.size(); ++k) gs.generators.push_back(element_from_json(gens[k], gs.window, io::child("/generators", k)));
  const Json& hs = io::array(io::member(j, "heights", ""), "/heights");
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const Residue h = io::integer(hs[k], io::child("/heights", k));
    if (h < 0 || h > 62) io::fail(io::child("/heights", k), "height out of range");
    gs.heights.push_back(static_cast<int>(h));
  }
  if (hs.size() != gens.size()) io::fail("/heights", "expected one height per generator");
  if (j.contains("orders")) {
    const Json& os = io::array(j["orders"], "/orders");
    if (os.size() != gens.size()) io::fail("/orders", "expected one order per generator");
    for (std::size_t k = 0; k < os.size(); ++k)
      if (io::integer(os[k], io::child("/orders", k)) != ipow(gs.prime, gs.heights[k] + 1))
        io::fail(io::child("/orders", k), "order does not equal p^(h+1)");
  }
  // Socle elements are implied by x = p^h y; a stored socle list must agree.
  for (std::size_t k = 0; k < gens.size(); ++k) gs.socle.push_back(ipow(gs.prime, gs.heights[k]) * gs.generators[k]);
  if (j.contains("socle")) {
    const Json& sj = io::array(j["socle"], "/socle");
    if (sj.size() != gens.size()) io::fail("/socle", "expected one socle element per generator");
    for (std::size_t k = 0; k < sj.size(); ++k) gs.socle[k] = element_from_json(sj[k], gs.window, io::child("/socle", k));
  }
  const Json& bl = io::array(io::member(j, "blocks", ""), "/blocks");
  std::size_t prev = 0;
  for (std::size_t k = 0; k < bl.size(); ++k) {
    const std::string p = io::child("/blocks", k);
    const std::size_t d = io::positive(io::member(bl[k], "d", p), p + "/d");
    const Residue m = io::integer(io::member(bl[k], "m", p), p + "/m");
    if (m < static_cast<Residue>(prev)) io::fail(p + "/m", "cumulative counts must not decrease");
    gs.blocks.push_back({d, static_cast<std::size_t>(m) - prev});
    prev = static_cast<std::size_t>(m);
  }
  const Json& ns = io::member(j, "n_sequence", "");
  if (!ns.is_object()) io::fail("/n_sequence", "expected an object");
  gs.n_sequence.assign(gs.window->size(), 0);
  for (const auto& [k, v] : ns.items()) {
    const std::size_t i = io::index_key(k, "/n_sequence/" + k, false);
    if (i > gs.window->size()) io::fail("/n_sequence/" + k, "index outside the window");
    gs.n_sequence[i - 1] = io::positive(v, "/n_sequence/" + k);
  }
  for (std::size_t i = 0; i < gs.n_sequence.size(); ++i)
    if (gs.n_sequence[i] == 0) io::fail("/n_sequence", "missing n_" + std::to_string(i + 1));
  gs.status = j.contains("status") && j["status"].is_string() ? parse_status(j["status"].get<std::string>()) : Status::holds;
  return gs;
}

inline OrderedJson report_to_json(const BlockReport& r) {
  OrderedJson out = OrderedJson::array();
  for (const auto& c : r.checks) {
    OrderedJson e = {{"check", c.name}, {"passed", c.passed}};
    if (!c.passed) e["detail"] = c.detail;
    out.push_back(e);
  }
  return out;
}

}  // namespace abelcode
