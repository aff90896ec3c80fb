#include "nodalsyz/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace nodalsyz::io {

namespace {

// 1-based line of the first occurrence of `needle`, or 0.
std::size_t line_of(const std::string& text, const std::string& needle) {
  if (needle.empty()) return 0;
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

[[noreturn]] void fail(const Document& doc, const std::string& anchor, const std::string& field,
                       const std::string& message) {
  std::string where = doc.source;
  if (const auto line = line_of(doc.text, anchor)) where += ":" + std::to_string(line);
  throw InputError(where + ": " + field + ": " + message);
}

std::string quote_id(const std::string& s) { return "\"" + s + "\""; }

const Json& root_or(const Document& doc, const char* key) {
  if (!doc.json.is_object()) fail(doc, "", "<root>", "expected a JSON object");
  if (doc.json.contains(key)) return doc.json.at(key);
  return doc.json;
}

Rational rational_field(const Document& doc, const Json& v, const std::string& field, const std::string& anchor) {
  if (!v.is_string()) fail(doc, anchor, field, "expected a rational string such as \"3/2\" or \"-1\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(doc, quote_id(v.get<std::string>()), field, e.what());
  }
}

std::string string_field(const Document& doc, const Json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) fail(doc, "", field, std::string("missing \"") + key + "\"");
  const Json& v = obj.at(key);
  if (!v.is_string() || v.get<std::string>().empty()) fail(doc, quote_id(key), field + "." + key, "expected a nonempty string");
  return v.get<std::string>();
}

BranchPoint branch_field(const Document& doc, const Json& node, const char* key, const std::string& field,
                         const std::vector<Component>& comps, const std::string& anchor) {
  const std::string path = field + "." + key;
  if (!node.contains(key)) fail(doc, anchor, field, std::string("missing \"") + key + "\"");
  const Json& v = node.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_string()) {
    fail(doc, anchor, path, "expected [component id, \"point\"]");
  }
  const std::string id = v[0].get<std::string>();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].id == id) return {i, rational_field(doc, v[1], path + "[1]", anchor)};
  }
  fail(doc, anchor, path + "[0]", "unknown component " + quote_id(id));
}

LineBundle bundle_body(const Document& doc, const Json& obj, const CurvePtr& curve, const std::string& field) {
  if (!obj.is_object()) fail(doc, "", field, "expected an object");
  const NodalCurve& x = *curve;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    static const std::set<std::string> known{"degrees", "gluings", "W", "E"};
    if (!known.count(it.key())) fail(doc, quote_id(it.key()), field + "." + it.key(), "unknown field");
  }
  if (!obj.contains("degrees")) fail(doc, "", field, "missing \"degrees\"");
  const Json& deg = obj.at("degrees");
  if (!deg.is_object()) fail(doc, "\"degrees\"", field + ".degrees", "expected an object");
  std::vector<int> degrees(x.component_count());
  for (auto it = deg.begin(); it != deg.end(); ++it) {
    const std::string path = field + ".degrees." + it.key();
    bool found = false;
    for (std::size_t i = 0; i < x.component_count(); ++i) {
      if (x.components()[i].id != it.key()) continue;
      if (!it.value().is_number_integer()) fail(doc, quote_id(it.key()), path, "expected an integer");
      degrees[i] = it.value().get<int>();
      found = true;
    }
    if (!found) fail(doc, quote_id(it.key()), path, "unknown component");
  }
  for (const auto& c : x.components()) {
    if (!deg.contains(c.id)) fail(doc, "\"degrees\"", field + ".degrees", "missing component " + quote_id(c.id));
  }
  std::vector<Rational> gluings(x.node_count(), Rational(1));
  if (obj.contains("gluings")) {
    const Json& glue = obj.at("gluings");
    if (!glue.is_object()) fail(doc, "\"gluings\"", field + ".gluings", "expected an object");
    for (auto it = glue.begin(); it != glue.end(); ++it) {
      const std::string path = field + ".gluings." + it.key();
      bool found = false;
      for (std::size_t e = 0; e < x.node_count(); ++e) {
        if (x.nodes()[e].id != it.key()) continue;
        gluings[e] = rational_field(doc, it.value(), path, quote_id(it.key()));
        if (gluings[e] == 0) fail(doc, quote_id(it.key()), path, "gluing must be nonzero");
        found = true;
      }
      if (!found) fail(doc, quote_id(it.key()), path, "unknown node");
    }
  }
  return LineBundle(curve, std::move(degrees), std::move(gluings));
}

Json rational_json(const Rational& q) { return to_string(q); }

}  // namespace

Document parse_document(const std::string& text, const std::string& source) {
  Document d{source, text, {}};
  try {
    d.json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    // nlohmann reports "line L, column C"; keep it, prefixed with the source.
    throw InputError(source + ": malformed JSON: " + msg);
  }
  return d;
}

Document read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

CurvePtr parse_curve(const Document& doc, const Json& value) {
  if (!value.is_object()) fail(doc, "", "curve", "expected an object");
  if (!value.contains("components") || !value.at("components").is_array()) {
    fail(doc, "\"components\"", "components", "expected a list of components");
  }
  std::vector<Component> comps;
  const Json& jc = value.at("components");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string field = "components[" + std::to_string(i) + "]";
    Component c;
    c.id = string_field(doc, jc[i], "id", field);
    const std::string anchor = quote_id(c.id);
    if (jc[i].contains("marked")) {
      const Json& m = jc[i].at("marked");
      if (!m.is_array()) fail(doc, anchor, field + ".marked", "expected a list of rational strings");
      for (std::size_t k = 0; k < m.size(); ++k) {
        c.marked_points.push_back(rational_field(doc, m[k], field + ".marked[" + std::to_string(k) + "]", anchor));
      }
    }
    comps.push_back(std::move(c));
  }
  if (comps.empty()) fail(doc, "\"components\"", "components", "a curve needs at least one component");
  try {
    NodalCurve(comps, {});
  } catch (const CurveError& e) {
    fail(doc, "\"components\"", "components", e.what());
  }
  std::vector<Node> nodes;
  if (value.contains("nodes")) {
    const Json& jn = value.at("nodes");
    if (!jn.is_array()) fail(doc, "\"nodes\"", "nodes", "expected a list of nodes");
    for (std::size_t i = 0; i < jn.size(); ++i) {
      const std::string field = "nodes[" + std::to_string(i) + "]";
      Node n;
      n.id = string_field(doc, jn[i], "id", field);
      const std::string anchor = quote_id(n.id);
      n.a = branch_field(doc, jn[i], "a", field, comps, anchor);
      n.b = branch_field(doc, jn[i], "b", field, comps, anchor);
      if (n.a == n.b) fail(doc, anchor, field, "the two branches of a node must differ");
      nodes.push_back(std::move(n));
      try {
        NodalCurve(comps, nodes);
      } catch (const CurveError& e) {
        fail(doc, anchor, field, e.what());
      }
    }
  }
  return std::make_shared<const NodalCurve>(std::move(comps), std::move(nodes));
}

CurvePtr parse_curve(const Document& doc) { return parse_curve(doc, root_or(doc, "curve")); }

BundleSpec parse_bundle(const Document& doc, const Json& value, const CurvePtr& curve) {
  BundleSpec spec{bundle_body(doc, value, curve, "bundle"), std::nullopt, {}};
  if (value.contains("E")) {
    const Json& je = value.at("E");
    if (!je.is_array() || je.empty()) fail(doc, "\"E\"", "bundle.E", "expected a nonempty list of bundles");
    for (std::size_t i = 0; i < je.size(); ++i) {
      const std::string field = "bundle.E[" + std::to_string(i) + "]";
      if (je[i].contains("W") || je[i].contains("E")) fail(doc, "\"E\"", field, "summands take only degrees and gluings");
      spec.e.push_back(bundle_body(doc, je[i], curve, field));
    }
  }
  if (value.contains("W")) {
    const Json& jw = value.at("W");
    if (!jw.is_array()) fail(doc, "\"W\"", "bundle.W", "expected a list of coefficient vectors");
    const std::size_t h = h0(spec.bundle);
    std::vector<std::vector<Rational>> w;
    for (std::size_t i = 0; i < jw.size(); ++i) {
      const std::string field = "bundle.W[" + std::to_string(i) + "]";
      if (!jw[i].is_array() || jw[i].size() != h) {
        fail(doc, "\"W\"", field, "expected " + std::to_string(h) + " coefficients (h0 of the bundle)");
      }
      std::vector<Rational> col;
      for (std::size_t k = 0; k < h; ++k) col.push_back(rational_field(doc, jw[i][k], field, "\"W\""));
      w.push_back(std::move(col));
    }
    spec.w = std::move(w);
    try {
      linear_system(spec);
    } catch (const std::invalid_argument& e) {
      fail(doc, "\"W\"", "bundle.W", e.what());
    }
  }
  return spec;
}

BundleSpec parse_bundle(const Document& doc, const CurvePtr& curve) {
  return parse_bundle(doc, root_or(doc, "bundle"), curve);
}

LinearSystem linear_system(const BundleSpec& spec) {
  auto space = std::make_shared<const SectionSpace>(spec.bundle);
  if (!spec.w) return LinearSystem::complete(space);
  Matrix coeff(space->dimension(), 0);
  for (const auto& col : *spec.w) {
    SparseVector v;
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k] != 0) v.push_back({static_cast<Index>(k), col[k]});
    }
    coeff.append_column(std::move(v));
  }
  return LinearSystem(space, std::move(coeff));
}

Json to_json(const NodalCurve& curve) {
  Json comps = Json::array();
  for (const auto& c : curve.components()) {
    Json o = {{"id", c.id}};
    if (!c.marked_points.empty()) {
      Json m = Json::array();
      for (const auto& p : c.marked_points) m.push_back(rational_json(p));
      o["marked"] = std::move(m);
    }
    comps.push_back(std::move(o));
  }
  Json nodes = Json::array();
  for (const auto& n : curve.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"a", {curve.components()[n.a.component].id, rational_json(n.a.point)}},
                     {"b", {curve.components()[n.b.component].id, rational_json(n.b.point)}}});
  }
  return {{"components", comps}, {"nodes", nodes}};
}

Json to_json(const LineBundle& bundle) {
  const NodalCurve& x = bundle.curve();
  Json deg = Json::object();
  for (std::size_t i = 0; i < x.component_count(); ++i) deg[x.components()[i].id] = bundle.degree(i);
  Json glue = Json::object();
  for (std::size_t e = 0; e < x.node_count(); ++e) glue[x.nodes()[e].id] = rational_json(bundle.gluings()[e]);
  return {{"degrees", deg}, {"gluings", glue}};
}

Json to_json(const BundleSpec& spec) {
  Json j = to_json(spec.bundle);
  if (spec.w) {
    Json w = Json::array();
    for (const auto& col : *spec.w) {
      Json c = Json::array();
      for (const auto& v : col) c.push_back(rational_json(v));
      w.push_back(std::move(c));
    }
    j["W"] = std::move(w);
  }
  if (!spec.e.empty()) {
    Json e = Json::array();
    for (const auto& s : spec.e) e.push_back(to_json(s));
    j["E"] = std::move(e);
  }
  return j;
}

Json to_json(const Section& section, const NodalCurve& curve) {
  Json j = Json::object();
  for (std::size_t c = 0; c < section.blocks.size(); ++c) {
    Json block = Json::array();
    for (const auto& v : section.blocks[c]) block.push_back(rational_json(v));
    j[curve.components()[c].id] = std::move(block);
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string input_hash(const std::vector<std::string>& texts) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-256 unavailable");
  }
  for (const auto& t : texts) {
    const std::string len = std::to_string(t.size()) + ":";
    EVP_DigestUpdate(ctx, len.data(), len.size());
    EVP_DigestUpdate(ctx, t.data(), t.size());
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_DigestFinal_ex(ctx, md, &n);
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < n; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

}  // namespace nodalsyz::io
