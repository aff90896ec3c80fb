#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodalsyz/sheaf.hpp"

namespace nodalsyz::io {

using Json = nlohmann::json;

// Malformed or invalid input.  The message starts with "source:line:" when
// the offending field can be located in the text.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BundleSpec {
  LineBundle bundle;
  // Coefficient vectors in the basis of H^0(L); absent means W = H^0(L).
  std::optional<std::vector<std::vector<Rational>>> w;
  std::vector<LineBundle> e;
};

// A document with its source name, for error messages.
struct Document {
  std::string source;
  std::string text;
  Json json;
};

Document parse_document(const std::string& text, const std::string& source);
Document read_document(const std::string& path);

// {"components": [{"id": "Z1", "marked": ["5"]}, ...],
//  "nodes": [{"id": "e1", "a": ["Z1", "0"], "b": ["Z2", "0"]}, ...]}
CurvePtr parse_curve(const Document& doc, const Json& value);
CurvePtr parse_curve(const Document& doc);

// {"degrees": {"Z1": 3}, "gluings": {"e1": "2"}, "W": [["1", "0"], ...],
//  "E": [{"degrees": ..., "gluings": ...}, ...]}.  Missing gluings default to 1.
BundleSpec parse_bundle(const Document& doc, const Json& value, const CurvePtr& curve);
BundleSpec parse_bundle(const Document& doc, const CurvePtr& curve);

// W as a linear system; the complete system when spec.w is absent.
LinearSystem linear_system(const BundleSpec& spec);

Json to_json(const NodalCurve& curve);
Json to_json(const LineBundle& bundle);
Json to_json(const BundleSpec& spec);
Json to_json(const Section& section, const NodalCurve& curve);

// Keys sorted, two-space indent, trailing newline.
std::string dump(const Json& j);

// SHA-256 of the given texts, hex encoded.
std::string input_hash(const std::vector<std::string>& texts);

}  // namespace nodalsyz::io
