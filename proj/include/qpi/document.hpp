#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpi/multilinear.hpp"
#include "qpi/quiver.hpp"

namespace qpi {

// The on-disk description of a quiver, its named path sets, and named
// polynomials. Two encodings: a line-oriented text format (canonical)
// and a JSON alternative. Vertex numbering is 1-based; arrow names are
// free UTF-8 tokens (Greek letters welcome) except the reserved trivial
// path spelling "e<digits>".

struct DocArrow {
  std::string name;
  int from = 0;
  int to = 0;
  int line = 0;

  bool operator==(const DocArrow& o) const {
    return name == o.name && from == o.from && to == o.to;
  }
};

// A path as written: ["e1"] or a list of arrow names in composition order.
struct DocPathSpec {
  std::vector<std::string> tokens;
  int line = 0;
  int column = 0;

  bool operator==(const DocPathSpec& o) const { return tokens == o.tokens; }
};

struct DocPathSet {
  std::string name;
  std::vector<DocPathSpec> paths;
  int line = 0;

  bool operator==(const DocPathSet& o) const { return name == o.name && paths == o.paths; }
};

struct DocPolynomial {
  std::string name;
  std::string text;
  int line = 0;

  bool operator==(const DocPolynomial& o) const { return name == o.name && text == o.text; }
};

struct QuiverDocument {
  int version = 1;
  int vertices = 0;
  std::vector<DocArrow> arrows;
  std::vector<DocPathSet> path_sets;
  std::vector<DocPolynomial> polynomials;

  bool operator==(const QuiverDocument&) const = default;

  Quiver to_quiver() const;

  // Resolves a named path set. Reserved names: "all" is every trivial
  // path plus every arrow (it generates every path of the quiver);
  // "arrows" is the arrows alone.
  PathSet resolve_path_set(const Quiver& q, const std::string& name) const;

  std::vector<std::string> path_set_names() const;
  MultilinearPoly polynomial(const std::string& name) const;  // UsageError when absent
};

// Parses the text format; diagnostics carry line and column.
QuiverDocument parse_document(const std::string& text);

// Parses the JSON encoding.
QuiverDocument parse_document_json(const std::string& text);

// Canonical text emission; parse(emit(doc)) == doc, and canonical files
// round-trip byte-identically.
std::string emit_document(const QuiverDocument& doc);

std::string emit_document_json(const QuiverDocument& doc);

}  // namespace qpi
