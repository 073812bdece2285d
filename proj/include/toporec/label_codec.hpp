#pragma once

// Self-delimiting label encoding and the label file format.

#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "toporec/bits.hpp"

namespace toporec {

enum class LabelKind : std::uint8_t {
  MainScheme,
  RootD3,
  HubD3,
  LeafD3,
  LeafD3Null,
  StarLeaf,
  StarLeafNull,
  StarCenter,
  Line,
  LineTiny,
};

inline constexpr std::size_t kLabelKinds = 10;
inline constexpr std::size_t kTagBits = 4;

inline constexpr std::array<const char*, kLabelKinds> kKindNames = {
    "MainScheme", "RootD3", "HubD3", "LeafD3", "LeafD3Null", "StarLeaf", "StarLeafNull", "StarCenter", "Line", "LineTiny"};

// Field count per kind, in enum order.
inline constexpr std::array<std::size_t, kLabelKinds> kKindFields = {12, 0, 1, 3, 0, 3, 0, 0, 4, 2};

inline const char* kind_name(LabelKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

inline LabelKind kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kLabelKinds; ++i)
    if (name == kKindNames[i]) return static_cast<LabelKind>(i);
  throw ParseError("unknown label kind '" + name + "'");
}

struct StructuredLabel {
  LabelKind kind = LabelKind::MainScheme;
  std::vector<BitString> fields;
  bool operator==(const StructuredLabel&) const = default;
};

/// 4-bit kind tag, then each field with every bit doubled and "01" appended.
inline BitString encode(const StructuredLabel& label) {
  if (label.fields.size() != kKindFields[static_cast<std::size_t>(label.kind)])
    throw MalformedLabel(std::string("wrong field count for kind ") + kind_name(label.kind));
  std::string out = binary_padded(static_cast<std::uint64_t>(label.kind), kTagBits).str();
  for (const auto& f : label.fields) {
    for (char b : f.str()) {
      out.push_back(b);
      out.push_back(b);
    }
    out += "01";
  }
  return BitString(out);
}

inline StructuredLabel decode(const BitString& bits) {
  if (bits.size() < kTagBits) throw MalformedLabel("label shorter than the kind tag");
  auto tag = to_uint(bits.substr(0, kTagBits));
  if (tag >= kLabelKinds) throw MalformedLabel("unknown kind tag " + std::to_string(tag));
  StructuredLabel label{static_cast<LabelKind>(tag), {}};
  const std::string& s = bits.str();
  std::string field;
  bool open = false;
  for (std::size_t i = kTagBits; i < s.size(); i += 2) {
    if (i + 1 >= s.size()) throw MalformedLabel("dangling half pair at the end of the label");
    open = true;
    if (s[i] == s[i + 1]) {
      field.push_back(s[i]);
    } else if (s[i] == '0') {
      label.fields.emplace_back(field);
      field.clear();
      open = false;
    } else {
      throw MalformedLabel("invalid pair '10' in label");
    }
  }
  if (open) throw MalformedLabel("last field has no terminator");
  if (label.fields.size() != kKindFields[tag])
    throw MalformedLabel(std::string("wrong field count for kind ") + kind_name(label.kind));
  return label;
}

/// Longest label in the set.
template <class Range>
std::size_t scheme_length(const Range& labels) {
  std::size_t best = 0;
  bool any = false;
  for (const BitString& b : labels) {
    best = std::max(best, b.size());
    any = true;
  }
  if (!any) throw std::invalid_argument("scheme_length of an empty label set");
  return best;
}

// Label file: one line "<node_id> <kind_name> <bitstring>" per node.

inline void write_labels(std::ostream& os, const std::vector<BitString>& labels) {
  for (std::size_t v = 0; v < labels.size(); ++v)
    os << v << ' ' << kind_name(decode(labels[v]).kind) << ' ' << labels[v].str() << '\n';
}

inline std::vector<BitString> read_labels(std::istream& is, std::size_t n) {
  std::vector<BitString> labels(n);
  std::vector<bool> seen(n, false);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long v = -1;
    std::string name, bits, extra;
    if (!(ls >> v >> name >> bits) || (ls >> extra)) throw ParseError("bad label line: " + line);
    if (v < 0 || static_cast<std::size_t>(v) >= n) throw ParseError("label for unknown node " + std::to_string(v));
    if (seen[v]) throw ParseError("duplicate label for node " + std::to_string(v));
    BitString b(bits);
    if (decode(b).kind != kind_from_name(name)) throw ParseError("kind name does not match tag for node " + std::to_string(v));
    labels[v] = b;
    seen[v] = true;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw ParseError("missing label for node " + std::to_string(v));
  return labels;
}

}  // namespace toporec
