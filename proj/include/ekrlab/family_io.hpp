#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/json_types.hpp"

namespace ekrlab {

/// Parsed family document. Accepted forms:
///   {"n": 4, "sets": [[1,2],[1,3]]}         1-indexed, strictly increasing
///   {"n": 4, "masks_hex": ["3","5"]}         bit i-1 <-> element i
/// An optional "vertices": v marks a graph family on C(v,2) edges, and an
/// optional "k" fixes the uniformity of an otherwise empty uniform family.
struct FamilyDocument {
  unsigned n = 0;
  std::vector<Mask> sets;
  std::optional<unsigned> vertices;
  std::optional<unsigned> k;
};

FamilyDocument parse_family(const Json& j);
FamilyDocument read_family_file(const std::string& path);

SetFamily to_set_family(const FamilyDocument& doc);
/// Infers k from the members unless the document fixes it.
UniformFamily to_uniform_family(const FamilyDocument& doc);
GraphFamily to_graph_family(const FamilyDocument& doc);

Json family_json(unsigned n, std::span<const Mask> members, bool hex = false);
Json to_json(const SetFamily& f, bool hex = false);
Json to_json(const UniformFamily& f, bool hex = false);
Json to_json(const GraphFamily& f);

/// [1,3,4] for {1,3,4}.
Json set_json(Mask m);

}  // namespace ekrlab
