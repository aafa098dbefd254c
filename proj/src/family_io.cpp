#include "ekrlab/family_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ekrlab {

namespace {

Mask parse_hex(const std::string& s) {
  std::string_view v = s;
  if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);
  if (v.empty() || v.size() > 16) throw std::invalid_argument("invalid hex mask '" + s + "'");
  Mask m = 0;
  for (char c : v) {
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      throw std::invalid_argument("invalid hex mask '" + s + "'");
    m = (m << 4) | static_cast<Mask>(d);
  }
  return m;
}

std::string hex_string(Mask m) {
  static const char* digits = "0123456789abcdef";
  if (m == 0) return "0";
  std::string s;
  while (m != 0) {
    s.insert(s.begin(), digits[m & 15]);
    m >>= 4;
  }
  return s;
}

}  // namespace

FamilyDocument parse_family(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_unsigned())
    throw std::invalid_argument("family JSON needs a non-negative integer \"n\"");
  FamilyDocument doc;
  doc.n = j["n"].get<unsigned>();
  if (doc.n > kMaxUniformN) throw std::invalid_argument("n out of range (max 64)");
  const Mask universe = prefix_mask(doc.n);
  const bool has_sets = j.contains("sets"), has_hex = j.contains("masks_hex");
  if (has_sets == has_hex) throw std::invalid_argument("family JSON needs exactly one of \"sets\" or \"masks_hex\"");
  if (has_sets) {
    for (const auto& s : j["sets"]) {
      if (!s.is_array()) throw std::invalid_argument("each set must be a list of elements");
      Mask m = 0;
      int prev = 0;
      for (const auto& e : s) {
        if (!e.is_number_integer()) throw std::invalid_argument("set elements must be integers");
        int v = e.get<int>();
        if (v <= prev) throw std::invalid_argument("set elements must be strictly increasing");
        if (v < 1 || static_cast<unsigned>(v) > doc.n) throw std::invalid_argument("element " + std::to_string(v) + " outside [n]");
        m |= Mask{1} << (v - 1);
        prev = v;
      }
      doc.sets.push_back(m);
    }
  } else {
    for (const auto& s : j["masks_hex"]) {
      if (!s.is_string()) throw std::invalid_argument("masks_hex entries must be strings");
      Mask m = parse_hex(s.get<std::string>());
      if ((m & ~universe) != 0) throw std::invalid_argument("mask " + s.get<std::string>() + " outside [n]");
      doc.sets.push_back(m);
    }
  }
  if (j.contains("vertices")) {
    doc.vertices = j["vertices"].get<unsigned>();
    if (*doc.vertices * (*doc.vertices - 1) / 2 != doc.n) throw std::invalid_argument("\"vertices\" does not match n = C(v,2)");
  }
  if (j.contains("k")) doc.k = j["k"].get<unsigned>();
  return doc;
}

FamilyDocument read_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open family file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed family file '" + path + "': " + e.what());
  }
  return parse_family(j);
}

SetFamily to_set_family(const FamilyDocument& doc) { return SetFamily::from_members(doc.n, doc.sets); }

UniformFamily to_uniform_family(const FamilyDocument& doc) {
  unsigned k = doc.k ? *doc.k : (doc.sets.empty() ? 0 : popcount(doc.sets.front()));
  return UniformFamily::from_members(doc.n, k, doc.sets);
}

GraphFamily to_graph_family(const FamilyDocument& doc) {
  if (!doc.vertices) throw std::invalid_argument("graph families need \"vertices\"");
  return GraphFamily(EdgeGround(*doc.vertices), to_set_family(doc));
}

Json set_json(Mask m) { return Json(elements_of(m)); }

Json family_json(unsigned n, std::span<const Mask> members, bool hex) {
  Json j;
  j["n"] = n;
  if (hex) {
    Json arr = Json::array();
    for (Mask m : members) arr.push_back(hex_string(m));
    j["masks_hex"] = std::move(arr);
  } else {
    Json arr = Json::array();
    for (Mask m : members) arr.push_back(set_json(m));
    j["sets"] = std::move(arr);
  }
  return j;
}

Json to_json(const SetFamily& f, bool hex) { return family_json(f.n(), f.members(), hex); }

Json to_json(const UniformFamily& f, bool hex) {
  Json j = family_json(f.n(), f.members(), hex);
  j["k"] = f.k();
  return j;
}

Json to_json(const GraphFamily& f) {
  Json j = to_json(f.family);
  j["vertices"] = f.ground.vertices();
  return j;
}

}  // namespace ekrlab
