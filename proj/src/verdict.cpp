#include "ekrlab/verdict.hpp"

#include <algorithm>

#include "ekrlab/family_io.hpp"

namespace ekrlab {

Flag Flag::compared(std::string name, const Comparison& c, Relation rel) {
  Flag f;
  f.name = std::move(name);
  f.state = c.holds ? FlagState::holds : FlagState::fails;
  f.lhs = c.lhs;
  f.relation = relation_symbol(rel);
  f.rhs = c.rhs;
  f.slack = c.slack;
  f.equality = c.equality;
  f.near_boundary = c.near_boundary;
  f.bits = static_cast<long>(c.bits);
  return f;
}

Flag Flag::boolean(std::string name, bool value, std::string note) {
  Flag f;
  f.name = std::move(name);
  f.state = value ? FlagState::holds : FlagState::fails;
  f.lhs = value ? "true" : "false";
  f.relation = "==";
  f.rhs = "true";
  f.note = std::move(note);
  return f;
}

Flag Flag::unknown(std::string name, std::string lhs, std::string relation, std::string rhs, std::string note) {
  Flag f;
  f.name = std::move(name);
  f.state = FlagState::unresolved;
  f.lhs = std::move(lhs);
  f.relation = std::move(relation);
  f.rhs = std::move(rhs);
  f.note = std::move(note);
  return f;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::violated: return "violated";
    case Status::hypothesis_not_met: return "hypothesis_not_met";
    case Status::unresolved: return "unresolved";
    case Status::vacuous: return "vacuous";
  }
  return "?";
}

bool VerdictReport::any_failed() const {
  return std::any_of(hypotheses.begin(), hypotheses.end(), [](const Flag& f) { return f.state == FlagState::fails; });
}

bool VerdictReport::any_unresolved() const {
  return std::any_of(hypotheses.begin(), hypotheses.end(), [](const Flag& f) { return f.state == FlagState::unresolved; });
}

std::optional<bool> VerdictReport::conclusion_holds() const {
  if (!conclusion || conclusion->state == FlagState::unresolved) return std::nullopt;
  return conclusion->holds();
}

void VerdictReport::finalize() {
  if (status == Status::vacuous) return;
  if (any_failed()) {
    status = Status::hypothesis_not_met;
  } else if (any_unresolved()) {
    status = Status::unresolved;
  } else if (auto c = conclusion_holds()) {
    status = *c ? Status::holds : Status::violated;
  } else {
    status = Status::unresolved;
  }
}

namespace {

Json flag_json(const Flag& f) {
  Json j;
  j["name"] = f.name;
  j["state"] = f.state == FlagState::holds ? "holds" : f.state == FlagState::fails ? "fails" : "unresolved";
  j["lhs"] = f.lhs;
  j["relation"] = f.relation;
  j["rhs"] = f.rhs;
  if (!f.slack.empty()) j["slack"] = f.slack;
  if (f.equality) j["equality"] = true;
  if (f.near_boundary) j["near_boundary"] = true;
  if (f.bits != 0) j["precision_bits"] = f.bits;
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

}  // namespace

Json VerdictReport::to_json() const {
  Json j;
  j["check"] = check;
  j["status"] = status_name(status);
  j["inputs"] = inputs;
  Json hs = Json::array();
  for (const auto& h : hypotheses) hs.push_back(flag_json(h));
  j["hypotheses"] = std::move(hs);
  if (conclusion) j["conclusion"] = flag_json(*conclusion);
  if (!parts.empty()) {
    Json ps = Json::array();
    for (const auto& f : parts) ps.push_back(flag_json(f));
    j["parts"] = std::move(ps);
  }
  if (auto c = conclusion_holds()) j["conclusion_holds"] = *c;
  if (witness) {
    Json w;
    w["kind"] = witness_kind;
    w["set"] = set_json(*witness);
    if (!witness_text.empty()) w["text"] = witness_text;
    j["witness"] = std::move(w);
  }
  if (!values.empty()) {
    Json v;
    for (const auto& [k, val] : values) v[k] = val;
    j["values"] = std::move(v);
  }
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

}  // namespace ekrlab
