#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ekrlab/family.hpp"
#include "ekrlab/json_types.hpp"
#include "ekrlab/real.hpp"

namespace ekrlab {

enum class FlagState { holds, fails, unresolved };

/// One named hypothesis or conclusion, with both sides kept as strings so
/// exact values survive serialization.
struct Flag {
  std::string name;
  FlagState state = FlagState::unresolved;
  std::string lhs;
  std::string relation;
  std::string rhs;
  std::string slack;
  bool equality = false;
  bool near_boundary = false;
  long bits = 0;  // 0 = exact
  std::string note;

  static Flag compared(std::string name, const Comparison& c, Relation rel);
  static Flag boolean(std::string name, bool value, std::string note = {});
  static Flag unknown(std::string name, std::string lhs, std::string relation, std::string rhs, std::string note);

  bool holds() const { return state == FlagState::holds; }
};

enum class Status { holds, violated, hypothesis_not_met, unresolved, vacuous };
const char* status_name(Status s);

struct VerdictReport {
  std::string check;
  Json inputs = Json::object();
  std::vector<Flag> hypotheses;
  std::optional<Flag> conclusion;
  std::vector<Flag> parts;  // sub-checks behind a combined conclusion
  std::optional<Mask> witness;
  std::string witness_kind;  // "umvirate", "or", "triangle", ...
  std::string witness_text;  // human form when the mask is not a plain set
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::string> notes;
  Status status = Status::unresolved;

  bool any_failed() const;
  bool any_unresolved() const;
  std::optional<bool> conclusion_holds() const;
  void add_value(std::string name, std::string value) { values.emplace_back(std::move(name), std::move(value)); }
  /// Derives status from the flags: a failed hypothesis wins, then an
  /// unresolved one, then the conclusion.
  void finalize();
  Json to_json() const;
};

}  // namespace ekrlab
