#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "scenelogic/catalog.hpp"
#include "scenelogic/object_set.hpp"
#include "scenelogic/profile.hpp"

namespace scenelogic {

struct SceneVal {
  ObjectSet members;
  friend constexpr bool operator==(SceneVal, SceneVal) = default;
};

struct ObjectVal {
  ObjectId id = 0;
  friend constexpr bool operator==(ObjectVal, ObjectVal) = default;
};

// Attribute value; indices refer to the executing profile (attribute order and
// Attribute::extended). Use value_summary / value_to_json for names.
struct EntryVal {
  std::uint16_t attribute = 0;
  std::uint16_t index = 0;
  friend constexpr bool operator==(EntryVal, EntryVal) = default;
};

struct NumberVal {
  std::uint32_t value = 0;
  friend constexpr bool operator==(NumberVal, NumberVal) = default;
};

struct BoolVal {
  bool value = false;
  friend constexpr bool operator==(BoolVal, BoolVal) = default;
};

using Value = std::variant<SceneVal, ObjectVal, EntryVal, NumberVal, BoolVal>;

ValueType type_of(const Value& v);
bool is_answer_type(ValueKind kind);

// Short human form: scene{0,2}, object#1, red, 3, true.
std::string value_summary(const Value& v, const DomainProfile& profile);

// Tagged JSON form used in traces:
//   {"type":"scene","objects":[...]}, {"type":"object","id":n},
//   {"type":"entry","attribute":a,"value":e}, {"type":"number","value":n},
//   {"type":"boolean","value":b}
nlohmann::ordered_json value_to_json(const Value& v, const DomainProfile& profile);
Value value_from_json(const nlohmann::ordered_json& doc, const DomainProfile& profile);

// Bare JSON form used for dataset answers: number, bool or entry string.
nlohmann::ordered_json answer_to_json(const Value& v, const DomainProfile& profile);
Value answer_from_json(const nlohmann::ordered_json& doc, const DomainProfile& profile);

Value make_entry(const DomainProfile& profile, std::string_view entry);

}  // namespace scenelogic
