#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "scenelogic/profile.hpp"

namespace scenelogic {

enum class ValueKind : std::uint8_t { scene, object, entry, number, boolean };

// Static type of a module input or output. Entry types may carry the index of
// the attribute they range over; kNoAttribute means "any entry".
struct ValueType {
  static constexpr int kNoAttribute = -1;

  ValueKind kind = ValueKind::scene;
  int attribute = kNoAttribute;

  static constexpr ValueType scene() { return {ValueKind::scene}; }
  static constexpr ValueType object() { return {ValueKind::object}; }
  static constexpr ValueType number() { return {ValueKind::number}; }
  static constexpr ValueType boolean() { return {ValueKind::boolean}; }
  static constexpr ValueType entry(int attribute = kNoAttribute) {
    return {ValueKind::entry, attribute};
  }

  friend constexpr bool operator==(ValueType, ValueType) = default;
};

// Refined typing compares entry attributes; coarse typing only kinds.
enum class Typing { refined, coarse };

constexpr bool type_matches(ValueType expected, ValueType found, Typing typing) {
  if (expected.kind != found.kind) return false;
  if (typing == Typing::coarse || expected.kind != ValueKind::entry) return true;
  return expected.attribute == found.attribute;
}

enum class Family : std::uint8_t { source, set, boolean, query, relate, same, filter };

// Semantic operation a token performs; parameterized ops carry the attribute,
// relation or entry in the TokenSpec.
enum class Op : std::uint8_t {
  scene,
  unique,
  union_,
  intersect,
  count,
  exist,
  equal_attribute,
  equal_integer,
  greater_than,
  less_than,
  query,
  relate,
  same,
  filter,
};

using TokenId = std::uint16_t;

struct TokenSpec {
  std::string name;  // e.g. "filter_color[red]"
  Family family = Family::source;
  Op op = Op::scene;
  std::vector<ValueType> inputs;
  ValueType output;
  std::optional<std::string> parameter;  // entry or relation name

  int attribute = -1;  // equal/query/same/filter
  int relation = -1;   // relate
  int entry = -1;      // filter: index into Attribute::extended

  std::size_t arity() const { return inputs.size(); }
};

std::string_view family_name(Family f);
std::string_view kind_name(ValueKind k);

// The closed token set for one profile: the set, boolean, query, relate, same
// and filter module tables instantiated over the profile's attributes and
// relations.
class Catalog {
 public:
  static std::shared_ptr<const Catalog> build(const DomainProfile& profile);

  const std::string& profile_name() const { return profile_name_; }
  std::size_t size() const { return tokens_.size(); }
  const TokenSpec& token(TokenId id) const { return tokens_[id]; }
  const std::vector<TokenSpec>& tokens() const { return tokens_; }
  std::optional<TokenId> find(std::string_view name) const;
  TokenId scene_token() const { return 0; }

  const std::vector<std::string>& attribute_names() const { return attribute_names_; }

  // "entry(color)", "scene", ...
  std::string type_name(ValueType t) const;

  // Table of every token: name, family, arity, input and output types.
  nlohmann::ordered_json to_json() const;

 private:
  std::string profile_name_;
  std::vector<std::string> attribute_names_;
  std::vector<TokenSpec> tokens_;
  std::unordered_map<std::string, TokenId> by_name_;
};

}  // namespace scenelogic
