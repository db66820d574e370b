#include "scenelogic/catalog.hpp"

namespace scenelogic {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::source: return "source";
    case Family::set: return "set";
    case Family::boolean: return "boolean";
    case Family::query: return "query";
    case Family::relate: return "relate";
    case Family::same: return "same";
    case Family::filter: return "filter";
  }
  return "?";
}

std::string_view kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::scene: return "scene";
    case ValueKind::object: return "object";
    case ValueKind::entry: return "entry";
    case ValueKind::number: return "number";
    case ValueKind::boolean: return "boolean";
  }
  return "?";
}

std::shared_ptr<const Catalog> Catalog::build(const DomainProfile& profile) {
  auto cat = std::make_shared<Catalog>();
  cat->profile_name_ = profile.name();
  for (const auto& a : profile.attributes()) cat->attribute_names_.push_back(a.name);

  auto add = [&](TokenSpec t) { cat->tokens_.push_back(std::move(t)); };
  const auto S = ValueType::scene(), O = ValueType::object(),
             N = ValueType::number(), B = ValueType::boolean();
  const int n_attr = static_cast<int>(profile.attributes().size());

  // Set operations.
  add({"scene", Family::source, Op::scene, {}, S});
  add({"unique", Family::set, Op::unique, {S}, O});
  add({"union", Family::set, Op::union_, {S, S}, S});
  add({"intersect", Family::set, Op::intersect, {S, S}, S});
  add({"count", Family::set, Op::count, {S}, N});

  // Boolean operations.
  for (int a = 0; a < n_attr; ++a) {
    TokenSpec t{"equal_" + profile.attribute(a).name, Family::boolean,
                Op::equal_attribute, {ValueType::entry(a), ValueType::entry(a)}, B};
    t.attribute = a;
    add(std::move(t));
  }
  add({"equal_integer", Family::boolean, Op::equal_integer, {N, N}, B});
  add({"greater_than", Family::boolean, Op::greater_than, {N, N}, B});
  add({"less_than", Family::boolean, Op::less_than, {N, N}, B});
  add({"exist", Family::boolean, Op::exist, {S}, B});

  // Queries.
  for (int a = 0; a < n_attr; ++a) {
    TokenSpec t{"query_" + profile.attribute(a).name, Family::query, Op::query, {O},
                ValueType::entry(a)};
    t.attribute = a;
    add(std::move(t));
  }

  // Relations.
  for (std::size_t r = 0; r < profile.relations().size(); ++r) {
    const auto& rel = profile.relations()[r];
    TokenSpec t{"relate_" + rel.name, Family::relate, Op::relate, {O}, S, rel.name};
    t.relation = static_cast<int>(r);
    add(std::move(t));
  }
  for (int a = 0; a < n_attr; ++a) {
    TokenSpec t{"same_" + profile.attribute(a).name, Family::same, Op::same, {O}, S};
    t.attribute = a;
    add(std::move(t));
  }

  // Filters, one per extended entry.
  for (int a = 0; a < n_attr; ++a) {
    const auto& attr = profile.attribute(a);
    for (std::size_t e = 0; e < attr.extended.size(); ++e) {
      TokenSpec t{"filter_" + attr.name + "[" + attr.extended[e] + "]", Family::filter,
                  Op::filter, {S}, S, attr.extended[e]};
      t.attribute = a;
      t.entry = static_cast<int>(e);
      add(std::move(t));
    }
  }

  for (std::size_t i = 0; i < cat->tokens_.size(); ++i)
    cat->by_name_.emplace(cat->tokens_[i].name, static_cast<TokenId>(i));
  return cat;
}

std::optional<TokenId> Catalog::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::string Catalog::type_name(ValueType t) const {
  std::string out(kind_name(t.kind));
  if (t.kind == ValueKind::entry && t.attribute >= 0 &&
      static_cast<std::size_t>(t.attribute) < attribute_names_.size())
    out += "(" + attribute_names_[t.attribute] + ")";
  return out;
}

nlohmann::ordered_json Catalog::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& t : tokens_) {
    nlohmann::ordered_json row;
    row["name"] = t.name;
    row["family"] = family_name(t.family);
    row["arity"] = t.arity();
    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (auto i : t.inputs) in.push_back(type_name(i));
    row["inputs"] = in;
    row["output"] = type_name(t.output);
    if (t.parameter) row["parameter"] = *t.parameter;
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["profile"] = profile_name_;
  doc["tokens"] = rows;
  return doc;
}

}  // namespace scenelogic
