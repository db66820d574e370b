#include "scenelogic/value.hpp"

#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

namespace {
template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;
}  // namespace

ValueType type_of(const Value& v) {
  return std::visit(overloaded{
                        [](const SceneVal&) { return ValueType::scene(); },
                        [](const ObjectVal&) { return ValueType::object(); },
                        [](const EntryVal& e) { return ValueType::entry(e.attribute); },
                        [](const NumberVal&) { return ValueType::number(); },
                        [](const BoolVal&) { return ValueType::boolean(); },
                    },
                    v);
}

bool is_answer_type(ValueKind kind) {
  return kind == ValueKind::entry || kind == ValueKind::number ||
         kind == ValueKind::boolean;
}

namespace {
const std::string& entry_name(const EntryVal& e, const DomainProfile& profile) {
  return profile.attribute(e.attribute).extended.at(e.index);
}
}  // namespace

std::string value_summary(const Value& v, const DomainProfile& profile) {
  return std::visit(overloaded{
                        [](const SceneVal& s) {
                          std::string out = "scene{";
                          bool first = true;
                          s.members.for_each([&](ObjectId id) {
                            if (!first) out += ',';
                            out += std::to_string(id);
                            first = false;
                          });
                          return out + "}";
                        },
                        [](const ObjectVal& o) { return "object#" + std::to_string(o.id); },
                        [&](const EntryVal& e) { return entry_name(e, profile); },
                        [](const NumberVal& n) { return std::to_string(n.value); },
                        [](const BoolVal& b) { return std::string(b.value ? "true" : "false"); },
                    },
                    v);
}

ojson value_to_json(const Value& v, const DomainProfile& profile) {
  ojson doc;
  std::visit(overloaded{
                 [&](const SceneVal& s) {
                   doc["type"] = "scene";
                   doc["objects"] = s.members.ids();
                 },
                 [&](const ObjectVal& o) {
                   doc["type"] = "object";
                   doc["id"] = o.id;
                 },
                 [&](const EntryVal& e) {
                   doc["type"] = "entry";
                   doc["attribute"] = profile.attribute(e.attribute).name;
                   doc["value"] = entry_name(e, profile);
                 },
                 [&](const NumberVal& n) {
                   doc["type"] = "number";
                   doc["value"] = n.value;
                 },
                 [&](const BoolVal& b) {
                   doc["type"] = "boolean";
                   doc["value"] = b.value;
                 },
             },
             v);
  return doc;
}

Value make_entry(const DomainProfile& profile, std::string_view entry) {
  auto ref = profile.find_entry(entry);
  if (!ref) throw ExecutionError("unknown entry '" + std::string(entry) + "'");
  return EntryVal{static_cast<std::uint16_t>(ref->attribute),
                  static_cast<std::uint16_t>(ref->index)};
}

Value value_from_json(const ojson& doc, const DomainProfile& profile) {
  try {
    const auto type = doc.at("type").get<std::string>();
    if (type == "scene") {
      ObjectSet s;
      for (auto id : doc.at("objects").get<std::vector<ObjectId>>()) {
        if (id >= ObjectSet::kCapacity) throw ExecutionError("object id out of range");
        s.insert(id);
      }
      return SceneVal{s};
    }
    if (type == "object") return ObjectVal{doc.at("id").get<ObjectId>()};
    if (type == "entry") {
      Value v = make_entry(profile, doc.at("value").get<std::string>());
      const auto attr = doc.at("attribute").get<std::string>();
      if (profile.attribute(std::get<EntryVal>(v).attribute).name != attr)
        throw ExecutionError("entry does not belong to attribute " + attr);
      return v;
    }
    if (type == "number") return NumberVal{doc.at("value").get<std::uint32_t>()};
    if (type == "boolean") return BoolVal{doc.at("value").get<bool>()};
    throw ExecutionError("unknown value type '" + type + "'");
  } catch (const ojson::exception& e) {
    throw ExecutionError(std::string("malformed value JSON: ") + e.what());
  }
}

ojson answer_to_json(const Value& v, const DomainProfile& profile) {
  return std::visit(overloaded{
                        [&](const EntryVal& e) { return ojson(entry_name(e, profile)); },
                        [](const NumberVal& n) { return ojson(n.value); },
                        [](const BoolVal& b) { return ojson(b.value); },
                        [&](const auto&) -> ojson { return value_to_json(v, profile); },
                    },
                    v);
}

Value answer_from_json(const ojson& doc, const DomainProfile& profile) {
  if (doc.is_boolean()) return BoolVal{doc.get<bool>()};
  if (doc.is_number_unsigned() || (doc.is_number_integer() && doc.get<long long>() >= 0))
    return NumberVal{doc.get<std::uint32_t>()};
  if (doc.is_string()) return make_entry(profile, doc.get<std::string>());
  if (doc.is_object()) return value_from_json(doc, profile);
  throw ExecutionError("unsupported answer JSON " + doc.dump());
}

}  // namespace scenelogic
