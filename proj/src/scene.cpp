#include "scenelogic/scene.hpp"

#include <cmath>

#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

std::vector<Violation> validate_scene(const Scene& scene,
                                      const DomainProfile& profile) {
  std::vector<Violation> out;
  if (!scene.profile_name.empty() && scene.profile_name != profile.name())
    out.push_back({std::nullopt, "profile",
                   "scene profile " + scene.profile_name + " != " + profile.name()});
  if (scene.objects.size() > profile.count_max())
    out.push_back({std::nullopt, "count",
                   std::to_string(scene.objects.size()) + " objects exceeds count_max " +
                       std::to_string(profile.count_max())});

  for (const auto& [rel, vec] : scene.directions) {
    if (!profile.relation_index(rel))
      out.push_back({std::nullopt, "direction", "unknown relation " + rel});
    else if (vec.size() != profile.coordinate_dims())
      out.push_back({std::nullopt, "direction", "wrong dimension for " + rel});
  }

  const auto dims = profile.coordinate_dims();
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const ObjectRecord& o = scene.objects[i];
    if (o.id != i)
      out.push_back({o.id, "id", "expected id " + std::to_string(i)});
    for (const auto& a : profile.attributes()) {
      auto it = o.entries.find(a.name);
      if (it == o.entries.end()) {
        out.push_back({o.id, "attribute", a.name + " missing"});
        continue;
      }
      auto idx = a.find(it->second);
      if (!idx || !a.is_leaf(*idx))
        out.push_back({o.id, "attribute",
                       a.name + " has non-leaf or unknown entry " + it->second});
    }
    for (const auto& [name, _] : o.entries)
      if (!profile.attribute_index(name))
        out.push_back({o.id, "attribute", "unknown attribute " + name});
    if (o.position.size() != dims) {
      out.push_back({o.id, "dimension",
                     "position has " + std::to_string(o.position.size()) +
                         " components, expected " + std::to_string(dims)});
      continue;
    }
    for (std::size_t d = 0; d < dims; ++d)
      if (!std::isfinite(o.position[d]) || !profile.bounds()[d].contains(o.position[d]))
        out.push_back({o.id, "bounds", "axis " + std::to_string(d)});
  }

  for (std::size_t i = 0; i < scene.objects.size(); ++i)
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j)
      if (scene.objects[i].position == scene.objects[j].position)
        out.push_back({scene.objects[j].id, "position",
                       "coincides with object " + std::to_string(scene.objects[i].id)});
  return out;
}

const std::vector<double>& relation_direction(const Scene& scene,
                                              std::string_view relation,
                                              const DomainProfile& profile) {
  auto idx = profile.relation_index(relation);
  if (!idx) throw SceneError("unknown relation " + std::string(relation));
  if (auto it = scene.directions.find(std::string(relation));
      it != scene.directions.end())
    return it->second;
  return profile.relations()[*idx].direction;
}

ObjectSet relation_set(const Scene& scene, ObjectId anchor,
                       std::string_view relation, const DomainProfile& profile) {
  const auto& dir = relation_direction(scene, relation, profile);
  if (anchor >= scene.objects.size())
    throw SceneError("missing anchor object " + std::to_string(anchor));
  const auto& origin = scene.objects[anchor].position;
  ObjectSet out;
  for (const auto& o : scene.objects) {
    if (o.id == anchor) continue;
    if (o.position.size() != dir.size() || origin.size() != dir.size())
      throw SceneError("position dimension mismatch for object " +
                       std::to_string(o.id));
    double dot = 0.0;
    for (std::size_t d = 0; d < dir.size(); ++d)
      dot += (o.position[d] - origin[d]) * dir[d];
    if (dot > 0.0) out.insert(o.id);
  }
  return out;
}

ojson scene_to_json(const Scene& scene, const DomainProfile& profile) {
  ojson doc;
  doc["scene_id"] = scene.scene_id;
  doc["profile"] = scene.profile_name.empty() ? profile.name() : scene.profile_name;
  ojson objects = ojson::array();
  for (const auto& o : scene.objects) {
    ojson obj;
    obj["id"] = o.id;
    for (const auto& a : profile.attributes())
      if (auto it = o.entries.find(a.name); it != o.entries.end())
        obj[a.name] = it->second;
    obj["position"] = o.position;
    if (o.rotation) obj["rotation"] = *o.rotation;
    objects.push_back(std::move(obj));
  }
  doc["objects"] = std::move(objects);
  if (!scene.directions.empty()) {
    ojson dirs = ojson::object();
    for (const auto& [rel, vec] : scene.directions) dirs[rel] = vec;
    doc["directions"] = std::move(dirs);
  }
  return doc;
}

Scene scene_from_json(const ojson& doc, const DomainProfile& profile) {
  if (!doc.is_object()) throw SceneError("scene JSON must be an object");
  try {
    Scene s;
    s.scene_id = doc.value("scene_id", std::string{});
    s.profile_name = doc.value("profile", profile.name());
    if (!doc.contains("objects") || !doc["objects"].is_array())
      throw SceneError("scene JSON needs an objects array");
    std::size_t ordinal = 0;
    for (const auto& obj : doc["objects"]) {
      if (!obj.is_object()) throw SceneError("object entries must be JSON objects");
      ObjectRecord o;
      o.id = obj.contains("id") ? obj["id"].get<ObjectId>()
                                : static_cast<ObjectId>(ordinal);
      for (const auto& [key, val] : obj.items()) {
        if (key == "id" || key == "position" || key == "rotation") continue;
        if (!profile.attribute_index(key))
          throw SceneError("object " + std::to_string(o.id) +
                           ": unknown attribute " + key);
        o.entries[key] = val.get<std::string>();
      }
      if (obj.contains("position"))
        o.position = obj["position"].get<std::vector<double>>();
      if (obj.contains("rotation")) o.rotation = obj["rotation"].get<double>();
      s.objects.push_back(std::move(o));
      ++ordinal;
    }
    if (doc.contains("directions")) {
      for (const auto& [rel, vec] : doc["directions"].items())
        s.directions[rel] = vec.get<std::vector<double>>();
    }
    return s;
  } catch (const ojson::exception& e) {
    throw SceneError(std::string("malformed scene JSON: ") + e.what());
  }
}

}  // namespace scenelogic
