#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenelogic/object_set.hpp"
#include "scenelogic/profile.hpp"

namespace scenelogic {

// Structural representation of one object: discrete attribute entries plus
// coordinates in scene units.
struct ObjectRecord {
  ObjectId id = 0;
  std::map<std::string, std::string> entries;  // attribute name -> leaf entry
  std::vector<double> position;
  // Pose angle in degrees. Carried through JSON and compact encoding; no
  // program module reads it.
  std::optional<double> rotation;

  friend bool operator==(const ObjectRecord&, const ObjectRecord&) = default;
};

struct Scene {
  std::string scene_id;
  std::string profile_name;
  std::vector<ObjectRecord> objects;
  // Per-scene relation vectors overriding the profile's (camera-skewed data).
  std::map<std::string, std::vector<double>> directions;

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct Violation {
  std::optional<ObjectId> object;  // nullopt for scene-level rules
  std::string rule;    // count, id, attribute, dimension, bounds, position, profile, direction
  std::string detail;  // names the attribute or value involved
};

// Empty iff every scene and object invariant holds.
std::vector<Violation> validate_scene(const Scene& scene,
                                      const DomainProfile& profile);

// Direction vector for a relation, honouring scene overrides.
// Throws SceneError for unknown relations.
const std::vector<double>& relation_direction(const Scene& scene,
                                              std::string_view relation,
                                              const DomainProfile& profile);

// { o != anchor : dot(pos(o) - pos(anchor), dir(relation)) > 0 }.
// Throws SceneError for an unknown relation or missing anchor.
ObjectSet relation_set(const Scene& scene, ObjectId anchor,
                       std::string_view relation, const DomainProfile& profile);

// Scene JSON: {"scene_id","profile","objects":[{"id",<attr>...,"position"}]}
// with optional per-object "rotation" and scene-level "directions".
nlohmann::ordered_json scene_to_json(const Scene& scene,
                                     const DomainProfile& profile);
// Attribute keys are taken from the profile; unknown keys are rejected so
// that typos surface as errors rather than missing attributes.
Scene scene_from_json(const nlohmann::ordered_json& doc,
                      const DomainProfile& profile);

}  // namespace scenelogic
