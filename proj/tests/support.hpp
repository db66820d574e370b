#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <unistd.h>

#include "scenelogic/builtin.hpp"
#include "scenelogic/catalog.hpp"
#include "scenelogic/generator.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/rng.hpp"
#include "scenelogic/scene.hpp"

namespace testing {

using namespace scenelogic;

inline const DomainProfile& clevr() {
  static const DomainProfile p = clevr_profile();
  return p;
}
inline const DomainProfile& minecraft() {
  static const DomainProfile p = minecraft_profile();
  return p;
}
inline const std::shared_ptr<const Catalog>& clevr_catalog() {
  static const auto c = Catalog::build(clevr());
  return c;
}
inline const std::shared_ptr<const Catalog>& minecraft_catalog() {
  static const auto c = Catalog::build(minecraft());
  return c;
}

inline ObjectRecord object(ObjectId id, std::map<std::string, std::string> entries,
                           std::vector<double> position) {
  ObjectRecord o;
  o.id = id;
  o.entries = std::move(entries);
  o.position = std::move(position);
  return o;
}

// CLEVR object with defaults for the attributes a test does not care about.
inline ObjectRecord clevr_object(ObjectId id, std::string color, std::string shape,
                                 std::vector<double> position,
                                 std::string material = "rubber",
                                 std::string size = "large") {
  return object(id, {{"color", color}, {"shape", shape}, {"material", material}, {"size", size}},
                std::move(position));
}

inline ObjectRecord mc_object(ObjectId id, std::string cls, std::vector<double> position,
                              std::string facing = "front") {
  return object(id, {{"class", cls}, {"facing", facing}}, std::move(position));
}

inline Scene scene_of(const DomainProfile& p, std::vector<ObjectRecord> objects) {
  Scene s;
  s.scene_id = "s";
  s.profile_name = p.name();
  s.objects = std::move(objects);
  return s;
}

inline std::vector<Scene> random_scenes(const DomainProfile& p, std::size_t n,
                                        std::size_t lo, std::size_t hi,
                                        std::uint64_t seed) {
  std::vector<Scene> out;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(sample_scene(p, rng, lo, hi, scene_name(i)));
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("scenelogic_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
