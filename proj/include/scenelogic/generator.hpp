#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scenelogic/catalog.hpp"
#include "scenelogic/executor.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"
#include "scenelogic/rng.hpp"
#include "scenelogic/scene.hpp"
#include "scenelogic/templates.hpp"
#include "scenelogic/value.hpp"

namespace scenelogic {

struct QAItem {
  std::string id;
  std::string scene_id;
  QuestionFamily family = QuestionFamily::count;
  std::string template_id;
  std::string question;
  Program program;
  Value answer;
};

// Minimum pairwise separation as a fraction of each axis' bound width
// (Chebyshev distance on normalized coordinates).
inline constexpr double kMinSeparation = 0.01;
inline constexpr std::size_t kPlacementAttempts = 1000;
inline constexpr std::size_t kInstantiateAttempts = 64;
inline constexpr std::size_t kTemplateAttempts = 32;
inline constexpr std::size_t kSceneAttempts = 16;

// Uniform attributes and positions. Throws GenerationError if the object
// range is invalid or an object cannot be placed within the budget.
Scene sample_scene(const DomainProfile& profile, Rng& rng, std::size_t min_objects,
                   std::size_t max_objects, std::string scene_id = "scene");
Scene sample_scene(const DomainProfile& profile, Rng& rng, std::string scene_id = "scene");

// Why an executed instantiation is rejected: "empty filter" when a filter
// step yields no objects (filter chains read by exist are exempt, else every
// existence question would answer yes), "self comparison" when both operands
// of a binary module resolve to the same unique object. nullopt if accepted.
std::optional<std::string> degeneracy(const Program& program, const Outcome& outcome);

class QuestionGenerator {
 public:
  QuestionGenerator(const DomainProfile& profile, TemplatePack pack);

  const DomainProfile& profile() const { return *profile_; }
  const TemplatePack& pack() const { return pack_; }
  const std::shared_ptr<const Catalog>& catalog() const { return catalog_; }
  // Families with at least one template, in canonical order.
  const std::vector<QuestionFamily>& families() const { return families_; }

  // Up to `attempts` slot samplings; nullopt when all are rejected.
  std::optional<QAItem> instantiate(const Template& t, const Scene& scene, Rng& rng,
                                    std::size_t attempts = kInstantiateAttempts) const;

  // Uniform family, then uniform template within it, retried within the
  // family. Throws GenerationError when the family cannot be instantiated.
  QAItem sample_item(const Scene& scene, Rng& rng) const;

  Bindings sample_bindings(const Template& t, const Scene& scene, Rng& rng) const;

 private:
  const DomainProfile* profile_;
  TemplatePack pack_;
  std::shared_ptr<const Catalog> catalog_;
  std::vector<QuestionFamily> families_;
  std::vector<std::vector<std::size_t>> by_family_;
};

std::optional<QAItem> instantiate(const Template& t, const TemplatePack& pack,
                                  const Scene& scene, const DomainProfile& profile,
                                  Rng& rng);

struct SceneQuestions {
  Scene scene;
  std::vector<QAItem> items;
};

std::string scene_name(std::size_t index);

// Scene i and its questions draw from Rng(derive_seed(seed, i)), so output is
// a pure function of the arguments and scenes can be produced independently.
// Scenes on which some drawn family cannot be instantiated are redrawn, up to
// kSceneAttempts times.
void generate_dataset(const DomainProfile& profile, const TemplatePack& pack,
                      std::size_t n_scenes, std::size_t q_per_scene, std::uint64_t seed,
                      const std::function<void(SceneQuestions&&)>& sink);
std::vector<SceneQuestions> generate_dataset(const DomainProfile& profile,
                                             const TemplatePack& pack, std::size_t n_scenes,
                                             std::size_t q_per_scene, std::uint64_t seed);

}  // namespace scenelogic
