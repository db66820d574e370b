#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenelogic/catalog.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"
#include "scenelogic/rng.hpp"
#include "scenelogic/scene.hpp"
#include "scenelogic/value.hpp"

namespace scenelogic {

enum class Mode { strict, permissive };

enum class Failure : std::uint8_t { none, type_mismatch, unique_cardinality };

std::string_view failure_name(Failure f);

struct StepRecord {
  std::size_t node = 0;  // post-order index in the program
  std::string token;
  std::vector<Value> inputs;
  std::optional<Value> output;  // nullopt marks the failing step

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Outcome {
  std::optional<Value> answer;  // nullopt is the ERROR sentinel
  bool error = false;
  bool fallback_used = false;
  Failure failure = Failure::none;
  std::vector<StepRecord> trace;
  std::optional<std::uint64_t> seed;  // permissive runs record their seed
  std::string rng;                    // generator algorithm when seed is set

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct ExecOptions {
  Mode mode = Mode::strict;
  std::optional<std::uint64_t> seed;  // required for permissive mode
  bool record_trace = true;
  Typing typing = Typing::refined;
};

// Per-scene lookup tables used by the modules: entry codes per object,
// members of every (attribute, extended entry) and relation sets per anchor.
// Keeps a pointer to the profile, which must outlive the index.
class SceneIndex {
 public:
  // Throws SceneError if the scene violates the profile.
  SceneIndex(const Scene& scene, const DomainProfile& profile);

  const DomainProfile& profile() const { return *profile_; }
  std::size_t object_count() const { return count_; }
  ObjectSet all() const { return ObjectSet::first(count_); }

  std::uint16_t entry(ObjectId object, std::size_t attribute) const {
    return entries_[object * n_attr_ + attribute];
  }
  ObjectSet members(std::size_t attribute, std::size_t extended_entry) const {
    return members_[attribute][extended_entry];
  }
  ObjectSet related(std::size_t relation, ObjectId anchor) const {
    return related_[relation * count_ + anchor];
  }

 private:
  const DomainProfile* profile_;
  std::size_t count_ = 0;
  std::size_t n_attr_ = 0;
  std::vector<std::uint16_t> entries_;
  std::vector<std::vector<ObjectSet>> members_;
  std::vector<ObjectSet> related_;
};

// Stack-machine evaluator over the post-order program. Failures are folded
// into the Outcome's error flag; in permissive mode the answer is then drawn
// uniformly from the root module's output domain.
class Executor {
 public:
  explicit Executor(const DomainProfile& profile) : profile_(&profile) {}

  Outcome run(const Program& program, const SceneIndex& scene,
              const ExecOptions& options = {}) const;

 private:
  const DomainProfile* profile_;
};

Outcome execute(const Program& program, const Scene& scene,
                const DomainProfile& profile, Mode mode = Mode::strict,
                std::optional<std::uint64_t> seed = std::nullopt);

// Single module application. Throws ExecutionError on a type mismatch or a
// unique-cardinality violation.
Value apply_module(const TokenSpec& token, std::span<const Value> args,
                   const SceneIndex& scene, Typing typing = Typing::refined);
Value apply_module(const TokenSpec& token, std::span<const Value> args,
                   const Scene& scene, const DomainProfile& profile);

// Uniform draw over an answer type's domain: the attribute's leaf vocabulary,
// {0..count_max} or {false,true}. Throws ExecutionError("non-answer root")
// for scene and object types.
Value fallback_answer(ValueType type, const DomainProfile& profile, Rng& rng);

// {"steps":[{"node","token","inputs","output"}],"answer","error",
//  "fallback_used","failure","seed","rng"}; ERROR is the string "ERROR".
nlohmann::ordered_json outcome_to_json(const Outcome& outcome,
                                       const DomainProfile& profile);
Outcome outcome_from_json(const nlohmann::ordered_json& doc,
                          const DomainProfile& profile);

// Fixed-width step table for terminals.
std::string render_trace_table(const Outcome& outcome, const DomainProfile& profile);

}  // namespace scenelogic
