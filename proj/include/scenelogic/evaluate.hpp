#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenelogic/dataset.hpp"
#include "scenelogic/executor.hpp"
#include "scenelogic/templates.hpp"
#include "scenelogic/value.hpp"

namespace scenelogic {

struct EvalOptions {
  Mode mode = Mode::strict;
  std::optional<std::uint64_t> seed;  // required for permissive mode
  bool use_stored_programs = false;   // execute stored programs instead of parsed ones
};

struct ItemResult {
  std::string id;
  QuestionFamily family = QuestionFamily::count;
  Value answer;
  std::optional<Value> predicted;  // nullopt is ERROR
  int reward = 0;
  bool error = false;
  bool fallback = false;
  bool program_match = false;      // parsed program equals the stored one
  std::optional<std::string> parse_error;
};

struct FamilyScore {
  std::size_t items = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy() const;
};

// Every rate is a ratio of integer counts, so metrics do not depend on item
// order. Rates over zero items are 0.
struct Metrics {
  std::map<QuestionFamily, FamilyScore> families;  // all five families
  std::size_t items = 0;
  std::size_t correct = 0;
  std::size_t program_matches = 0;
  std::size_t errors = 0;
  std::size_t fallbacks = 0;
  std::size_t scenes = 0;
  std::size_t scene_bytes = 0;

  double overall() const;
  double program_accuracy() const;
  double error_rate() const;
  double fallback_rate() const;
  double mean_bytes_per_scene() const;
};

struct Report {
  Metrics metrics;
  std::vector<ItemResult> items;
};

// Seed for item `id` in permissive runs: seed xor FNV-1a(id). Keyed on the id
// rather than the position so results survive reordering.
std::uint64_t item_seed(std::uint64_t seed, const std::string& id);

// Throws DatasetError for unresolvable scenes and ExecutionError when
// permissive mode lacks a seed.
Report evaluate(const Dataset& dataset, const EvalOptions& options);

Metrics aggregate(const std::vector<ItemResult>& items, std::size_t scenes,
                  std::size_t scene_bytes);

// {"metrics":{...},"items":[{"id","family","answer","predicted","reward",
// "error","fallback"}...]}
nlohmann::ordered_json report_to_json(const Report& report, const DomainProfile& profile);
nlohmann::ordered_json metrics_to_json(const Metrics& metrics);

}  // namespace scenelogic
