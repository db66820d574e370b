#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenelogic/dataset.hpp"
#include "scenelogic/templates.hpp"

namespace scenelogic {

// Every stored scene record must stay strictly below this many bytes.
inline constexpr std::size_t kSceneByteBudget = 100;

struct ProfileBytes {
  std::size_t scenes = 0;
  std::size_t total_bytes = 0;
  std::size_t max_bytes = 0;
  double mean_bytes() const;
};

struct DatasetStats {
  std::map<std::string, ProfileBytes> profiles;  // keyed by profile name
  std::map<QuestionFamily, std::size_t> families;
  std::size_t items = 0;

  bool within_budget() const;
};

// Byte counts come from scenes.bin when present (the stored records), else
// from re-encoding scenes.json. Several datasets may be combined.
void accumulate_stats(DatasetStats& stats, const Dataset& dataset);
DatasetStats compute_stats(const std::vector<Dataset>& datasets);

nlohmann::ordered_json stats_to_json(const DatasetStats& stats);
std::string render_stats(const DatasetStats& stats);

}  // namespace scenelogic
