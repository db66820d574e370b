#include "scenelogic/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "scenelogic/compact.hpp"
#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

double ProfileBytes::mean_bytes() const {
  return scenes == 0 ? 0.0 : static_cast<double>(total_bytes) / static_cast<double>(scenes);
}

bool DatasetStats::within_budget() const {
  return std::all_of(profiles.begin(), profiles.end(),
                     [](const auto& p) { return p.second.max_bytes < kSceneByteBudget; });
}

void accumulate_stats(DatasetStats& stats, const Dataset& ds) {
  ProfileBytes& pb = stats.profiles[ds.profile->name()];
  auto add = [&](std::size_t bytes) {
    ++pb.scenes;
    pb.total_bytes += bytes;
    pb.max_bytes = std::max(pb.max_bytes, bytes);
  };
  const auto bin = ds.dir / dataset_files::kScenesBin;
  if (std::filesystem::exists(bin)) {
    for (const auto& rec : read_scene_archive(bin)) {
      decode_compact(rec.bytes, *ds.profile, rec.scene_id);  // reject corrupt records
      add(rec.bytes.size());
    }
  } else {
    for (const auto& s : ds.scenes) add(encode_compact(s, *ds.profile).size());
  }
  for (auto f : kQuestionFamilies) stats.families[f];
  for (const auto& item : ds.items) ++stats.families[item.family];
  stats.items += ds.items.size();
}

DatasetStats compute_stats(const std::vector<Dataset>& datasets) {
  DatasetStats stats;
  for (auto f : kQuestionFamilies) stats.families[f] = 0;
  for (const auto& ds : datasets) accumulate_stats(stats, ds);
  return stats;
}

ojson stats_to_json(const DatasetStats& stats) {
  ojson doc;
  ojson profiles = ojson::object();
  for (const auto& [name, pb] : stats.profiles) {
    ojson p;
    p["scenes"] = pb.scenes;
    p["mean_bytes"] = pb.mean_bytes();
    p["max_bytes"] = pb.max_bytes;
    p["total_bytes"] = pb.total_bytes;
    profiles[name] = p;
  }
  doc["profiles"] = profiles;
  ojson fam = ojson::object();
  for (const auto& [f, n] : stats.families) fam[std::string(question_family_name(f))] = n;
  doc["families"] = fam;
  doc["items"] = stats.items;
  doc["byte_budget"] = kSceneByteBudget;
  doc["within_budget"] = stats.within_budget();
  return doc;
}

std::string render_stats(const DatasetStats& stats) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "profile" << std::setw(9) << "scenes" << std::setw(12)
      << "mean bytes"
      << "max bytes\n";
  for (const auto& [name, pb] : stats.profiles)
    out << std::setw(12) << name << std::setw(9) << pb.scenes << std::setw(12) << std::fixed
        << std::setprecision(2) << pb.mean_bytes() << pb.max_bytes << '\n';
  out << "\nfamily              items\n";
  for (const auto& [f, n] : stats.families)
    out << std::setw(20) << question_family_name(f) << n << '\n';
  out << "total               " << stats.items << '\n';
  out << "budget: max < " << kSceneByteBudget << " bytes per scene: "
      << (stats.within_budget() ? "ok" : "EXCEEDED") << '\n';
  return out.str();
}

}  // namespace scenelogic
