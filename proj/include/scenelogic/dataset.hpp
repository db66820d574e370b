#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenelogic/generator.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/scene.hpp"
#include "scenelogic/templates.hpp"

namespace scenelogic {

// A dataset directory holds:
//   profile.json     profile the scenes and programs refer to
//   templates.json   template pack used to generate the questions
//   scenes.json      {"profile", "scenes":[scene JSON...]}
//   scenes.bin       compact archive, see write_scene_archive
//   questions.jsonl  one QA record per line
namespace dataset_files {
inline constexpr const char* kProfile = "profile.json";
inline constexpr const char* kTemplates = "templates.json";
inline constexpr const char* kScenesJson = "scenes.json";
inline constexpr const char* kScenesBin = "scenes.bin";
inline constexpr const char* kQuestions = "questions.jsonl";
}  // namespace dataset_files

// {"id","scene_id","family","template_id","question","program":[tokens],"answer"}
nlohmann::ordered_json qa_to_json(const QAItem& item, const DomainProfile& profile);
QAItem qa_from_json(const nlohmann::ordered_json& doc, const DomainProfile& profile,
                    const std::shared_ptr<const Catalog>& catalog);

// Streams a dataset to disk scene by scene.
class DatasetWriter {
 public:
  // Creates `dir` if needed. Throws DatasetError on I/O failure.
  DatasetWriter(const std::filesystem::path& dir, const DomainProfile& profile,
                std::string_view profile_source, std::string_view templates_source);
  ~DatasetWriter();

  void write(const SceneQuestions& sq);
  // Finalizes the files; called by the destructor if omitted.
  void close();

  std::size_t scenes() const { return scenes_; }
  std::size_t items() const { return items_; }

 private:
  const DomainProfile* profile_;
  std::filesystem::path dir_;
  std::ofstream json_;
  std::ofstream bin_;
  std::ofstream qa_;
  std::size_t scenes_ = 0;
  std::size_t items_ = 0;
  bool closed_ = false;
};

struct Dataset {
  std::filesystem::path dir;
  std::shared_ptr<const DomainProfile> profile;
  std::shared_ptr<const Catalog> catalog;
  std::shared_ptr<const TemplatePack> pack;  // null if templates.json is absent
  std::vector<Scene> scenes;
  std::map<std::string, std::size_t> scene_by_id;
  std::vector<QAItem> items;

  // Throws DatasetError for unknown scene ids.
  const Scene& scene(const std::string& scene_id) const;
};

// Throws DatasetError on missing files, malformed records and items whose
// scene is not in scenes.json.
Dataset load_dataset(const std::filesystem::path& dir);

// Compact archive: "SLC1", u32 LE scene count, then per scene a u16 LE id
// length, the id bytes, a u16 LE record length and the compact record.
std::vector<std::uint8_t> encode_scene_archive(const std::vector<Scene>& scenes,
                                               const DomainProfile& profile);
struct ArchiveRecord {
  std::string scene_id;
  std::vector<std::uint8_t> bytes;
};
std::vector<ArchiveRecord> read_scene_archive(const std::filesystem::path& path);
std::vector<ArchiveRecord> parse_scene_archive(std::span<const std::uint8_t> data);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace scenelogic
