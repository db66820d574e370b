#include "scenelogic/dataset.hpp"

#include <sstream>

#include "scenelogic/compact.hpp"
#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr char kArchiveMagic[4] = {'S', 'L', 'C', '1'};

void put_u16(std::vector<std::uint8_t>& out, std::size_t v) {
  if (v > 0xFFFF) throw DatasetError("archive field exceeds 65535 bytes");
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::vector<std::uint8_t> archive_entry(const Scene& scene, const DomainProfile& profile) {
  std::vector<std::uint8_t> out;
  put_u16(out, scene.scene_id.size());
  out.insert(out.end(), scene.scene_id.begin(), scene.scene_id.end());
  const auto rec = encode_compact(scene, profile);
  put_u16(out, rec.size());
  out.insert(out.end(), rec.begin(), rec.end());
  return out;
}

std::ofstream open_out(const fs::path& p, bool binary) {
  std::ofstream f(p, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!f) throw DatasetError("cannot write " + p.string());
  return f;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson qa_to_json(const QAItem& item, const DomainProfile& profile) {
  ojson doc;
  doc["id"] = item.id;
  doc["scene_id"] = item.scene_id;
  doc["family"] = question_family_name(item.family);
  doc["template_id"] = item.template_id;
  doc["question"] = item.question;
  doc["program"] = token_names(item.program);
  doc["answer"] = answer_to_json(item.answer, profile);
  return doc;
}

QAItem qa_from_json(const ojson& doc, const DomainProfile& profile,
                    const std::shared_ptr<const Catalog>& catalog) {
  try {
    QAItem item;
    item.id = doc.at("id").get<std::string>();
    item.scene_id = doc.at("scene_id").get<std::string>();
    const auto fam = doc.at("family").get<std::string>();
    auto f = parse_question_family(fam);
    if (!f) throw DatasetError("unknown family '" + fam + "' in item " + item.id);
    item.family = *f;
    item.template_id = doc.value("template_id", "");
    item.question = doc.at("question").get<std::string>();
    ojson prog;
    prog["tokens"] = doc.at("program");
    item.program = program_from_json(prog, catalog);
    item.answer = answer_from_json(doc.at("answer"), profile);
    return item;
  } catch (const ojson::exception& e) {
    throw DatasetError(std::string("malformed QA record: ") + e.what());
  } catch (const ProgramError& e) {
    throw DatasetError(std::string("QA record has a bad program: ") + e.what());
  } catch (const ExecutionError& e) {
    throw DatasetError(std::string("QA record has a bad answer: ") + e.what());
  }
}

DatasetWriter::DatasetWriter(const fs::path& dir, const DomainProfile& profile,
                             std::string_view profile_source, std::string_view templates_source)
    : profile_(&profile), dir_(dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DatasetError("cannot create " + dir.string() + ": " + ec.message());
  open_out(dir / dataset_files::kProfile, false) << profile_source;
  open_out(dir / dataset_files::kTemplates, false) << templates_source;
  json_ = open_out(dir / dataset_files::kScenesJson, false);
  bin_ = open_out(dir / dataset_files::kScenesBin, true);
  qa_ = open_out(dir / dataset_files::kQuestions, false);
  json_ << "{\"profile\":" << ojson(profile.name()).dump() << ",\"scenes\":[";
  bin_.write(kArchiveMagic, 4);
  const char zero[4] = {0, 0, 0, 0};
  bin_.write(zero, 4);  // count, patched in close()
}

DatasetWriter::~DatasetWriter() {
  try {
    close();
  } catch (...) {
  }
}

void DatasetWriter::write(const SceneQuestions& sq) {
  if (closed_) throw DatasetError("dataset writer is closed");
  json_ << (scenes_ ? ",\n" : "\n") << scene_to_json(sq.scene, *profile_).dump();
  const auto entry = archive_entry(sq.scene, *profile_);
  bin_.write(reinterpret_cast<const char*>(entry.data()),
             static_cast<std::streamsize>(entry.size()));
  for (const auto& item : sq.items) {
    qa_ << qa_to_json(item, *profile_).dump() << '\n';
    ++items_;
  }
  ++scenes_;
  if (!json_ || !bin_ || !qa_) throw DatasetError("write failed in " + dir_.string());
}

void DatasetWriter::close() {
  if (closed_) return;
  closed_ = true;
  json_ << (scenes_ ? "\n]}\n" : "]}\n");
  std::vector<std::uint8_t> count;
  put_u32(count, static_cast<std::uint32_t>(scenes_));
  bin_.seekp(4);
  bin_.write(reinterpret_cast<const char*>(count.data()), 4);
  json_.close();
  bin_.close();
  qa_.close();
  if (json_.fail() || bin_.fail() || qa_.fail())
    throw DatasetError("could not finalize " + dir_.string());
}

const Scene& Dataset::scene(const std::string& scene_id) const {
  auto it = scene_by_id.find(scene_id);
  if (it == scene_by_id.end()) throw DatasetError("unresolvable scene reference " + scene_id);
  return scenes[it->second];
}

Dataset load_dataset(const fs::path& dir) {
  Dataset ds;
  ds.dir = dir;
  try {
    ds.profile = std::make_shared<const DomainProfile>(
        load_profile(read_text_file(dir / dataset_files::kProfile)));
  } catch (const ProfileError& e) {
    throw DatasetError(std::string("dataset profile: ") + e.what());
  }
  const DomainProfile& profile = *ds.profile;
  ds.catalog = Catalog::build(profile);
  if (fs::exists(dir / dataset_files::kTemplates)) {
    try {
      ds.pack = std::make_shared<const TemplatePack>(
          load_template_pack(read_text_file(dir / dataset_files::kTemplates), profile));
    } catch (const TemplateError& e) {
      throw DatasetError(std::string("dataset templates: ") + e.what());
    }
  }

  try {
    const auto doc = ojson::parse(read_text_file(dir / dataset_files::kScenesJson));
    for (const auto& s : doc.at("scenes")) {
      ds.scenes.push_back(scene_from_json(s, profile));
      if (!ds.scene_by_id.emplace(ds.scenes.back().scene_id, ds.scenes.size() - 1).second)
        throw DatasetError("duplicate scene id " + ds.scenes.back().scene_id);
    }
  } catch (const ojson::exception& e) {
    throw DatasetError(std::string("malformed scenes.json: ") + e.what());
  } catch (const SceneError& e) {
    throw DatasetError(std::string("scenes.json: ") + e.what());
  }

  std::istringstream lines(read_text_file(dir / dataset_files::kQuestions));
  std::size_t lineno = 0;
  for (std::string line; std::getline(lines, line);) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson rec;
    try {
      rec = ojson::parse(line);
    } catch (const ojson::exception& e) {
      throw DatasetError("questions.jsonl line " + std::to_string(lineno) + ": " + e.what());
    }
    QAItem item = qa_from_json(rec, profile, ds.catalog);
    ds.scene(item.scene_id);
    ds.items.push_back(std::move(item));
  }
  return ds;
}

std::vector<std::uint8_t> encode_scene_archive(const std::vector<Scene>& scenes,
                                               const DomainProfile& profile) {
  std::vector<std::uint8_t> out(kArchiveMagic, kArchiveMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(scenes.size()));
  for (const auto& s : scenes) {
    const auto e = archive_entry(s, profile);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

std::vector<ArchiveRecord> parse_scene_archive(std::span<const std::uint8_t> data) {
  std::size_t pos = 0;
  auto need = [&](std::size_t n) {
    if (data.size() - pos < n) throw DatasetError("scene archive is truncated");
  };
  auto u16 = [&] {
    need(2);
    std::size_t v = data[pos] | (static_cast<std::size_t>(data[pos + 1]) << 8);
    pos += 2;
    return v;
  };
  need(8);
  if (!std::equal(kArchiveMagic, kArchiveMagic + 4, data.begin()))
    throw DatasetError("not a scene archive");
  std::uint32_t count = 0;
  for (int k = 0; k < 4; ++k) count |= static_cast<std::uint32_t>(data[4 + k]) << (8 * k);
  pos = 8;
  std::vector<ArchiveRecord> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    ArchiveRecord r;
    const auto idlen = u16();
    need(idlen);
    r.scene_id.assign(data.begin() + pos, data.begin() + pos + idlen);
    pos += idlen;
    const auto len = u16();
    need(len);
    r.bytes.assign(data.begin() + pos, data.begin() + pos + len);
    pos += len;
    out.push_back(std::move(r));
  }
  if (pos != data.size()) throw DatasetError("trailing bytes after scene archive");
  return out;
}

std::vector<ArchiveRecord> read_scene_archive(const fs::path& path) {
  const std::string raw = read_text_file(path);
  std::vector<std::uint8_t> data(raw.begin(), raw.end());
  return parse_scene_archive(data);
}

}  // namespace scenelogic
