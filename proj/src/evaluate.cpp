#include "scenelogic/evaluate.hpp"

#include "scenelogic/compact.hpp"
#include "scenelogic/error.hpp"
#include "scenelogic/question_parser.hpp"
#include "scenelogic/reward.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

std::optional<double> FamilyScore::accuracy() const {
  if (items == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(items);
}

namespace {
double ratio(std::size_t a, std::size_t b) {
  return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}
}  // namespace

double Metrics::overall() const { return ratio(correct, items); }
double Metrics::program_accuracy() const { return ratio(program_matches, items); }
double Metrics::error_rate() const { return ratio(errors, items); }
double Metrics::fallback_rate() const { return ratio(fallbacks, items); }
double Metrics::mean_bytes_per_scene() const { return ratio(scene_bytes, scenes); }

std::uint64_t item_seed(std::uint64_t seed, const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return derive_seed(seed, h);
}

Metrics aggregate(const std::vector<ItemResult>& items, std::size_t scenes,
                  std::size_t scene_bytes) {
  Metrics m;
  for (auto f : kQuestionFamilies) m.families[f];
  for (const auto& r : items) {
    auto& fs = m.families[r.family];
    ++fs.items;
    fs.correct += r.reward;
    ++m.items;
    m.correct += r.reward;
    m.program_matches += r.program_match ? 1 : 0;
    m.errors += r.error ? 1 : 0;
    m.fallbacks += r.fallback ? 1 : 0;
  }
  m.scenes = scenes;
  m.scene_bytes = scene_bytes;
  return m;
}

Report evaluate(const Dataset& ds, const EvalOptions& options) {
  if (options.mode == Mode::permissive && !options.seed)
    throw ExecutionError("permissive mode needs a seed");
  const DomainProfile& profile = *ds.profile;
  std::optional<QuestionParser> parser;
  if (ds.pack) parser.emplace(*ds.pack, profile);
  if (!parser && !options.use_stored_programs)
    throw DatasetError("dataset has no templates.json; use stored programs");

  std::vector<std::optional<SceneIndex>> indexes(ds.scenes.size());
  const Executor exec(profile);
  Report report;
  report.items.reserve(ds.items.size());
  for (const auto& item : ds.items) {
    ItemResult r;
    r.id = item.id;
    r.family = item.family;
    r.answer = item.answer;

    std::optional<Program> parsed;
    if (parser) {
      try {
        parsed = parser->parse(item.question).program;
        r.program_match = *parsed == item.program;
      } catch (const QuestionParseError& e) {
        r.parse_error = e.what();
      }
    }

    auto found = ds.scene_by_id.find(item.scene_id);
    if (found == ds.scene_by_id.end())
      throw DatasetError("unresolvable scene reference " + item.scene_id);
    const std::size_t si = found->second;
    if (!indexes[si]) indexes[si].emplace(ds.scenes[si], profile);

    const Program* program = options.use_stored_programs ? &item.program
                             : parsed                     ? &*parsed
                                                          : nullptr;
    if (program) {
      ExecOptions eo;
      eo.mode = options.mode;
      eo.record_trace = false;
      if (options.mode == Mode::permissive) eo.seed = item_seed(*options.seed, item.id);
      Outcome o = exec.run(*program, *indexes[si], eo);
      r.predicted = o.answer;
      r.error = o.error;
      r.fallback = o.fallback_used;
    } else {
      r.error = true;  // unparsed question: ERROR
    }
    r.reward = answer_reward(r.predicted, r.answer);
    report.items.push_back(std::move(r));
  }

  std::size_t bytes = 0;
  for (const auto& s : ds.scenes) bytes += compact_size(s.objects.size());
  report.metrics = aggregate(report.items, ds.scenes.size(), bytes);
  return report;
}

ojson metrics_to_json(const Metrics& m) {
  ojson doc;
  ojson fam = ojson::object();
  for (const auto& [f, s] : m.families) {
    ojson e;
    e["items"] = s.items;
    e["correct"] = s.correct;
    e["accuracy"] = s.accuracy() ? ojson(*s.accuracy()) : ojson(nullptr);
    fam[std::string(question_family_name(f))] = e;
  }
  doc["families"] = fam;
  doc["items"] = m.items;
  doc["correct"] = m.correct;
  doc["overall"] = m.overall();
  doc["program_accuracy"] = m.program_accuracy();
  doc["error_rate"] = m.error_rate();
  doc["fallback_rate"] = m.fallback_rate();
  doc["scenes"] = m.scenes;
  doc["mean_bytes_per_scene"] = m.mean_bytes_per_scene();
  return doc;
}

ojson report_to_json(const Report& report, const DomainProfile& profile) {
  ojson doc;
  doc["metrics"] = metrics_to_json(report.metrics);
  ojson items = ojson::array();
  for (const auto& r : report.items) {
    ojson e;
    e["id"] = r.id;
    e["family"] = question_family_name(r.family);
    e["answer"] = answer_to_json(r.answer, profile);
    e["predicted"] = r.predicted ? answer_to_json(*r.predicted, profile) : ojson("ERROR");
    e["reward"] = r.reward;
    e["error"] = r.error;
    e["fallback"] = r.fallback;
    e["program_match"] = r.program_match;
    if (r.parse_error) e["parse_error"] = *r.parse_error;
    items.push_back(std::move(e));
  }
  doc["items"] = items;
  return doc;
}

}  // namespace scenelogic
