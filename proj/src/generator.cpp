#include "scenelogic/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scenelogic/error.hpp"

namespace scenelogic {

Scene sample_scene(const DomainProfile& profile, Rng& rng, std::size_t min_objects,
                   std::size_t max_objects, std::string scene_id) {
  if (min_objects < 1 || min_objects > max_objects || max_objects > profile.count_max())
    throw GenerationError("object range must satisfy 1 <= min <= max <= count_max");
  Scene scene;
  scene.scene_id = std::move(scene_id);
  scene.profile_name = profile.name();
  const std::size_t n = min_objects + rng.index(max_objects - min_objects + 1);
  const auto& bounds = profile.bounds();
  for (std::size_t i = 0; i < n; ++i) {
    ObjectRecord o;
    o.id = static_cast<ObjectId>(i);
    for (const auto& a : profile.attributes())
      o.entries[a.name] = a.vocabulary[rng.index(a.vocabulary.size())];
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      o.position.assign(bounds.size(), 0.0);
      for (std::size_t k = 0; k < bounds.size(); ++k)
        o.position[k] = rng.uniform(bounds[k].lo, bounds[k].hi);
      placed = std::all_of(scene.objects.begin(), scene.objects.end(), [&](const ObjectRecord& p) {
        double d = 0.0;
        for (std::size_t k = 0; k < bounds.size(); ++k)
          d = std::max(d, std::abs(p.position[k] - o.position[k]) / bounds[k].width());
        return d >= kMinSeparation;
      });
    }
    if (!placed) throw GenerationError("placement budget exhausted (overcrowded bounds)");
    scene.objects.push_back(std::move(o));
  }
  return scene;
}

Scene sample_scene(const DomainProfile& profile, Rng& rng, std::string scene_id) {
  return sample_scene(profile, rng, profile.min_objects(), profile.max_objects(),
                      std::move(scene_id));
}

namespace {

std::vector<std::size_t> parents_of(const Program& p) {
  std::vector<std::size_t> parent(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (auto c : p.children(i)) parent[c] = i;
  return parent;
}

}  // namespace

std::optional<std::string> degeneracy(const Program& program, const Outcome& outcome) {
  if (outcome.error) return "execution error";
  const auto parent = parents_of(program);
  for (std::size_t i = 0; i < program.size(); ++i) {
    const TokenSpec& t = program.token(i);
    const auto& out = outcome.trace.at(i).output;
    if (t.op == Op::filter && std::get<SceneVal>(*out).members.empty()) {
      std::size_t up = parent[i];
      while (up < program.size() && program.token(up).op == Op::filter) up = parent[up];
      if (up >= program.size() || program.token(up).op != Op::exist) return "empty filter";
    }
    if (t.arity() == 2) {
      std::optional<ObjectId> objects[2];
      std::size_t k = 0;
      for (auto c : program.children(i)) {
        std::size_t node = c;
        while (program.token(node).arity() == 1 && program.token(node).op != Op::unique)
          node = *program.children(node).begin();
        if (program.token(node).op == Op::unique)
          objects[k] = std::get<ObjectVal>(*outcome.trace.at(node).output).id;
        ++k;
      }
      if (objects[0] && objects[1] && *objects[0] == *objects[1]) return "self comparison";
    }
  }
  return std::nullopt;
}

QuestionGenerator::QuestionGenerator(const DomainProfile& profile, TemplatePack pack)
    : profile_(&profile), pack_(std::move(pack)), catalog_(Catalog::build(profile)) {
  if (pack_.profile_name != profile.name())
    throw GenerationError("template pack targets profile " + pack_.profile_name);
  for (auto f : kQuestionFamilies) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pack_.templates.size(); ++i)
      if (pack_.templates[i].family == f) members.push_back(i);
    if (members.empty()) continue;
    families_.push_back(f);
    by_family_.push_back(std::move(members));
  }
  if (families_.empty()) throw GenerationError("template pack is empty");
}

Bindings QuestionGenerator::sample_bindings(const Template& t, const Scene& scene,
                                            Rng& rng) const {
  const DomainProfile& profile = *profile_;
  Bindings b;
  // Guided draws describe a real object, which keeps unique() satisfiable.
  const bool guided = rng.chance(3, 4);
  std::map<std::string, const ObjectRecord*> anchor;
  for (const auto& s : t.slots) {
    if (s.is_relation()) {
      b[s.name] = profile.relations()[rng.index(profile.relations().size())].name;
      continue;
    }
    if (s.optional && rng.coin()) {
      b[s.name] = std::nullopt;
      continue;
    }
    const Attribute& attr = profile.attribute(s.attribute);
    if (!guided || scene.objects.empty()) {
      b[s.name] = attr.extended[rng.index(attr.extended.size())];
      continue;
    }
    auto& obj = anchor[s.group];
    if (!obj) obj = &scene.objects[rng.index(scene.objects.size())];
    const std::size_t leaf = *attr.find(obj->entries.at(attr.name));
    std::vector<std::size_t> covering;
    for (std::size_t e = 0; e < attr.extended.size(); ++e)
      if ((attr.leaf_masks[e] >> leaf) & 1u) covering.push_back(e);
    b[s.name] = attr.extended[covering[rng.index(covering.size())]];
  }
  return b;
}

std::optional<QAItem> QuestionGenerator::instantiate(const Template& t, const Scene& scene,
                                                     Rng& rng, std::size_t attempts) const {
  const SceneIndex index(scene, *profile_);
  const Executor exec(*profile_);
  for (std::size_t a = 0; a < attempts; ++a) {
    Bindings b = sample_bindings(t, scene, rng);
    if (!satisfies_constraints(t, b, *profile_)) continue;
    Program program = bind_template(t, b, catalog_);
    Outcome outcome = exec.run(program, index);
    if (degeneracy(program, outcome)) continue;
    const std::size_t pattern = rng.index(t.patterns.size());
    QAItem item;
    item.scene_id = scene.scene_id;
    item.family = t.family;
    item.template_id = t.template_id;
    item.question = render_text(t, b, pack_, *profile_, pattern);
    item.program = std::move(program);
    item.answer = *outcome.answer;
    return item;
  }
  return std::nullopt;
}

QAItem QuestionGenerator::sample_item(const Scene& scene, Rng& rng) const {
  const std::size_t f = rng.index(families_.size());
  const auto& members = by_family_[f];
  for (std::size_t a = 0; a < kTemplateAttempts; ++a) {
    const Template& t = pack_.templates[members[rng.index(members.size())]];
    if (auto item = instantiate(t, scene, rng)) return std::move(*item);
  }
  throw GenerationError("no " + std::string(question_family_name(families_[f])) +
                        " question could be instantiated on " + scene.scene_id);
}

std::optional<QAItem> instantiate(const Template& t, const TemplatePack& pack,
                                  const Scene& scene, const DomainProfile& profile,
                                  Rng& rng) {
  return QuestionGenerator(profile, pack).instantiate(t, scene, rng);
}

std::string scene_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%06zu", index);
  return buf;
}

void generate_dataset(const DomainProfile& profile, const TemplatePack& pack,
                      std::size_t n_scenes, std::size_t q_per_scene, std::uint64_t seed,
                      const std::function<void(SceneQuestions&&)>& sink) {
  const QuestionGenerator gen(profile, pack);
  for (std::size_t i = 0; i < n_scenes; ++i) {
    Rng rng(derive_seed(seed, i));
    // A scene that cannot host a drawn family is replaced by a fresh draw from
    // the same stream, so family frequencies stay uniform.
    for (std::size_t attempt = 0;; ++attempt) {
      SceneQuestions sq;
      sq.scene = sample_scene(profile, rng, scene_name(i));
      try {
        for (std::size_t k = 0; k < q_per_scene; ++k) {
          QAItem item = gen.sample_item(sq.scene, rng);
          item.id = sq.scene.scene_id + "_q" + std::to_string(k);
          sq.items.push_back(std::move(item));
        }
      } catch (const GenerationError&) {
        if (attempt + 1 >= kSceneAttempts) throw;
        continue;
      }
      sink(std::move(sq));
      break;
    }
  }
}

std::vector<SceneQuestions> generate_dataset(const DomainProfile& profile,
                                             const TemplatePack& pack, std::size_t n_scenes,
                                             std::size_t q_per_scene, std::uint64_t seed) {
  std::vector<SceneQuestions> out;
  generate_dataset(profile, pack, n_scenes, q_per_scene, seed,
                   [&](SceneQuestions&& sq) { out.push_back(std::move(sq)); });
  return out;
}

}  // namespace scenelogic
