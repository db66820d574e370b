#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenelogic/builtin.hpp"
#include "scenelogic/catalog.hpp"
#include "scenelogic/dataset.hpp"
#include "scenelogic/error.hpp"
#include "scenelogic/evaluate.hpp"
#include "scenelogic/executor.hpp"
#include "scenelogic/generator.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"
#include "scenelogic/question_parser.hpp"
#include "scenelogic/stats.hpp"
#include "scenelogic/type_check.hpp"

namespace scenelogic::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Profile source text: builtin JSON or file contents.
std::string profile_source(const std::string& name_or_path) {
  if (auto src = builtin_profile_source(name_or_path)) return std::string(*src);
  return read_text_file(name_or_path);
}

std::string templates_source(const std::string& name_or_path) {
  if (auto src = builtin_templates_source(name_or_path)) return std::string(*src);
  return read_text_file(name_or_path);
}

Mode parse_mode(const std::string& m) {
  return m == "permissive" ? Mode::permissive : Mode::strict;
}

struct GenerateArgs {
  std::string profile = "clevr";
  std::string templates;
  std::size_t scenes = 100;
  std::size_t per_scene = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const std::string psrc = profile_source(a.profile);
  const DomainProfile profile = load_profile(psrc);
  const std::string tsrc = templates_source(a.templates.empty() ? profile.name() : a.templates);
  const TemplatePack pack = load_template_pack(tsrc, profile);
  DatasetWriter writer(a.out, profile, psrc, tsrc);
  std::map<QuestionFamily, std::size_t> hist;
  generate_dataset(profile, pack, a.scenes, a.per_scene, a.seed, [&](SceneQuestions&& sq) {
    for (const auto& item : sq.items) ++hist[item.family];
    writer.write(sq);
  });
  writer.close();
  out << "wrote " << writer.scenes() << " scenes and " << writer.items() << " questions to "
      << a.out << '\n';
  for (auto f : kQuestionFamilies) out << "  " << question_family_name(f) << ": " << hist[f] << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string dataset;
  std::string mode = "strict";
  std::optional<std::uint64_t> seed;
  bool use_stored = false;
  std::string report;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Dataset ds = load_dataset(a.dataset);
  EvalOptions opts;
  opts.mode = parse_mode(a.mode);
  opts.seed = a.seed;
  if (opts.mode == Mode::permissive && !opts.seed) opts.seed = 0;
  opts.use_stored_programs = a.use_stored;
  const Report report = evaluate(ds, opts);
  const Metrics& m = report.metrics;
  out << "items: " << m.items << '\n';
  for (const auto& [f, s] : m.families) {
    out << "  " << question_family_name(f) << ": ";
    if (auto acc = s.accuracy())
      out << *acc << " (" << s.correct << "/" << s.items << ")\n";
    else
      out << "-\n";
  }
  out << "overall: " << m.overall() << '\n'
      << "program_accuracy: " << m.program_accuracy() << '\n'
      << "error_rate: " << m.error_rate() << '\n'
      << "fallback_rate: " << m.fallback_rate() << '\n'
      << "mean_bytes_per_scene: " << m.mean_bytes_per_scene() << '\n';
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f) throw DatasetError("cannot write " + a.report);
    f << report_to_json(report, *ds.profile).dump(2) << '\n';
  }
  return kExitOk;
}

struct TraceArgs {
  std::string program;
  std::string scene;
  std::string scene_id;
  std::string profile;
  std::string mode = "strict";
  std::optional<std::uint64_t> seed;
  std::string notation = "postfix";
  bool json = false;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
  ojson doc;
  try {
    doc = ojson::parse(read_text_file(a.scene));
  } catch (const ojson::exception& e) {
    throw SceneError(std::string("scene file is not valid JSON: ") + e.what());
  }
  ojson scene_doc = doc;
  if (doc.contains("scenes")) {
    const auto& list = doc.at("scenes");
    auto it = std::find_if(list.begin(), list.end(), [&](const ojson& s) {
      return a.scene_id.empty() || s.value("scene_id", "") == a.scene_id;
    });
    if (it == list.end()) throw SceneError("scene " + a.scene_id + " not found");
    if (a.scene_id.empty() && list.size() > 1)
      throw SceneError("scene file holds several scenes; pass --scene-id");
    scene_doc = *it;
  }
  std::string pname = a.profile;
  if (pname.empty()) pname = scene_doc.value("profile", doc.value("profile", "clevr"));
  const DomainProfile profile = resolve_profile(pname);
  const Scene scene = scene_from_json(scene_doc, profile);
  const auto catalog = Catalog::build(profile);
  const Program program = parse_program(
      a.program, catalog, a.notation == "prefix" ? Notation::prefix : Notation::postfix);
  const Mode mode = parse_mode(a.mode);
  std::optional<std::uint64_t> seed = a.seed;
  if (mode == Mode::permissive && !seed) seed = 0;
  const Outcome o = execute(program, scene, profile, mode, seed);
  if (a.json)
    out << outcome_to_json(o, profile).dump(2) << '\n';
  else
    out << render_trace_table(o, profile);
  return o.error ? kExitReasoning : kExitOk;
}

struct TypecheckArgs {
  std::string program;
  std::string profile = "clevr";
  std::string notation = "postfix";
  bool coarse = false;
};

int cmd_typecheck(const TypecheckArgs& a, std::ostream& out) {
  const DomainProfile profile = resolve_profile(a.profile);
  const auto catalog = Catalog::build(profile);
  const Program program = parse_program(
      a.program, catalog, a.notation == "prefix" ? Notation::prefix : Notation::postfix);
  const auto report =
      type_check(program, profile, a.coarse ? Typing::coarse : Typing::refined);
  if (report.ok) {
    out << "ok: " << catalog->type_name(*report.result_type) << '\n';
    return kExitOk;
  }
  for (const auto& m : report.mismatches)
    out << "mismatch at " << path_to_string(m.path) << " (" << program.token(m.node).name
        << "): expected " << catalog->type_name(m.expected) << ", found "
        << catalog->type_name(m.found) << '\n';
  return kExitReasoning;
}

int cmd_stats(const std::vector<std::string>& dirs, bool json, std::ostream& out) {
  std::vector<Dataset> sets;
  for (const auto& d : dirs) sets.push_back(load_dataset(d));
  const DatasetStats stats = compute_stats(sets);
  if (json)
    out << stats_to_json(stats).dump(2) << '\n';
  else
    out << render_stats(stats);
  return stats.within_budget() ? kExitOk : kExitReasoning;
}

int cmd_catalog(const std::string& profile_name, bool json, std::ostream& out) {
  const DomainProfile profile = resolve_profile(profile_name);
  const auto cat = Catalog::build(profile);
  if (json) {
    out << cat->to_json().dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& t : cat->tokens()) {
    std::string inputs;
    for (const auto& in : t.inputs) inputs += (inputs.empty() ? "" : ", ") + cat->type_name(in);
    out << t.name << " : (" << inputs << ") -> " << cat->type_name(t.output) << "  ["
        << family_name(t.family) << "]\n";
  }
  return kExitOk;
}

int cmd_parse(const std::string& question, const std::string& profile_name,
              const std::string& templates, std::ostream& out) {
  const DomainProfile profile = resolve_profile(profile_name);
  const TemplatePack pack =
      resolve_template_pack(templates.empty() ? profile.name() : templates, profile);
  const ParsedQuestion q = QuestionParser(pack, profile).parse(question);
  out << q.template_id << ": " << q.program.to_text() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typed symbolic program executor over structural scenes"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate scenes and question/program/answer items");
  g->add_option("--profile", gen.profile, "Builtin profile name or profile JSON path");
  g->add_option("--templates", gen.templates, "Builtin pack name or template JSON path");
  g->add_option("--scenes", gen.scenes, "Number of scenes");
  g->add_option("--per-scene", gen.per_scene, "Questions per scene");
  g->add_option("--seed", gen.seed, "Generation seed");
  g->add_option("--out", gen.out, "Output directory")->required();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Answer every question and report accuracy");
  e->add_option("--dataset", ev.dataset, "Dataset directory")->required();
  e->add_option("--mode", ev.mode, "strict or permissive")
      ->check(CLI::IsMember({"strict", "permissive"}));
  e->add_option("--seed", ev.seed, "Seed for permissive fallbacks");
  e->add_flag("--use-stored-programs", ev.use_stored, "Execute stored programs");
  e->add_option("--report", ev.report, "Write the JSON report here");

  TraceArgs tr;
  auto* t = app.add_subcommand("trace", "Execute one program and print its trace");
  t->add_option("--program", tr.program, "Program tokens")->required();
  t->add_option("--scene", tr.scene, "Scene JSON file (single scene or scenes.json)")
      ->required();
  t->add_option("--scene-id", tr.scene_id, "Scene to pick from a multi-scene file");
  t->add_option("--profile", tr.profile, "Profile; defaults to the scene's profile field");
  t->add_option("--mode", tr.mode, "strict or permissive")
      ->check(CLI::IsMember({"strict", "permissive"}));
  t->add_option("--seed", tr.seed, "Seed for permissive fallbacks");
  t->add_option("--notation", tr.notation, "postfix or prefix")
      ->check(CLI::IsMember({"postfix", "prefix"}));
  t->add_flag("--json", tr.json, "Emit trace JSON");

  TypecheckArgs tc;
  auto* c = app.add_subcommand("typecheck", "Type-check a program");
  c->add_option("--program", tc.program, "Program tokens")->required();
  c->add_option("--profile", tc.profile, "Builtin profile name or profile JSON path");
  c->add_option("--notation", tc.notation, "postfix or prefix")
      ->check(CLI::IsMember({"postfix", "prefix"}));
  c->add_flag("--coarse", tc.coarse, "Ignore attribute refinements on entry types");

  std::vector<std::string> stat_dirs;
  bool stat_json = false;
  auto* s = app.add_subcommand("stats", "Compact-encoding bytes and family histogram");
  s->add_option("--dataset", stat_dirs, "Dataset directory (repeatable)")->required();
  s->add_flag("--json", stat_json, "Emit JSON");

  std::string cat_profile = "clevr";
  bool cat_json = false;
  auto* k = app.add_subcommand("catalog", "List the module tokens of a profile");
  k->add_option("--profile", cat_profile, "Builtin profile name or profile JSON path");
  k->add_flag("--json", cat_json, "Emit JSON");

  std::string question, q_profile = "clevr", q_templates;
  auto* p = app.add_subcommand("parse", "Parse a question into a program");
  p->add_option("--question", question, "Question text")->required();
  p->add_option("--profile", q_profile, "Builtin profile name or profile JSON path");
  p->add_option("--templates", q_templates, "Builtin pack name or template JSON path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, out);
    if (e->parsed()) return cmd_eval(ev, out);
    if (t->parsed()) return cmd_trace(tr, out);
    if (c->parsed()) return cmd_typecheck(tc, out);
    if (s->parsed()) return cmd_stats(stat_dirs, stat_json, out);
    if (k->parsed()) return cmd_catalog(cat_profile, cat_json, out);
    if (p->parsed()) return cmd_parse(question, q_profile, q_templates, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::ordered_json::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace scenelogic::cli
