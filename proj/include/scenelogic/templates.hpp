#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenelogic/catalog.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"

namespace scenelogic {

enum class QuestionFamily : std::uint8_t {
  count,
  exist,
  compare_number,
  compare_attribute,
  query_attribute,
};

inline constexpr std::array<QuestionFamily, 5> kQuestionFamilies = {
    QuestionFamily::count, QuestionFamily::exist, QuestionFamily::compare_number,
    QuestionFamily::compare_attribute, QuestionFamily::query_attribute};

std::string_view question_family_name(QuestionFamily f);
std::optional<QuestionFamily> parse_question_family(std::string_view name);

struct SlotSpec {
  std::string name;
  std::string type;    // attribute name or "relation"
  int attribute = -1;  // index into the profile's attributes; -1 for relations
  bool optional = false;
  std::string group;  // slots of one group describe the same object

  bool is_relation() const { return attribute < 0; }
};

enum class ConstraintKind { distinct, null, not_leaf };

// distinct: the value tuples of `groups` must differ pairwise.
// null: every slot in `slots` is left unbound.
// not_leaf: every slot in `slots` is unbound or names an inner taxonomy node.
struct Constraint {
  ConstraintKind kind = ConstraintKind::distinct;
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> slots;
};

struct PatternPiece {
  std::string text;          // literal text (slot < 0)
  int slot = -1;             // index into Template::slots
  bool plural = false;       // <X:pl>
};

struct TextPattern {
  std::string source;
  std::vector<PatternPiece> pieces;
};

struct Template {
  std::string template_id;
  QuestionFamily family = QuestionFamily::count;
  std::vector<std::string> skeleton;  // postfix tokens with <X> placeholders
  std::vector<SlotSpec> slots;
  std::vector<TextPattern> patterns;
  std::vector<Constraint> constraints;

  std::optional<std::size_t> slot_index(std::string_view name) const;
};

// Surface forms. Nouns come from `noun_attribute`; an unbound noun slot reads
// as `thing` / `things`. Other attributes render as adjectives.
struct Lexicon {
  int noun_attribute = -1;
  std::string thing = "thing";
  std::string things = "things";
  std::map<std::string, std::string> plural;
  std::map<std::string, std::string> relation;
  std::map<std::string, std::string> adjective;

  std::string noun(const std::optional<std::string>& entry, bool plural_form) const;
  std::string adjective_for(const std::string& entry) const;
  std::string relation_phrase(const std::string& relation) const;
};

struct TemplatePack {
  std::string profile_name;
  Lexicon lexicon;
  std::vector<Template> templates;

  const Template* find(std::string_view template_id) const;
};

// Slot name -> bound entry or relation; nullopt leaves an optional slot empty.
using Bindings = std::map<std::string, std::optional<std::string>>;

// Parses {"profile","lexicon","templates":[...]} and validates every template
// against the profile: slot/pattern agreement, slot types, constraint names
// and type-correct skeletons. Throws TemplateError.
TemplatePack load_template_pack(std::string_view source, const DomainProfile& profile);
TemplatePack load_template_pack_file(const std::filesystem::path& path,
                                     const DomainProfile& profile);
// Builtin pack name ("clevr", "minecraft") or a file path.
TemplatePack resolve_template_pack(const std::string& name_or_path,
                                   const DomainProfile& profile);

// Throws TemplateError for missing slots, slots the template lacks, unbound
// required slots and values of the wrong type.
void check_bindings(const Template& t, const Bindings& bindings,
                    const DomainProfile& profile);

// Whether the bindings satisfy the template's constraints.
bool satisfies_constraints(const Template& t, const Bindings& bindings,
                           const DomainProfile& profile);

// Substitutes slots into the skeleton; filters over unbound slots drop out.
Program bind_template(const Template& t, const Bindings& bindings,
                      std::shared_ptr<const Catalog> catalog);

// Deterministic surface string for text_patterns[pattern_index].
std::string render_text(const Template& t, const Bindings& bindings,
                        const TemplatePack& pack, const DomainProfile& profile,
                        std::size_t pattern_index = 0);

}  // namespace scenelogic
