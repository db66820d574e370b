#include "scenelogic/templates.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scenelogic/builtin.hpp"
#include "scenelogic/error.hpp"
#include "scenelogic/type_check.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

std::string_view question_family_name(QuestionFamily f) {
  switch (f) {
    case QuestionFamily::count: return "count";
    case QuestionFamily::exist: return "exist";
    case QuestionFamily::compare_number: return "compare_number";
    case QuestionFamily::compare_attribute: return "compare_attribute";
    case QuestionFamily::query_attribute: return "query_attribute";
  }
  return "?";
}

std::optional<QuestionFamily> parse_question_family(std::string_view name) {
  for (auto f : kQuestionFamilies)
    if (question_family_name(f) == name) return f;
  return std::nullopt;
}

std::optional<std::size_t> Template::slot_index(std::string_view name) const {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].name == name) return i;
  return std::nullopt;
}

std::string Lexicon::noun(const std::optional<std::string>& entry, bool plural_form) const {
  if (!entry) return plural_form ? things : thing;
  if (!plural_form) return *entry;
  auto it = plural.find(*entry);
  return it != plural.end() ? it->second : *entry + "s";
}

std::string Lexicon::adjective_for(const std::string& entry) const {
  auto it = adjective.find(entry);
  return it != adjective.end() ? it->second : entry;
}

std::string Lexicon::relation_phrase(const std::string& rel) const {
  auto it = relation.find(rel);
  return it != relation.end() ? it->second : rel;
}

const Template* TemplatePack::find(std::string_view template_id) const {
  for (const auto& t : templates)
    if (t.template_id == template_id) return &t;
  return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw TemplateError(where + ": " + what);
}

// Placeholder <NAME> inside a skeleton token, if any.
std::optional<std::pair<std::size_t, std::size_t>> placeholder(const std::string& token) {
  auto open = token.find('<');
  if (open == std::string::npos) return std::nullopt;
  auto close = token.find('>', open);
  if (close == std::string::npos) return std::nullopt;
  return std::make_pair(open, close);
}

std::string substitute(const std::string& token, std::size_t open, std::size_t close,
                       const std::string& value) {
  return token.substr(0, open) + value + token.substr(close + 1);
}

std::vector<PatternPiece> split_pattern(const std::string& source, const Template& t,
                                        const std::string& where) {
  std::vector<PatternPiece> pieces;
  std::size_t i = 0;
  while (i < source.size()) {
    auto open = source.find('<', i);
    if (open == std::string::npos) {
      pieces.push_back({source.substr(i)});
      break;
    }
    if (open > i) pieces.push_back({source.substr(i, open - i)});
    auto close = source.find('>', open);
    if (close == std::string::npos) fail(where, "unterminated placeholder in '" + source + "'");
    std::string name = source.substr(open + 1, close - open - 1);
    bool plural = false;
    if (auto colon = name.find(':'); colon != std::string::npos) {
      if (name.substr(colon + 1) != "pl") fail(where, "unknown placeholder suffix in <" + name + ">");
      plural = true;
      name = name.substr(0, colon);
    }
    auto idx = t.slot_index(name);
    if (!idx) fail(where, "pattern slot <" + name + "> is not declared");
    pieces.push_back({"", static_cast<int>(*idx), plural});
    i = close + 1;
  }
  return pieces;
}

ValueKind family_answer_kind(QuestionFamily f) {
  switch (f) {
    case QuestionFamily::count: return ValueKind::number;
    case QuestionFamily::query_attribute: return ValueKind::entry;
    default: return ValueKind::boolean;
  }
}

Bindings representative(const Template& t, const DomainProfile& profile, bool fill) {
  Bindings b;
  for (const auto& s : t.slots) {
    if (s.is_relation())
      b[s.name] = profile.relations().front().name;
    else if (s.optional && !fill)
      b[s.name] = std::nullopt;
    else
      b[s.name] = profile.attribute(s.attribute).vocabulary.front();
  }
  return b;
}

Template parse_template(const ojson& doc, const DomainProfile& profile,
                        const Catalog& catalog, const Lexicon& lex) {
  Template t;
  t.template_id = doc.at("template_id").get<std::string>();
  const std::string where = "template " + t.template_id;
  auto family = parse_question_family(doc.at("family").get<std::string>());
  if (!family) fail(where, "unknown family '" + doc.at("family").get<std::string>() + "'");
  t.family = *family;
  t.skeleton = doc.at("skeleton").at("tokens").get<std::vector<std::string>>();
  if (t.skeleton.empty()) fail(where, "empty skeleton");

  for (const auto& [name, spec] : doc.at("slots").items()) {
    SlotSpec s;
    s.name = name;
    s.type = spec.at("type").get<std::string>();
    s.optional = spec.value("optional", false);
    s.group = spec.value("group", name);
    if (s.type != "relation") {
      auto a = profile.attribute_index(s.type);
      if (!a) fail(where, "slot " + name + " has unknown type '" + s.type + "'");
      s.attribute = static_cast<int>(*a);
    } else if (s.optional) {
      fail(where, "relation slot " + name + " cannot be optional");
    }
    t.slots.push_back(std::move(s));
  }

  // Skeleton placeholders.
  std::vector<int> uses(t.slots.size(), 0);
  for (const auto& token : t.skeleton) {
    auto ph = placeholder(token);
    if (!ph) {
      if (!catalog.find(token)) fail(where, "unknown skeleton token '" + token + "'");
      continue;
    }
    const std::string name = token.substr(ph->first + 1, ph->second - ph->first - 1);
    auto idx = t.slot_index(name);
    if (!idx) fail(where, "skeleton slot <" + name + "> is not declared");
    ++uses[*idx];
    const SlotSpec& s = t.slots[*idx];
    std::vector<std::string> values;
    if (s.is_relation())
      for (const auto& r : profile.relations()) values.push_back(r.name);
    else
      values = profile.attribute(s.attribute).extended;
    for (const auto& v : values) {
      auto id = catalog.find(substitute(token, ph->first, ph->second, v));
      if (!id) fail(where, "token '" + token + "' does not resolve for " + v);
      if (s.optional && catalog.token(*id).op != Op::filter)
        fail(where, "optional slot " + name + " must sit in a filter token");
    }
  }
  for (std::size_t i = 0; i < t.slots.size(); ++i)
    if (uses[i] == 0) fail(where, "slot " + t.slots[i].name + " is not used by the skeleton");

  for (const auto& p : doc.at("text_patterns")) {
    TextPattern tp;
    tp.source = p.get<std::string>();
    tp.pieces = split_pattern(tp.source, t, where);
    std::vector<int> seen(t.slots.size(), 0);
    for (const auto& piece : tp.pieces) {
      if (piece.slot < 0) continue;
      ++seen[piece.slot];
      const SlotSpec& s = t.slots[piece.slot];
      if (piece.plural && s.attribute != lex.noun_attribute)
        fail(where, "plural form on non-noun slot " + s.name);
    }
    for (std::size_t i = 0; i < t.slots.size(); ++i)
      if (seen[i] != 1)
        fail(where, "pattern '" + tp.source + "' must use slot " + t.slots[i].name +
                        " exactly once");
    t.patterns.push_back(std::move(tp));
  }
  if (t.patterns.empty()) fail(where, "no text patterns");

  if (doc.contains("constraints")) {
    for (const auto& c : doc.at("constraints")) {
      Constraint k;
      const auto type = c.at("type").get<std::string>();
      auto check = [&](const std::string& n) {
        if (!t.slot_index(n)) fail(where, "constraint names unknown slot " + n);
      };
      if (type == "distinct") {
        k.kind = ConstraintKind::distinct;
        k.groups = c.at("groups").get<std::vector<std::vector<std::string>>>();
        for (const auto& g : k.groups) {
          if (g.size() != k.groups.front().size())
            fail(where, "distinct groups must have equal length");
          for (const auto& n : g) check(n);
        }
      } else if (type == "null" || type == "not_leaf") {
        k.kind = type == "null" ? ConstraintKind::null : ConstraintKind::not_leaf;
        k.slots = c.at("slots").get<std::vector<std::string>>();
        for (const auto& n : k.slots) check(n);
      } else {
        fail(where, "unknown constraint type '" + type + "'");
      }
      t.constraints.push_back(std::move(k));
    }
  }

  // The skeleton is type-correct for every binding iff it is for these two:
  // filters are scene -> scene whatever their entry, and relate likewise.
  auto cat = Catalog::build(profile);
  for (bool fill : {false, true}) {
    auto report = type_check(bind_template(t, representative(t, profile, fill), cat), profile);
    if (!report.ok) fail(where, "skeleton does not type-check");
    if (report.result_type->kind != family_answer_kind(t.family))
      fail(where, "skeleton answers " + std::string(kind_name(report.result_type->kind)) +
                      ", family " + std::string(question_family_name(t.family)) + " needs " +
                      std::string(kind_name(family_answer_kind(t.family))));
  }
  return t;
}

Lexicon parse_lexicon(const ojson& doc, const DomainProfile& profile) {
  Lexicon lex;
  if (doc.contains("noun_attribute")) {
    auto a = profile.attribute_index(doc.at("noun_attribute").get<std::string>());
    if (!a) throw TemplateError("lexicon: unknown noun_attribute");
    lex.noun_attribute = static_cast<int>(*a);
  }
  lex.thing = doc.value("thing", lex.thing);
  lex.things = doc.value("things", lex.things);
  if (doc.contains("plural")) lex.plural = doc.at("plural").get<std::map<std::string, std::string>>();
  if (doc.contains("relation"))
    lex.relation = doc.at("relation").get<std::map<std::string, std::string>>();
  if (doc.contains("adjective"))
    lex.adjective = doc.at("adjective").get<std::map<std::string, std::string>>();
  for (const auto& r : profile.relations())
    if (!lex.relation.count(r.name))
      throw TemplateError("lexicon: no phrase for relation " + r.name);
  for (const auto& m : {lex.plural, lex.adjective})
    for (const auto& [entry, word] : m)
      if (!profile.find_entry(entry)) throw TemplateError("lexicon: unknown entry " + entry);
  return lex;
}

}  // namespace

TemplatePack load_template_pack(std::string_view source, const DomainProfile& profile) {
  ojson doc;
  try {
    doc = ojson::parse(source);
  } catch (const ojson::parse_error& e) {
    throw TemplateError(std::string("template pack is not valid JSON: ") + e.what());
  }
  try {
    TemplatePack pack;
    pack.profile_name = doc.at("profile").get<std::string>();
    if (pack.profile_name != profile.name())
      throw TemplateError("template pack targets profile " + pack.profile_name +
                          ", not " + profile.name());
    pack.lexicon = parse_lexicon(doc.value("lexicon", ojson::object()), profile);
    auto catalog = Catalog::build(profile);
    std::set<std::string> ids;
    for (const auto& t : doc.at("templates")) {
      pack.templates.push_back(parse_template(t, profile, *catalog, pack.lexicon));
      if (!ids.insert(pack.templates.back().template_id).second)
        throw TemplateError("duplicate template id " + pack.templates.back().template_id);
    }
    return pack;
  } catch (const ojson::exception& e) {
    throw TemplateError(std::string("malformed template pack: ") + e.what());
  }
}

TemplatePack load_template_pack_file(const std::filesystem::path& path,
                                     const DomainProfile& profile) {
  std::ifstream in(path);
  if (!in) throw TemplateError("cannot open template pack " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_template_pack(ss.str(), profile);
}

TemplatePack resolve_template_pack(const std::string& name_or_path,
                                   const DomainProfile& profile) {
  if (auto src = builtin_templates_source(name_or_path)) return load_template_pack(*src, profile);
  return load_template_pack_file(name_or_path, profile);
}

void check_bindings(const Template& t, const Bindings& bindings,
                    const DomainProfile& profile) {
  for (const auto& [name, value] : bindings)
    if (!t.slot_index(name))
      throw TemplateError("binding for unused slot " + name + " in " + t.template_id);
  for (const auto& s : t.slots) {
    auto it = bindings.find(s.name);
    if (it == bindings.end())
      throw TemplateError("missing slot " + s.name + " in " + t.template_id);
    if (!it->second) {
      if (!s.optional) throw TemplateError("required slot " + s.name + " is unbound");
      continue;
    }
    if (s.is_relation()) {
      if (!profile.relation_index(*it->second))
        throw TemplateError("slot " + s.name + ": unknown relation " + *it->second);
    } else {
      auto ref = profile.find_entry(*it->second);
      if (!ref || static_cast<int>(ref->attribute) != s.attribute)
        throw TemplateError("slot " + s.name + ": " + *it->second + " is not a " + s.type);
    }
  }
}

bool satisfies_constraints(const Template& t, const Bindings& b,
                           const DomainProfile& profile) {
  auto value = [&](const std::string& slot) {
    auto it = b.find(slot);
    return it == b.end() ? std::optional<std::string>{} : it->second;
  };
  for (const auto& c : t.constraints) {
    switch (c.kind) {
      case ConstraintKind::distinct: {
        std::set<std::vector<std::optional<std::string>>> tuples;
        for (const auto& g : c.groups) {
          std::vector<std::optional<std::string>> tuple;
          for (const auto& n : g) tuple.push_back(value(n));
          if (!tuples.insert(tuple).second) return false;
        }
        break;
      }
      case ConstraintKind::null:
        for (const auto& n : c.slots)
          if (value(n)) return false;
        break;
      case ConstraintKind::not_leaf:
        for (const auto& n : c.slots) {
          auto v = value(n);
          if (!v) continue;
          auto ref = profile.find_entry(*v);
          if (ref && profile.attribute(ref->attribute).is_leaf(ref->index)) return false;
        }
        break;
    }
  }
  return true;
}

Program bind_template(const Template& t, const Bindings& bindings,
                      std::shared_ptr<const Catalog> catalog) {
  std::vector<TokenId> ids;
  ids.reserve(t.skeleton.size());
  for (const auto& token : t.skeleton) {
    std::string name = token;
    if (auto ph = placeholder(token)) {
      const std::string slot = token.substr(ph->first + 1, ph->second - ph->first - 1);
      auto it = bindings.find(slot);
      if (it == bindings.end()) throw TemplateError("missing slot " + slot);
      if (!it->second) continue;
      name = substitute(token, ph->first, ph->second, *it->second);
    }
    auto id = catalog->find(name);
    if (!id) throw TemplateError("bound token '" + name + "' is not in the catalog");
    ids.push_back(*id);
  }
  return build_tree(std::move(catalog), ids, Notation::postfix);
}

namespace {

bool starts_with_vowel(const std::string& w) {
  if (w.empty()) return false;
  char c = static_cast<char>(std::tolower(static_cast<unsigned char>(w.front())));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Collapses whitespace, attaches punctuation, fixes a/an, capitalizes.
std::string tidy(const std::string& raw) {
  std::vector<std::string> words;
  std::istringstream in(raw);
  for (std::string w; in >> w;) {
    if (!words.empty() && (w == "?" || w == "." || w == "," || w == "!")) {
      words.back() += w;
      continue;
    }
    words.push_back(w);
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string w = words[i];
    if ((w == "a" || w == "an" || w == "A" || w == "An") && i + 1 < words.size()) {
      const bool vowel = starts_with_vowel(words[i + 1]);
      w = std::string(1, w[0]) + (vowel ? "n" : "");
    }
    if (!out.empty()) out += ' ';
    out += w;
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

std::string render_text(const Template& t, const Bindings& bindings,
                        const TemplatePack& pack, const DomainProfile& profile,
                        std::size_t pattern_index) {
  check_bindings(t, bindings, profile);
  if (pattern_index >= t.patterns.size())
    throw TemplateError("pattern index out of range for " + t.template_id);
  const Lexicon& lex = pack.lexicon;
  std::string raw;
  for (const auto& piece : t.patterns[pattern_index].pieces) {
    if (piece.slot < 0) {
      raw += piece.text;
      continue;
    }
    const SlotSpec& s = t.slots[piece.slot];
    const auto& v = bindings.at(s.name);
    raw += ' ';
    if (s.is_relation())
      raw += lex.relation_phrase(*v);
    else if (s.attribute == lex.noun_attribute)
      raw += lex.noun(v, piece.plural);
    else if (v)
      raw += lex.adjective_for(*v);
    raw += ' ';
  }
  return tidy(raw);
}

}  // namespace scenelogic
