#include "scenelogic/question_parser.hpp"

#include <algorithm>
#include <cctype>

#include "scenelogic/error.hpp"

namespace scenelogic {

std::vector<std::string> normalize_question(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur == "an") cur = "a";
    words.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '-')
      cur += static_cast<char>(std::tolower(c));
    else
      flush();
  }
  flush();
  return words;
}

QuestionParser::QuestionParser(const TemplatePack& pack, const DomainProfile& profile)
    : pack_(pack), catalog_(Catalog::build(profile)) {
  if (pack.profile_name != profile.name())
    throw QuestionParseError("template pack targets profile " + pack.profile_name);
  const Lexicon& lex = pack_.lexicon;
  for (std::size_t ti = 0; ti < pack_.templates.size(); ++ti) {
    const Template& t = pack_.templates[ti];
    for (const auto& pattern : t.patterns) {
      CompiledPattern cp;
      cp.tmpl = ti;
      for (const auto& piece : pattern.pieces) {
        if (piece.slot < 0) {
          for (auto& w : normalize_question(piece.text)) {
            cp.elements.push_back({std::move(w)});
            ++cp.specificity;
          }
          continue;
        }
        const SlotSpec& s = t.slots[piece.slot];
        Element el;
        el.slot = piece.slot;
        if (s.is_relation()) {
          for (const auto& r : profile.relations())
            el.phrases.push_back({normalize_question(lex.relation_phrase(r.name)), r.name});
        } else {
          const bool noun = s.attribute == lex.noun_attribute;
          for (const auto& e : profile.attribute(s.attribute).extended)
            el.phrases.push_back(
                {normalize_question(noun ? lex.noun(e, piece.plural) : lex.adjective_for(e)), e});
          if (s.optional)
            el.phrases.push_back(
                {noun ? normalize_question(lex.noun(std::nullopt, piece.plural))
                      : std::vector<std::string>{},
                 std::nullopt});
        }
        cp.elements.push_back(std::move(el));
      }
      patterns_.push_back(std::move(cp));
    }
  }
}

void QuestionParser::match(const CompiledPattern& p, std::size_t e, std::size_t w,
                           const std::vector<std::string>& words,
                           std::vector<std::optional<std::string>>& values,
                           std::vector<std::vector<std::optional<std::string>>>& out) const {
  if (e == p.elements.size()) {
    if (w == words.size()) out.push_back(values);
    return;
  }
  const Element& el = p.elements[e];
  if (el.slot < 0) {
    if (w < words.size() && words[w] == el.word) match(p, e + 1, w + 1, words, values, out);
    return;
  }
  for (const auto& ph : el.phrases) {
    if (w + ph.words.size() > words.size()) continue;
    if (!std::equal(ph.words.begin(), ph.words.end(), words.begin() + w)) continue;
    values[el.slot] = ph.value;
    match(p, e + 1, w + ph.words.size(), words, values, out);
  }
  values[el.slot].reset();
}

ParsedQuestion QuestionParser::parse(std::string_view text) const {
  const auto words = normalize_question(text);
  std::vector<ParsedQuestion> best;
  std::size_t best_spec = 0;
  for (const auto& p : patterns_) {
    if (!best.empty() && p.specificity < best_spec) continue;
    const Template& t = pack_.templates[p.tmpl];
    std::vector<std::optional<std::string>> values(t.slots.size());
    std::vector<std::vector<std::optional<std::string>>> found;
    match(p, 0, 0, words, values, found);
    if (found.empty()) continue;
    if (p.specificity > best_spec) {
      best.clear();
      best_spec = p.specificity;
    }
    for (const auto& vals : found) {
      Bindings b;
      for (std::size_t i = 0; i < t.slots.size(); ++i) b[t.slots[i].name] = vals[i];
      Program prog = bind_template(t, b, catalog_);
      const bool dup = std::any_of(best.begin(), best.end(), [&](const ParsedQuestion& q) {
        return q.program == prog;
      });
      if (!dup) best.push_back({t.template_id, std::move(b), std::move(prog)});
    }
  }
  if (best.empty()) throw QuestionParseError("no template matches: " + std::string(text));
  if (best.size() > 1) {
    std::vector<std::string> ids;
    std::string list;
    for (const auto& q : best) {
      ids.push_back(q.template_id);
      list += (list.empty() ? "" : ", ") + q.template_id + " -> " + q.program.to_text();
    }
    throw QuestionParseError("ambiguous question: " + list, std::move(ids));
  }
  return std::move(best.front());
}

Program parse_question(std::string_view text, const TemplatePack& pack,
                       const DomainProfile& profile) {
  return QuestionParser(pack, profile).parse(text).program;
}

}  // namespace scenelogic
