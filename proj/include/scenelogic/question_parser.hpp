#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "scenelogic/catalog.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/program.hpp"
#include "scenelogic/templates.hpp"

namespace scenelogic {

// Lowercase words with punctuation other than hyphens removed and "an"
// folded into "a".
std::vector<std::string> normalize_question(std::string_view text);

struct ParsedQuestion {
  std::string template_id;
  Bindings bindings;
  Program program;
};

// Exact matcher over a template pack's text patterns. A pattern matches when
// its literal words and slot phrases cover the normalized question exactly.
// Among matches, those with the most literal words win; if they disagree on
// the program, the question is ambiguous.
class QuestionParser {
 public:
  QuestionParser(const TemplatePack& pack, const DomainProfile& profile);

  // Throws QuestionParseError for "no template matches" and ambiguity.
  ParsedQuestion parse(std::string_view text) const;

 private:
  struct Phrase {
    std::vector<std::string> words;
    std::optional<std::string> value;
  };
  struct Element {
    std::string word;  // literal when slot < 0
    int slot = -1;
    std::vector<Phrase> phrases;
  };
  struct CompiledPattern {
    std::size_t tmpl = 0;  // index into pack_.templates
    std::vector<Element> elements;
    std::size_t specificity = 0;
  };

  void match(const CompiledPattern& p, std::size_t e, std::size_t w,
             const std::vector<std::string>& words,
             std::vector<std::optional<std::string>>& values,
             std::vector<std::vector<std::optional<std::string>>>& out) const;

  TemplatePack pack_;
  std::shared_ptr<const Catalog> catalog_;
  std::vector<CompiledPattern> patterns_;
};

Program parse_question(std::string_view text, const TemplatePack& pack,
                       const DomainProfile& profile);

}  // namespace scenelogic
