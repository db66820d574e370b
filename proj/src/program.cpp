#include "scenelogic/program.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "scenelogic/error.hpp"

namespace scenelogic {

Program::Children Program::children(std::size_t node) const {
  Children c;
  const std::size_t arity = token(node).arity();
  std::size_t next = node;  // one past the end of the next argument (going left)
  for (std::size_t k = arity; k-- > 0;) {
    const std::size_t child = next - 1;
    c.idx_[k] = child;
    next = child + 1 - nodes_[child].size;
  }
  c.count_ = arity;
  return c;
}

std::size_t Program::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (auto c : children(i)) d[i] = std::max(d[i], d[c] + 1);
  return nodes_.empty() ? 0 : d[root()];
}

std::string Program::to_text(Notation notation) const {
  std::string out;
  for (auto id : linearize(*this, notation)) {
    if (!out.empty()) out += ' ';
    out += catalog_->token(id).name;
  }
  return out;
}

std::string Program::expression_at(std::size_t node) const {
  const auto& t = token(node);
  if (t.arity() == 0) return t.name;
  std::string out = t.name + "(";
  bool first = true;
  for (auto c : children(node)) {
    if (!first) out += ", ";
    out += expression_at(c);
    first = false;
  }
  return out + ")";
}

std::string Program::to_expression() const {
  return nodes_.empty() ? std::string{} : expression_at(root());
}

bool operator==(const Program& a, const Program& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  if (a.nodes_.empty()) return true;
  if (a.catalog_ != b.catalog_ &&
      a.catalog_->profile_name() != b.catalog_->profile_name())
    return false;
  // Postfix sequence plus arities determines the tree.
  for (std::size_t i = 0; i < a.nodes_.size(); ++i)
    if (a.token(i).name != b.token(i).name) return false;
  return true;
}

std::vector<TokenId> tokenize(std::string_view text, const Catalog& catalog) {
  std::vector<TokenId> out;
  std::istringstream in{std::string(text)};
  std::string word;
  std::size_t pos = 0;
  while (in >> word) {
    auto open = word.find('[');
    auto close = word.find(']');
    if (open != std::string::npos || close != std::string::npos) {
      bool ok = open != std::string::npos && open > 0 && close == word.size() - 1 &&
                close > open + 1 && word.find('[', open + 1) == std::string::npos &&
                word.find(']') == close;
      if (!ok) throw ProgramError(pos, "malformed bracket parameter '" + word + "'");
    }
    auto id = catalog.find(word);
    if (!id) throw ProgramError(pos, "unknown token '" + word + "'");
    out.push_back(*id);
    ++pos;
  }
  return out;
}

Program build_tree(std::shared_ptr<const Catalog> catalog,
                   std::span<const TokenId> tokens, Notation notation) {
  if (tokens.empty()) throw ProgramError(0, "empty program");
  Program p;
  p.catalog_ = std::move(catalog);
  const Catalog& cat = *p.catalog_;
  p.nodes_.reserve(tokens.size());

  if (notation == Notation::postfix) {
    std::vector<std::uint32_t> stack;  // subtree sizes
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto arity = cat.token(tokens[i]).arity();
      if (stack.size() < arity) throw ProgramError(i, "stack underflow");
      std::uint32_t size = 1;
      for (std::size_t k = 0; k < arity; ++k) {
        size += stack.back();
        stack.pop_back();
      }
      p.nodes_.push_back({tokens[i], size});
      stack.push_back(size);
    }
    if (stack.size() > 1)
      throw ProgramError(tokens.size(), "leftover subtrees (" +
                                            std::to_string(stack.size()) + ")");
    return p;
  }

  // Prefix: recursive descent, emitting nodes in post-order.
  std::size_t pos = 0;
  std::function<std::uint32_t()> parse = [&]() -> std::uint32_t {
    if (pos >= tokens.size()) throw ProgramError(pos, "stack underflow");
    const TokenId id = tokens[pos++];
    std::uint32_t size = 1;
    for (std::size_t k = 0; k < cat.token(id).arity(); ++k) size += parse();
    p.nodes_.push_back({id, size});
    return size;
  };
  parse();
  if (pos != tokens.size()) throw ProgramError(pos, "leftover subtrees");
  return p;
}

std::vector<TokenId> linearize(const Program& program, Notation notation) {
  std::vector<TokenId> out;
  out.reserve(program.size());
  if (notation == Notation::postfix) {
    for (const auto& n : program.nodes()) out.push_back(n.token);
    return out;
  }
  if (program.empty()) return out;
  std::function<void(std::size_t)> walk = [&](std::size_t node) {
    out.push_back(program.nodes()[node].token);
    for (auto c : program.children(node)) walk(c);
  };
  walk(program.root());
  return out;
}

Program parse_program(std::string_view text, std::shared_ptr<const Catalog> catalog,
                      Notation notation) {
  auto tokens = tokenize(text, *catalog);
  return build_tree(std::move(catalog), tokens, notation);
}

std::vector<std::string> token_names(const Program& program) {
  std::vector<std::string> out;
  out.reserve(program.size());
  for (std::size_t i = 0; i < program.size(); ++i) out.push_back(program.token(i).name);
  return out;
}

nlohmann::ordered_json program_to_json(const Program& program) {
  nlohmann::ordered_json doc;
  doc["tokens"] = token_names(program);
  doc["notation"] = "postfix";
  return doc;
}

Program program_from_json(const nlohmann::ordered_json& doc,
                          std::shared_ptr<const Catalog> catalog) {
  if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array())
    throw ProgramError(0, "program JSON needs a tokens array");
  Notation notation = Notation::postfix;
  if (doc.contains("notation")) {
    const auto n = doc["notation"].get<std::string>();
    if (n == "prefix")
      notation = Notation::prefix;
    else if (n != "postfix")
      throw ProgramError(0, "unknown notation '" + n + "'");
  }
  std::vector<TokenId> ids;
  std::size_t pos = 0;
  for (const auto& t : doc["tokens"]) {
    if (!t.is_string()) throw ProgramError(pos, "token must be a string");
    auto id = catalog->find(t.get<std::string>());
    if (!id) throw ProgramError(pos, "unknown token '" + t.get<std::string>() + "'");
    ids.push_back(*id);
    ++pos;
  }
  return build_tree(std::move(catalog), ids, notation);
}

}  // namespace scenelogic
