#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scenelogic/catalog.hpp"

namespace scenelogic {

enum class Notation { postfix, prefix };

// Typed program tree, stored as its post-order node sequence. Each node keeps
// the size of its subtree, which is enough to recover children: the last
// argument ends right before the node, earlier arguments precede it.
class Program {
 public:
  struct Node {
    TokenId token;
    std::uint32_t size;  // nodes in the subtree rooted here, itself included
  };

  class Children {
   public:
    const std::size_t* begin() const { return idx_.data(); }
    const std::size_t* end() const { return idx_.data() + count_; }
    std::size_t size() const { return count_; }
    std::size_t operator[](std::size_t i) const { return idx_[i]; }

   private:
    friend class Program;
    std::array<std::size_t, 2> idx_{};
    std::size_t count_ = 0;
  };

  Program() = default;

  const Catalog& catalog() const { return *catalog_; }
  const std::shared_ptr<const Catalog>& catalog_ptr() const { return catalog_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t root() const { return nodes_.size() - 1; }

  const TokenSpec& token(std::size_t node) const {
    return catalog_->token(nodes_[node].token);
  }
  // Argument nodes of `node`, first argument first.
  Children children(std::size_t node) const;
  // Longest root-to-leaf chain counted in nodes; the bare scene program has depth 1.
  std::size_t depth() const;

  std::string to_text(Notation notation = Notation::postfix) const;
  // Nested call form, e.g. count(filter_color[red](scene)).
  std::string to_expression() const;

  // Structural equality: same profile and same token at every tree position.
  friend bool operator==(const Program& a, const Program& b);

 private:
  friend Program build_tree(std::shared_ptr<const Catalog>, std::span<const TokenId>,
                            Notation);
  std::string expression_at(std::size_t node) const;

  std::shared_ptr<const Catalog> catalog_;
  std::vector<Node> nodes_;
};

// Splits whitespace-separated token names and resolves them against the
// catalog. Throws ProgramError (with token index) for unknown names and
// malformed bracket parameters.
std::vector<TokenId> tokenize(std::string_view text, const Catalog& catalog);

// Postfix: sources push a subtree, unary tokens wrap the top, binary tokens
// pop two with the earlier subtree as first argument. Prefix is the usual
// operator-first reading. Throws ProgramError on stack underflow or leftover
// subtrees.
Program build_tree(std::shared_ptr<const Catalog> catalog,
                   std::span<const TokenId> tokens,
                   Notation notation = Notation::postfix);

std::vector<TokenId> linearize(const Program& program,
                               Notation notation = Notation::postfix);

Program parse_program(std::string_view text, std::shared_ptr<const Catalog> catalog,
                      Notation notation = Notation::postfix);

std::vector<std::string> token_names(const Program& program);

// {"tokens":[...], "notation":"postfix"|"prefix"}; notation defaults to postfix.
nlohmann::ordered_json program_to_json(const Program& program);
Program program_from_json(const nlohmann::ordered_json& doc,
                          std::shared_ptr<const Catalog> catalog);

}  // namespace scenelogic
