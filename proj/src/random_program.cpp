#include "scenelogic/random_program.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "scenelogic/error.hpp"

namespace scenelogic {

namespace {

using TypeKey = std::pair<int, int>;
TypeKey key(ValueType t) { return {static_cast<int>(t.kind), t.attribute}; }

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max() / 2;

class Sampler {
 public:
  Sampler(const Catalog& cat, Rng& rng) : cat_(cat), rng_(rng) {
    token_depth_.assign(cat.size(), kUnreachable);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < cat.size(); ++i) {
        const auto& t = cat.token(static_cast<TokenId>(i));
        std::size_t d = 1;
        for (auto in : t.inputs) d = std::max(d, type_depth(in) + 1);
        if (d < token_depth_[i]) {
          token_depth_[i] = d;
          auto& td = type_depth_[key(t.output)];
          if (td == 0 || d < td) td = d;
          changed = true;
        }
      }
    }
  }

  std::size_t type_depth(ValueType t) const {
    auto it = type_depth_.find(key(t));
    return it == type_depth_.end() || it->second == 0 ? kUnreachable : it->second;
  }

  // Family-first choice among tokens accepted by `want` within the budget.
  template <class Pred>
  TokenId pick(std::size_t budget, Pred want) {
    std::map<Family, std::vector<TokenId>> by_family;
    for (std::size_t i = 0; i < cat_.size(); ++i) {
      const auto id = static_cast<TokenId>(i);
      if (token_depth_[i] <= budget && want(cat_.token(id)))
        by_family[cat_.token(id).family].push_back(id);
    }
    if (by_family.empty()) throw ExecutionError("no token fits the depth budget");
    auto fam = std::next(by_family.begin(),
                         static_cast<std::ptrdiff_t>(rng_.index(by_family.size())));
    return fam->second[rng_.index(fam->second.size())];
  }

  void emit(TokenId id, std::size_t budget, std::vector<TokenId>& out) {
    for (auto in : cat_.token(id).inputs) {
      TokenId child = pick(budget - 1, [&](const TokenSpec& t) { return t.output == in; });
      emit(child, budget - 1, out);
    }
    out.push_back(id);
  }

 private:
  const Catalog& cat_;
  Rng& rng_;
  std::vector<std::size_t> token_depth_;
  std::map<TypeKey, std::size_t> type_depth_;
};

}  // namespace

Program random_program(const std::shared_ptr<const Catalog>& catalog,
                       std::size_t max_depth, Rng& rng) {
  if (max_depth < 1) throw ExecutionError("random_program needs max_depth >= 1");
  Sampler sampler(*catalog, rng);
  std::vector<TokenId> tokens;
  TokenId root = sampler.pick(max_depth, [](const TokenSpec&) { return true; });
  sampler.emit(root, max_depth, tokens);
  return build_tree(catalog, tokens);
}

}  // namespace scenelogic
