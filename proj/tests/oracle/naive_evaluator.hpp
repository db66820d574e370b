#pragma once

// Reference semantics for the module catalog, written against the raw Scene
// and profile data only: token names are split by hand, sets are sorted
// vectors, relations are recomputed by linear scans and taxonomy leaves by
// graph search. Shares no code with the executor, catalog or type checker.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <iterator>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenelogic/executor.hpp"
#include "scenelogic/profile.hpp"
#include "scenelogic/scene.hpp"
#include "scenelogic/value.hpp"

namespace oracle {

using scenelogic::DomainProfile;
using scenelogic::Scene;

// Types are plain strings: scene, object, number, boolean, entry:<attribute>.
struct Token {
  std::string name;
  std::string op;     // scene unique union intersect count exist equal equal_integer
                      // greater_than less_than query relate same filter
  std::string param;  // attribute for equal/query/same/filter, relation for relate
  std::string entry;  // filter entry
  std::vector<std::string> in;
  std::string out;
  int code = 0;  // position of `op` in kOps, to dispatch without string compares
};

inline const std::vector<std::string> kOps = {
    "scene", "unique", "union", "intersect", "count", "exist", "equal", "equal_integer",
    "greater_than", "less_than", "query", "relate", "same", "filter"};

inline Token parse_token(const std::string& name, const DomainProfile& p) {
  Token t;
  t.name = name;
  auto is_attr = [&](const std::string& a) {
    for (const auto& at : p.attributes())
      if (at.name == a) return true;
    return false;
  };
  auto rest = [&](const std::string& prefix) { return name.substr(prefix.size()); };
  auto starts = [&](const std::string& prefix) { return name.rfind(prefix, 0) == 0; };
  if (name == "scene") {
    t.op = "scene", t.out = "scene";
  } else if (name == "unique") {
    t.op = "unique", t.in = {"scene"}, t.out = "object";
  } else if (name == "union" || name == "intersect") {
    t.op = name, t.in = {"scene", "scene"}, t.out = "scene";
  } else if (name == "count") {
    t.op = "count", t.in = {"scene"}, t.out = "number";
  } else if (name == "exist") {
    t.op = "exist", t.in = {"scene"}, t.out = "boolean";
  } else if (name == "equal_integer" || name == "greater_than" || name == "less_than") {
    t.op = name, t.in = {"number", "number"}, t.out = "boolean";
  } else if (starts("equal_") && is_attr(rest("equal_"))) {
    t.op = "equal", t.param = rest("equal_");
    t.in = {"entry:" + t.param, "entry:" + t.param}, t.out = "boolean";
  } else if (starts("query_") && is_attr(rest("query_"))) {
    t.op = "query", t.param = rest("query_"), t.in = {"object"}, t.out = "entry:" + t.param;
  } else if (starts("relate_")) {
    t.op = "relate", t.param = rest("relate_"), t.in = {"object"}, t.out = "scene";
  } else if (starts("same_") && is_attr(rest("same_"))) {
    t.op = "same", t.param = rest("same_"), t.in = {"object"}, t.out = "scene";
  } else if (starts("filter_")) {
    const auto open = name.find('['), close = name.find(']');
    t.op = "filter";
    t.param = name.substr(7, open - 7);
    t.entry = name.substr(open + 1, close - open - 1);
    t.in = {"scene"}, t.out = "scene";
  } else {
    throw std::runtime_error("oracle: unknown token " + name);
  }
  t.code = static_cast<int>(std::find(kOps.begin(), kOps.end(), t.op) - kOps.begin());
  return t;
}

// Every token name the module tables define for this profile.
inline std::vector<std::string> token_names(const DomainProfile& p) {
  std::vector<std::string> names = {"scene", "unique", "union", "intersect", "count", "exist",
                                    "equal_integer", "greater_than", "less_than"};
  std::set<std::string> inner;
  for (const auto& e : p.taxonomy()) inner.insert(e.parent);
  for (const auto& a : p.attributes()) {
    names.push_back("equal_" + a.name);
    names.push_back("query_" + a.name);
    names.push_back("same_" + a.name);
    for (const auto& v : a.vocabulary) names.push_back("filter_" + a.name + "[" + v + "]");
    if (p.hierarchical_attribute() &&
        p.attributes()[*p.hierarchical_attribute()].name == a.name)
      for (const auto& n : inner) names.push_back("filter_" + a.name + "[" + n + "]");
  }
  for (const auto& r : p.relations()) names.push_back("relate_" + r.name);
  std::sort(names.begin(), names.end());
  return names;
}

inline std::vector<Token> tokens(const DomainProfile& p) {
  std::vector<Token> out;
  for (const auto& n : token_names(p)) out.push_back(parse_token(n, p));
  return out;
}

// Leaves below `entry` by depth-first search over the taxonomy edges.
inline std::set<std::string> leaves(const DomainProfile& p, const std::string& entry) {
  std::multimap<std::string, std::string> kids;
  for (const auto& e : p.taxonomy()) kids.emplace(e.parent, e.child);
  std::set<std::string> out, seen;
  std::function<void(const std::string&)> walk = [&](const std::string& n) {
    if (!seen.insert(n).second) return;
    auto range = kids.equal_range(n);
    if (range.first == range.second) out.insert(n);
    for (auto it = range.first; it != range.second; ++it) walk(it->second);
  };
  walk(entry);
  return out;
}

struct Val {
  std::string type;
  std::vector<int> set;  // sorted ids
  int obj = -1;
  std::string entry;
  long num = 0;
  bool b = false;

  friend bool operator==(const Val&, const Val&) = default;
};

class Evaluator {
 public:
  Evaluator(const Scene& s, const DomainProfile& p) : scene_(&s), profile_(&p) {}

  std::optional<Val> apply(const Token& t, const std::vector<const Val*>& args) const {
    if (args.size() != t.in.size()) return std::nullopt;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i]->type != t.in[i]) return std::nullopt;
    const Scene& s = *scene_;
    Val v;
    v.type = t.out;
    switch (t.code) {
      case 0:  // scene
        for (std::size_t i = 0; i < s.objects.size(); ++i) v.set.push_back(static_cast<int>(i));
        break;
      case 1:  // unique
        if (args[0]->set.size() != 1) return std::nullopt;
        v.obj = args[0]->set[0];
        break;
      case 2:
        std::set_union(args[0]->set.begin(), args[0]->set.end(), args[1]->set.begin(),
                       args[1]->set.end(), std::back_inserter(v.set));
        break;
      case 3:
        std::set_intersection(args[0]->set.begin(), args[0]->set.end(), args[1]->set.begin(),
                              args[1]->set.end(), std::back_inserter(v.set));
        break;
      case 4: v.num = static_cast<long>(args[0]->set.size()); break;
      case 5: v.b = !args[0]->set.empty(); break;
      case 6: v.b = args[0]->entry == args[1]->entry; break;
      case 7: v.b = args[0]->num == args[1]->num; break;
      case 8: v.b = args[0]->num > args[1]->num; break;
      case 9: v.b = args[0]->num < args[1]->num; break;
      case 10: v.entry = s.objects[args[0]->obj].entries.at(t.param); break;
      case 11: {  // relate
        const int a = args[0]->obj;
        std::vector<double> dir;
        if (auto it = s.directions.find(t.param); it != s.directions.end())
          dir = it->second;
        else
          for (const auto& r : profile_->relations())
            if (r.name == t.param) dir = r.direction;
        for (std::size_t o = 0; o < s.objects.size(); ++o) {
          if (static_cast<int>(o) == a) continue;
          double dot = 0;
          for (std::size_t k = 0; k < dir.size(); ++k)
            dot += (s.objects[o].position[k] - s.objects[a].position[k]) * dir[k];
          if (dot > 0) v.set.push_back(static_cast<int>(o));
        }
        break;
      }
      case 12: {  // same
        const int a = args[0]->obj;
        const auto& mine = s.objects[a].entries.at(t.param);
        for (std::size_t o = 0; o < s.objects.size(); ++o)
          if (static_cast<int>(o) != a && s.objects[o].entries.at(t.param) == mine)
            v.set.push_back(static_cast<int>(o));
        break;
      }
      case 13: {  // filter
        const auto& ok = leaves_cached(t.entry);
        for (int o : args[0]->set)
          if (ok.count(s.objects[o].entries.at(t.param))) v.set.push_back(o);
        break;
      }
    }
    return v;
  }

  // nullopt on any failure, like the executor's error flag.
  std::optional<Val> eval_tokens(const std::vector<Token>& postfix) const {
    std::vector<Val> stack;
    std::vector<const Val*> args;
    for (const auto& t : postfix) {
      if (stack.size() < t.in.size()) return std::nullopt;
      args.clear();
      for (std::size_t i = stack.size() - t.in.size(); i < stack.size(); ++i)
        args.push_back(&stack[i]);
      auto r = apply(t, args);
      if (!r) return std::nullopt;
      stack.resize(stack.size() - t.in.size());
      stack.push_back(std::move(*r));
    }
    if (stack.size() != 1) return std::nullopt;
    return stack.back();
  }

  std::optional<Val> eval(const std::vector<std::string>& postfix) const {
    std::vector<Token> tokens;
    for (const auto& name : postfix) tokens.push_back(parse_token(name, *profile_));
    return eval_tokens(tokens);
  }

 private:
  const std::set<std::string>& leaves_cached(const std::string& entry) const {
    auto it = leaf_cache_.find(entry);
    if (it == leaf_cache_.end()) it = leaf_cache_.emplace(entry, leaves(*profile_, entry)).first;
    return it->second;
  }

  const Scene* scene_;
  const DomainProfile* profile_;
  mutable std::map<std::string, std::set<std::string>> leaf_cache_;
};

// Executor value in oracle form.
inline Val from_value(const scenelogic::Value& value, const DomainProfile& p) {
  using namespace scenelogic;
  Val v;
  if (auto* s = std::get_if<SceneVal>(&value)) {
    v.type = "scene";
    for (auto id : s->members.ids()) v.set.push_back(static_cast<int>(id));
  } else if (auto* o = std::get_if<ObjectVal>(&value)) {
    v.type = "object";
    v.obj = static_cast<int>(o->id);
  } else if (auto* e = std::get_if<EntryVal>(&value)) {
    v.type = "entry:" + p.attribute(e->attribute).name;
    v.entry = p.attribute(e->attribute).extended.at(e->index);
  } else if (auto* n = std::get_if<NumberVal>(&value)) {
    v.type = "number";
    v.num = n->value;
  } else if (auto* b = std::get_if<BoolVal>(&value)) {
    v.type = "boolean";
    v.b = b->value;
  }
  return v;
}

// Allocation-free comparison for hot loops.
inline bool same_value(const scenelogic::Value& value, const Val& v, const DomainProfile& p) {
  using namespace scenelogic;
  if (auto* s = std::get_if<SceneVal>(&value)) {
    if (v.type != "scene" || s->members.size() != v.set.size()) return false;
    for (int id : v.set)
      if (!s->members.contains(static_cast<ObjectId>(id))) return false;
    return true;
  }
  if (auto* o = std::get_if<ObjectVal>(&value)) return v.type == "object" && v.obj == static_cast<int>(o->id);
  if (auto* e = std::get_if<EntryVal>(&value)) {
    const auto& name = p.attribute(e->attribute).name;
    return v.type.size() == 6 + name.size() && v.type.compare(0, 6, "entry:") == 0 &&
           v.type.compare(6, std::string::npos, name) == 0 &&
           v.entry == p.attribute(e->attribute).extended.at(e->index);
  }
  if (auto* n = std::get_if<NumberVal>(&value)) return v.type == "number" && v.num == n->value;
  if (auto* b = std::get_if<BoolVal>(&value)) return v.type == "boolean" && v.b == b->value;
  return false;
}

inline bool agrees(const scenelogic::Outcome& o, const std::optional<Val>& expected,
                   const DomainProfile& p) {
  if (!expected) return o.error && !o.answer;
  return !o.error && o.answer && same_value(*o.answer, *expected, p);
}

// Well-typed programs grouped by exact depth (in nodes), as postfix token
// names, enumerated from the oracle's own signatures.
struct Enumeration {
  std::vector<Token> tokens;
  std::vector<std::vector<std::string>> programs;
  std::vector<std::string> type;
  std::vector<int> depth;
  std::vector<std::vector<std::size_t>> by_depth;  // program indices per exact depth

  // Programs of exact depth d, built from the stored programs (d <= stored + 1).
  // The callback receives the top token and argument program indices.
  template <class F>
  void for_each_at_depth(int d, F&& f) const {
    for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
      const Token& t = tokens[ti];
      if (t.in.empty()) {
        if (d == 1) f(ti, std::vector<std::size_t>{});
        continue;
      }
      if (t.in.size() == 1) {
        for (auto c : by_depth[d - 1])
          if (type[c] == t.in[0]) f(ti, std::vector<std::size_t>{c});
        continue;
      }
      for (std::size_t a = 0; a < programs.size(); ++a) {
        if (depth[a] > d - 1 || type[a] != t.in[0]) continue;
        for (std::size_t b = 0; b < programs.size(); ++b) {
          if (depth[b] > d - 1 || type[b] != t.in[1]) continue;
          if (depth[a] != d - 1 && depth[b] != d - 1) continue;
          f(ti, std::vector<std::size_t>{a, b});
        }
      }
    }
  }
};

inline Enumeration enumerate(const DomainProfile& p, int stored_depth) {
  Enumeration e;
  e.tokens = tokens(p);
  e.by_depth.resize(stored_depth + 2);
  for (int d = 1; d <= stored_depth; ++d) {
    std::vector<std::size_t> fresh;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> found;
    e.for_each_at_depth(d, [&](std::size_t ti, const std::vector<std::size_t>& kids) {
      found.emplace_back(ti, kids);
    });
    for (auto& [ti, kids] : found) {
      std::vector<std::string> prog;
      for (auto c : kids) prog.insert(prog.end(), e.programs[c].begin(), e.programs[c].end());
      prog.push_back(e.tokens[ti].name);
      e.programs.push_back(std::move(prog));
      e.type.push_back(e.tokens[ti].out);
      e.depth.push_back(d);
      fresh.push_back(e.programs.size() - 1);
    }
    e.by_depth[d] = std::move(fresh);
  }
  return e;
}

}  // namespace oracle
