#include "scenelogic/executor.hpp"

#include <array>
#include <iomanip>
#include <sstream>

#include "scenelogic/error.hpp"

namespace scenelogic {

using ojson = nlohmann::ordered_json;

std::string_view failure_name(Failure f) {
  switch (f) {
    case Failure::none: return "none";
    case Failure::type_mismatch: return "type_mismatch";
    case Failure::unique_cardinality: return "unique_cardinality";
  }
  return "?";
}

SceneIndex::SceneIndex(const Scene& scene, const DomainProfile& profile)
    : profile_(&profile),
      count_(scene.objects.size()),
      n_attr_(profile.attributes().size()) {
  if (auto v = validate_scene(scene, profile); !v.empty())
    throw SceneError("invalid scene " + scene.scene_id + ": " + v.front().rule + " " +
                     v.front().detail);
  entries_.resize(count_ * n_attr_);
  members_.resize(n_attr_);
  for (std::size_t a = 0; a < n_attr_; ++a) {
    const Attribute& attr = profile.attribute(a);
    members_[a].assign(attr.extended.size(), ObjectSet{});
    for (std::size_t i = 0; i < count_; ++i) {
      const auto leaf = *attr.find(scene.objects[i].entries.at(attr.name));
      entries_[i * n_attr_ + a] = static_cast<std::uint16_t>(leaf);
      for (std::size_t e = 0; e < attr.extended.size(); ++e)
        if ((attr.leaf_masks[e] >> leaf) & 1u) members_[a][e].insert(static_cast<ObjectId>(i));
    }
  }
  related_.resize(profile.relations().size() * count_);
  for (std::size_t r = 0; r < profile.relations().size(); ++r)
    for (std::size_t i = 0; i < count_; ++i)
      related_[r * count_ + i] = relation_set(scene, static_cast<ObjectId>(i),
                                              profile.relations()[r].name, profile);
}

namespace {

bool args_match(const TokenSpec& t, const Value* args, Typing typing) {
  for (std::size_t k = 0; k < t.arity(); ++k)
    if (!type_matches(t.inputs[k], type_of(args[k]), typing)) return false;
  return true;
}

// Module semantics. `args` points at arity() values already type-checked.
Failure apply(const TokenSpec& t, const Value* args, const SceneIndex& s, Value& out) {
  switch (t.op) {
    case Op::scene:
      out = SceneVal{s.all()};
      return Failure::none;
    case Op::unique: {
      const ObjectSet m = std::get<SceneVal>(args[0]).members;
      if (m.size() != 1) return Failure::unique_cardinality;
      out = ObjectVal{m.front()};
      return Failure::none;
    }
    case Op::union_:
      out = SceneVal{std::get<SceneVal>(args[0]).members | std::get<SceneVal>(args[1]).members};
      return Failure::none;
    case Op::intersect:
      out = SceneVal{std::get<SceneVal>(args[0]).members & std::get<SceneVal>(args[1]).members};
      return Failure::none;
    case Op::count:
      out = NumberVal{static_cast<std::uint32_t>(std::get<SceneVal>(args[0]).members.size())};
      return Failure::none;
    case Op::exist:
      out = BoolVal{!std::get<SceneVal>(args[0]).members.empty()};
      return Failure::none;
    case Op::equal_attribute:
      out = BoolVal{std::get<EntryVal>(args[0]) == std::get<EntryVal>(args[1])};
      return Failure::none;
    case Op::equal_integer:
      out = BoolVal{std::get<NumberVal>(args[0]).value == std::get<NumberVal>(args[1]).value};
      return Failure::none;
    case Op::greater_than:
      out = BoolVal{std::get<NumberVal>(args[0]).value > std::get<NumberVal>(args[1]).value};
      return Failure::none;
    case Op::less_than:
      out = BoolVal{std::get<NumberVal>(args[0]).value < std::get<NumberVal>(args[1]).value};
      return Failure::none;
    case Op::query: {
      const ObjectId o = std::get<ObjectVal>(args[0]).id;
      out = EntryVal{static_cast<std::uint16_t>(t.attribute), s.entry(o, t.attribute)};
      return Failure::none;
    }
    case Op::relate: {
      const ObjectId o = std::get<ObjectVal>(args[0]).id;
      out = SceneVal{s.related(t.relation, o)};
      return Failure::none;
    }
    case Op::same: {
      const ObjectId o = std::get<ObjectVal>(args[0]).id;
      ObjectSet m = s.members(t.attribute, s.entry(o, t.attribute));
      m.erase(o);
      out = SceneVal{m};
      return Failure::none;
    }
    case Op::filter:
      out = SceneVal{std::get<SceneVal>(args[0]).members & s.members(t.attribute, t.entry)};
      return Failure::none;
  }
  return Failure::type_mismatch;
}

// Objects in arguments must come from this scene; values built outside the
// executor (apply_module callers) are checked here.
bool in_scene(const Value* args, std::size_t n, const SceneIndex& s) {
  for (std::size_t k = 0; k < n; ++k) {
    if (auto* o = std::get_if<ObjectVal>(&args[k]); o && o->id >= s.object_count())
      return false;
    if (auto* sc = std::get_if<SceneVal>(&args[k]); sc && !(sc->members - s.all()).empty())
      return false;
  }
  return true;
}

// Value stack with inline storage for typical program sizes.
class ValueStack {
 public:
  explicit ValueStack(std::size_t capacity) {
    if (capacity > inline_.size()) heap_.resize(capacity);
    data_ = capacity > inline_.size() ? heap_.data() : inline_.data();
  }
  Value* top(std::size_t k) { return data_ + size_ - k; }
  void pop(std::size_t k) { size_ -= k; }
  void push(const Value& v) { data_[size_++] = v; }
  Value& bottom() { return data_[0]; }

 private:
  std::array<Value, 32> inline_;
  std::vector<Value> heap_;
  Value* data_;
  std::size_t size_ = 0;
};

}  // namespace

Outcome Executor::run(const Program& program, const SceneIndex& scene,
                      const ExecOptions& options) const {
  if (program.empty()) throw ExecutionError("cannot execute an empty program");
  if (&scene.profile() != profile_ && scene.profile().name() != profile_->name())
    throw ExecutionError("scene index built for another profile");
  if (program.catalog().profile_name() != profile_->name())
    throw ExecutionError("program catalog belongs to profile " +
                         program.catalog().profile_name());
  if (options.mode == Mode::permissive && !options.seed)
    throw ExecutionError("permissive mode needs a seed");

  Outcome outcome;
  if (options.mode == Mode::permissive) {
    outcome.seed = options.seed;
    outcome.rng = Rng::kAlgorithm;
  }

  const Catalog& cat = program.catalog();
  const auto& nodes = program.nodes();
  if (options.record_trace) outcome.trace.reserve(nodes.size());
  ValueStack stack(nodes.size());

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TokenSpec& t = cat.token(nodes[i].token);
    const std::size_t k = t.arity();
    Value* args = stack.top(k);
    Value out;
    Failure f = args_match(t, args, options.typing) ? apply(t, args, scene, out)
                                                    : Failure::type_mismatch;
    if (options.record_trace) {
      StepRecord step{i, t.name, std::vector<Value>(args, args + k), std::nullopt};
      if (f == Failure::none) step.output = out;
      outcome.trace.push_back(std::move(step));
    }
    if (f != Failure::none) {
      outcome.error = true;
      outcome.failure = f;
      break;
    }
    stack.pop(k);
    stack.push(out);
  }

  if (!outcome.error) {
    outcome.answer = stack.bottom();
    return outcome;
  }
  if (options.mode == Mode::permissive) {
    const ValueType root = program.token(program.root()).output;
    if (is_answer_type(root.kind)) {
      Rng rng(*options.seed);
      outcome.answer = fallback_answer(root, *profile_, rng);
      outcome.fallback_used = true;
    }
  }
  return outcome;
}

Outcome execute(const Program& program, const Scene& scene,
                const DomainProfile& profile, Mode mode,
                std::optional<std::uint64_t> seed) {
  SceneIndex index(scene, profile);
  ExecOptions opts;
  opts.mode = mode;
  opts.seed = seed;
  return Executor(profile).run(program, index, opts);
}

Value apply_module(const TokenSpec& token, std::span<const Value> args,
                   const SceneIndex& scene, Typing typing) {
  if (args.size() != token.arity())
    throw ExecutionError(token.name + ": expected " + std::to_string(token.arity()) +
                         " arguments, got " + std::to_string(args.size()));
  if (!args_match(token, args.data(), typing))
    throw ExecutionError(token.name + ": type mismatch");
  if (!in_scene(args.data(), args.size(), scene))
    throw ExecutionError(token.name + ": argument refers to objects outside the scene");
  Value out;
  if (apply(token, args.data(), scene, out) == Failure::unique_cardinality)
    throw ExecutionError(token.name + ": input does not hold exactly one object");
  return out;
}

Value apply_module(const TokenSpec& token, std::span<const Value> args,
                   const Scene& scene, const DomainProfile& profile) {
  return apply_module(token, args, SceneIndex(scene, profile));
}

Value fallback_answer(ValueType type, const DomainProfile& profile, Rng& rng) {
  switch (type.kind) {
    case ValueKind::boolean:
      return BoolVal{rng.coin()};
    case ValueKind::number:
      return NumberVal{static_cast<std::uint32_t>(rng.index(profile.count_max() + 1))};
    case ValueKind::entry: {
      if (type.attribute >= 0) {
        const auto& a = profile.attribute(type.attribute);
        return EntryVal{static_cast<std::uint16_t>(type.attribute),
                        static_cast<std::uint16_t>(rng.index(a.leaf_count()))};
      }
      // Unrefined entry: any leaf of any attribute.
      std::size_t total = 0;
      for (const auto& a : profile.attributes()) total += a.leaf_count();
      std::size_t pick = rng.index(total);
      for (std::size_t ai = 0; ai < profile.attributes().size(); ++ai) {
        const auto n = profile.attribute(ai).leaf_count();
        if (pick < n)
          return EntryVal{static_cast<std::uint16_t>(ai), static_cast<std::uint16_t>(pick)};
        pick -= n;
      }
      break;
    }
    case ValueKind::scene:
    case ValueKind::object:
      break;
  }
  throw ExecutionError("non-answer root");
}

ojson outcome_to_json(const Outcome& outcome, const DomainProfile& profile) {
  ojson doc;
  ojson steps = ojson::array();
  for (const auto& s : outcome.trace) {
    ojson step;
    step["node"] = s.node;
    step["token"] = s.token;
    ojson inputs = ojson::array();
    for (const auto& v : s.inputs) inputs.push_back(value_to_json(v, profile));
    step["inputs"] = inputs;
    step["output"] = s.output ? value_to_json(*s.output, profile) : ojson("ERROR");
    steps.push_back(std::move(step));
  }
  doc["steps"] = steps;
  doc["answer"] = outcome.answer ? value_to_json(*outcome.answer, profile) : ojson("ERROR");
  doc["error"] = outcome.error;
  doc["fallback_used"] = outcome.fallback_used;
  doc["failure"] = failure_name(outcome.failure);
  doc["seed"] = outcome.seed ? ojson(*outcome.seed) : ojson(nullptr);
  doc["rng"] = outcome.rng;
  return doc;
}

Outcome outcome_from_json(const ojson& doc, const DomainProfile& profile) {
  auto value_or_error = [&](const ojson& v) -> std::optional<Value> {
    if (v.is_string() && v.get<std::string>() == "ERROR") return std::nullopt;
    return value_from_json(v, profile);
  };
  try {
    Outcome o;
    for (const auto& s : doc.at("steps")) {
      StepRecord step;
      step.node = s.at("node").get<std::size_t>();
      step.token = s.at("token").get<std::string>();
      for (const auto& v : s.at("inputs")) step.inputs.push_back(value_from_json(v, profile));
      step.output = value_or_error(s.at("output"));
      o.trace.push_back(std::move(step));
    }
    o.answer = value_or_error(doc.at("answer"));
    o.error = doc.at("error").get<bool>();
    o.fallback_used = doc.at("fallback_used").get<bool>();
    const auto failure = doc.at("failure").get<std::string>();
    for (auto f : {Failure::none, Failure::type_mismatch, Failure::unique_cardinality})
      if (failure_name(f) == failure) o.failure = f;
    if (!doc.at("seed").is_null()) o.seed = doc.at("seed").get<std::uint64_t>();
    o.rng = doc.at("rng").get<std::string>();
    return o;
  } catch (const ojson::exception& e) {
    throw ExecutionError(std::string("malformed trace JSON: ") + e.what());
  }
}

std::string render_trace_table(const Outcome& outcome, const DomainProfile& profile) {
  std::ostringstream out;
  out << std::left << std::setw(5) << "step" << std::setw(26) << "token" << std::setw(30)
      << "inputs"
      << "output\n";
  std::size_t n = 0;
  for (const auto& s : outcome.trace) {
    std::string inputs;
    for (const auto& v : s.inputs) {
      if (!inputs.empty()) inputs += ", ";
      inputs += value_summary(v, profile);
    }
    if (inputs.empty()) inputs = "-";
    out << std::setw(5) << n++ << std::setw(26) << s.token << std::setw(30) << inputs
        << (s.output ? value_summary(*s.output, profile) : std::string("ERROR")) << '\n';
  }
  out << "answer: " << (outcome.answer ? value_summary(*outcome.answer, profile) : "ERROR");
  if (outcome.error) out << "  [error: " << failure_name(outcome.failure) << "]";
  if (outcome.fallback_used) out << "  [fallback, seed " << *outcome.seed << "]";
  out << '\n';
  return out.str();
}

}  // namespace scenelogic
