#include <doctest.h>

#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracle/naive_evaluator.hpp"
#include "scenelogic/error.hpp"
#include "scenelogic/executor.hpp"
#include "scenelogic/random_program.hpp"
#include "scenelogic/reward.hpp"
#include "scenelogic/type_check.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Scene red_blue_scene() {
  return scene_of(clevr(), {clevr_object(0, "red", "cube", {-1, 0, 0.5}),
                            clevr_object(1, "red", "sphere", {0, 1, 0.5}),
                            clevr_object(2, "blue", "sphere", {1, -1, 0.5})});
}

Outcome run(const std::string& text, const Scene& s, const DomainProfile& p,
            Mode mode = Mode::strict, std::optional<std::uint64_t> seed = std::nullopt) {
  return execute(parse_program(text, Catalog::build(p)), s, p, mode, seed);
}

const TokenSpec& spec(const std::shared_ptr<const Catalog>& cat, const char* name) {
  return cat->token(*cat->find(name));
}

double chi_square_p(const std::map<std::string, std::size_t>& counts, std::size_t bins,
                    std::size_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(bins);
  double stat = 0;
  std::size_t seen = 0;
  for (const auto& [k, n] : counts) {
    stat += (n - expected) * (n - expected) / expected;
    ++seen;
  }
  stat += static_cast<double>(bins - seen) * expected;  // empty bins
  boost::math::chi_squared dist(static_cast<double>(bins - 1));
  return 1.0 - boost::math::cdf(dist, stat);
}

}  // namespace

TEST_SUITE("execute") {
  TEST_CASE("count of the empty scene") {
    const auto o = run("scene count", scene_of(clevr(), {}), clevr());
    CHECK_FALSE(o.error);
    CHECK(o.answer == Value{NumberVal{0}});
  }

  TEST_CASE("count of red objects") {
    const auto s = red_blue_scene();
    const auto o = run("scene filter_color[red] count", s, clevr());
    CHECK_FALSE(o.error);
    CHECK(o.answer == Value{NumberVal{2}});
    const auto expect = oracle::Evaluator(s, clevr()).eval({"scene", "filter_color[red]", "count"});
    CHECK(oracle::agrees(o, expect, clevr()));
  }

  TEST_CASE("ill-typed query in strict and permissive mode") {
    const auto s = red_blue_scene();
    const auto strict = run("scene query_color", s, clevr());
    CHECK(strict.error);
    CHECK_FALSE(strict.answer);
    CHECK_FALSE(strict.fallback_used);
    CHECK(strict.failure == Failure::type_mismatch);
    REQUIRE(strict.trace.size() == 2);
    CHECK_FALSE(strict.trace.back().output);

    const auto loose = run("scene query_color", s, clevr(), Mode::permissive, 0);
    CHECK(loose.error);
    CHECK(loose.fallback_used);
    REQUIRE(loose.answer);
    const auto* e = std::get_if<EntryVal>(&*loose.answer);
    REQUIRE(e);
    CHECK(e->attribute == *clevr().attribute_index("color"));
    CHECK(clevr().attribute(e->attribute).is_leaf(e->index));
    CHECK(loose.seed == std::uint64_t{0});
    CHECK(loose.rng == "mt19937_64");
    CHECK(run("scene query_color", s, clevr(), Mode::permissive, 0) == loose);
  }

  TEST_CASE("permissive mode needs a seed") {
    CHECK_THROWS_AS(run("scene count", red_blue_scene(), clevr(), Mode::permissive),
                    ExecutionError);
  }

  TEST_CASE("successful permissive runs do not fall back") {
    const auto o = run("scene count", red_blue_scene(), clevr(), Mode::permissive, 9);
    CHECK_FALSE(o.error);
    CHECK_FALSE(o.fallback_used);
    CHECK(o.answer == Value{NumberVal{3}});
  }

  TEST_CASE("unique cardinality") {
    const auto s = red_blue_scene();
    const auto o = run("scene filter_color[red] unique query_shape", s, clevr());
    CHECK(o.error);
    CHECK(o.failure == Failure::unique_cardinality);
    const auto ok = run("scene filter_color[blue] unique query_shape", s, clevr());
    CHECK(ok.answer == make_entry(clevr(), "sphere"));

    const Value two = SceneVal{ObjectSet::first(2)};
    CHECK_THROWS_AS(apply_module(spec(clevr_catalog(), "unique"), std::span(&two, 1), s, clevr()),
                    ExecutionError);
  }

  TEST_CASE("same excludes the anchor") {
    const auto s = red_blue_scene();
    const auto o = run("scene filter_color[blue] unique same_color", s, clevr());
    CHECK(o.answer == Value{SceneVal{}});
    const auto shapes = run("scene filter_color[blue] unique same_shape", s, clevr());
    CHECK(shapes.answer == Value{SceneVal{ObjectSet::single(1)}});
  }

  TEST_CASE("hierarchical filter") {
    const auto s = scene_of(minecraft(), {mc_object(0, "wolf", {0, 0}), mc_object(1, "pig", {1, 1}),
                                          mc_object(2, "tree", {-1, 2})});
    const auto o = run("scene filter_class[animal]", s, minecraft());
    REQUIRE(o.answer);
    CHECK(std::get<SceneVal>(*o.answer).members.ids() == std::vector<ObjectId>{0, 1});
    CHECK(oracle::agrees(o, oracle::Evaluator(s, minecraft()).eval({"scene", "filter_class[animal]"}),
                         minecraft()));
    CHECK(run("scene filter_class[creature] count", s, minecraft()).answer == Value{NumberVal{3}});
  }

  TEST_CASE("comparison argument order") {
    const auto s = red_blue_scene();
    CHECK(run("scene filter_color[red] count scene filter_color[blue] count greater_than", s,
              clevr()).answer == Value{BoolVal{true}});
    CHECK(run("scene filter_color[red] count scene filter_color[blue] count less_than", s,
              clevr()).answer == Value{BoolVal{false}});
  }

  TEST_CASE("trace has one post-order record per node") {
    const auto s = red_blue_scene();
    const auto p = parse_program("scene filter_color[red] scene filter_shape[sphere] intersect count",
                                 clevr_catalog());
    const auto o = execute(p, s, clevr());
    REQUIRE(o.trace.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(o.trace[i].node == i);
      CHECK(o.trace[i].token == p.token(i).name);
      CHECK(o.trace[i].inputs.size() == p.token(i).arity());
      CHECK(o.trace[i].output);
    }
    CHECK(o.trace.back().output == Value{NumberVal{1}});
    CHECK(execute(p, s, clevr()) == o);
  }

  TEST_CASE("trace json round trip") {
    const auto s = red_blue_scene();
    for (const auto& o : {run("scene filter_color[red] count", s, clevr()),
                          run("scene query_color", s, clevr()),
                          run("scene query_color", s, clevr(), Mode::permissive, 4)}) {
      const auto doc = outcome_to_json(o, clevr());
      CHECK(outcome_from_json(doc, clevr()) == o);
      CHECK(doc.contains("steps"));
      CHECK(doc.contains("answer"));
      CHECK(doc.contains("error"));
      CHECK(doc.contains("fallback_used"));
      CHECK(doc.contains("seed"));
    }
    CHECK(outcome_to_json(run("scene query_color", s, clevr()), clevr())["answer"] == "ERROR");
  }

  TEST_CASE("modules reject foreign values") {
    const auto s = red_blue_scene();
    const Value far = ObjectVal{7};
    CHECK_THROWS_AS(apply_module(spec(clevr_catalog(), "query_color"), std::span(&far, 1), s, clevr()),
                    ExecutionError);
    const Value obj = ObjectVal{0};
    CHECK_THROWS_AS(apply_module(spec(clevr_catalog(), "count"), std::span(&obj, 1), s, clevr()),
                    ExecutionError);
  }
}

TEST_SUITE("fallback") {
  TEST_CASE("domains") {
    Rng rng(1);
    std::set<bool> bools;
    std::set<std::uint32_t> numbers;
    for (int i = 0; i < 2000; ++i) {
      bools.insert(std::get<BoolVal>(fallback_answer(ValueType::boolean(), clevr(), rng)).value);
      numbers.insert(std::get<NumberVal>(fallback_answer(ValueType::number(), clevr(), rng)).value);
    }
    CHECK(bools == std::set<bool>{false, true});
    CHECK(numbers.size() == clevr().count_max() + 1);
    CHECK(*numbers.rbegin() == 10);
    CHECK_THROWS_WITH_AS(fallback_answer(ValueType::scene(), clevr(), rng), "non-answer root",
                         ExecutionError);
    CHECK_THROWS_WITH_AS(fallback_answer(ValueType::object(), clevr(), rng), "non-answer root",
                         ExecutionError);
  }

  TEST_CASE("refined entries stay inside their vocabulary") {
    Rng rng(2);
    const auto cls = *minecraft().attribute_index("class");
    for (int i = 0; i < 1000; ++i) {
      const auto e = std::get<EntryVal>(fallback_answer(ValueType::entry(static_cast<int>(cls)),
                                                        minecraft(), rng));
      CHECK(e.attribute == cls);
      CHECK(minecraft().attribute(cls).is_leaf(e.index));
    }
  }

  TEST_CASE("color draws are uniform") {
    Rng rng(3);
    const auto color = static_cast<int>(*clevr().attribute_index("color"));
    std::map<std::string, std::size_t> counts;
    for (int i = 0; i < 10000; ++i)
      ++counts[value_summary(fallback_answer(ValueType::entry(color), clevr(), rng), clevr())];
    CHECK(counts.size() == 8);
    CHECK(chi_square_p(counts, 8, 10000) > 0.01);
  }
}

TEST_SUITE("laws") {
  TEST_CASE("set algebra and existence") {
    const auto& p = clevr();
    const auto scenes = random_scenes(p, 300, 1, 10, 71);
    Rng rng(72);
    const auto cat = clevr_catalog();
    std::vector<std::string> filters;
    for (const auto& t : cat->tokens())
      if (t.op == Op::filter) filters.push_back(t.name);
    for (int i = 0; i < 1000; ++i) {
      const auto& s = scenes[rng.index(scenes.size())];
      const auto& f = filters[rng.index(filters.size())];
      const auto& g = filters[rng.index(filters.size())];
      auto count = [&](const std::string& text) {
        return std::get<NumberVal>(*run(text, s, p).answer).value;
      };
      const auto a = "scene " + f, b = "scene " + g;
      CHECK(count(a + " " + b + " union count") + count(a + " " + b + " intersect count") ==
            count(a + " count") + count(b + " count"));
      CHECK(run(a + " " + f, s, p).answer == run(a, s, p).answer);
      CHECK(run(a + " " + g, s, p).answer == run(b + " " + f, s, p).answer);
      CHECK(std::get<BoolVal>(*run(a + " exist", s, p).answer).value == (count(a + " count") > 0));
    }
  }

  TEST_CASE("same equals filter by the queried entry minus the anchor") {
    const auto& p = minecraft();
    for (const auto& s : random_scenes(p, 300, 3, 6, 73)) {
      for (ObjectId id = 0; id < s.objects.size(); ++id) {
        for (const auto& attr : {"class", "facing"}) {
          const auto same = run(std::string("scene filter_class[") + s.objects[id].entries.at("class") +
                                    "] filter_facing[" + s.objects[id].entries.at("facing") +
                                    "] unique same_" + attr, s, p);
          if (same.error) continue;  // another object shares both entries
          const auto entry = s.objects[id].entries.at(attr);
          auto expect = std::get<SceneVal>(
              *run(std::string("scene filter_") + attr + "[" + entry + "]", s, p).answer).members;
          expect.erase(id);
          CHECK(std::get<SceneVal>(*same.answer).members == expect);
        }
      }
    }
  }

  TEST_CASE("well-typed programs never mismatch at runtime") {
    Rng rng(74);
    const auto scenes = random_scenes(clevr(), 50, 1, 10, 75);
    for (int i = 0; i < 2000; ++i) {
      const auto prog = random_program(clevr_catalog(), 8, rng);
      const auto o = execute(prog, scenes[i % scenes.size()], clevr());
      CHECK(o.failure != Failure::type_mismatch);
      CHECK(o.error == (o.failure == Failure::unique_cardinality));
    }
  }

  TEST_CASE("agrees with the naive evaluator up to depth 5") {
    for (const auto* p : {&clevr(), &minecraft()}) {
      const auto cat = Catalog::build(*p);
      Rng rng(76);
      const auto scenes = random_scenes(*p, 100, 1, 5, 77);
      std::size_t disagreements = 0;
      for (int i = 0; i < 2000; ++i) {
        const auto prog = random_program(cat, 5, rng);
        const auto names = token_names(prog);
        for (std::size_t k = 0; k < 10; ++k) {
          const auto& s = scenes[(i * 10 + k) % scenes.size()];
          if (!oracle::agrees(execute(prog, s, *p), oracle::Evaluator(s, *p).eval(names), *p))
            ++disagreements;
        }
      }
      CHECK(disagreements == 0);
    }
  }

  TEST_CASE("scene index agrees with a direct scan") {
    for (const auto& s : random_scenes(minecraft(), 100, 1, 6, 78)) {
      const SceneIndex idx(s, minecraft());
      for (std::size_t a = 0; a < minecraft().attributes().size(); ++a) {
        const auto& attr = minecraft().attribute(a);
        for (std::size_t e = 0; e < attr.extended.size(); ++e) {
          const auto leaves = oracle::leaves(minecraft(), attr.extended[e]);
          for (ObjectId o = 0; o < s.objects.size(); ++o)
            CHECK(idx.members(a, e).contains(o) == (leaves.count(s.objects[o].entries.at(attr.name)) > 0));
        }
      }
      for (std::size_t r = 0; r < minecraft().relations().size(); ++r)
        for (ObjectId o = 0; o < s.objects.size(); ++o)
          CHECK(idx.related(r, o) == relation_set(s, o, minecraft().relations()[r].name, minecraft()));
    }
  }
}

TEST_SUITE("reward") {
  TEST_CASE("answer reward") {
    CHECK(answer_reward(Value{NumberVal{3}}, Value{NumberVal{3}}) == 1);
    CHECK(answer_reward(std::nullopt, Value{BoolVal{true}}) == 0);
    CHECK(answer_reward(make_entry(clevr(), "red"), make_entry(clevr(), "blue")) == 0);
    CHECK(answer_reward(Value{NumberVal{1}}, Value{BoolVal{true}}) == 0);
  }

  TEST_CASE("baseline update") {
    CHECK(update_baseline(0.0, 0) == 0.0);
    CHECK(update_baseline(1.0, 1) == 1.0);
    CHECK(update_baseline(0.5, 1) == 0.9 * 0.5 + 0.1 * 1);
    CHECK(update_baseline(0.5, 1) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK_THROWS_AS(update_baseline(1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(update_baseline(0.5, 2), std::invalid_argument);
  }
}
