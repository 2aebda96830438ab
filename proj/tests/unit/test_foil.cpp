#include <doctest.h>

#include <cmath>
#include <random>

#include "lawmine/foil.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lawmine;

TEST_SUITE_BEGIN("foil");

TEST_CASE("information gain matches the formula") {
  CHECK(information_gain({2, 2, 2, 0, 2}) == doctest::Approx(2.0).epsilon(1e-12));
  // purity unchanged -> zero gain whatever T++ is
  CHECK(information_gain({4, 4, 2, 2, 7}) == 0.0);
  CHECK(information_gain({4, 4, 3, 1, 3}) ==
        doctest::Approx(1.7548875021634682).epsilon(1e-12));
  CHECK(std::isinf(information_gain({4, 4, 0, 5, 0})));
  CHECK(information_gain({4, 4, 0, 5, 0}) < 0);
  CHECK_THROWS_AS(information_gain({0, 4, 1, 1, 1}), Error);
}

TEST_CASE("information gain tracks an arbitrary-precision oracle") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 300; ++i) {
    GainState s;
    s.p0 = 1 + std::int64_t(rng() % 500);
    s.n0 = std::int64_t(rng() % 500);
    s.p1 = std::int64_t(rng() % 800);
    s.n1 = std::int64_t(rng() % 800);
    s.t_plus_plus = std::int64_t(rng() % (s.p0 + 1));
    double got = information_gain(s);
    double want = oracles::gain_oracle(s.p0, s.n0, s.p1, s.n1, s.t_plus_plus);
    if (s.p1 == 0) {
      CHECK(std::isinf(got));
    } else if (want == 0.0) {
      CHECK(std::fabs(got) < 1e-12);
    } else {
      CHECK(std::fabs(got - want) <= 1e-12 * std::fabs(want));
    }
  }
}

namespace {

FactStore binary_greater_store() {
  FactStore store;
  store.add_type(DataType::numeric("price"));
  store.add_signature(TypedSignature{"greater_s", {"price", "price"}, true});
  store.add_constraint(
      InterArgConstraint{"greater_s", InterArgConstraint::Kind::all_args_distinct, {}});
  store.add_fact("greater_s", {Value::number(2), Value::number(1)});
  return store;
}

}  // namespace

TEST_CASE("variablization enumeration respects budgets and constraints") {
  FactStore store = binary_greater_store();
  std::vector<TypedVar> old_vars = {{"x", "price"}, {"y", "price"}};
  LearnConfig config;

  SUBCASE("no predicates means no candidates") {
    FactStore empty;
    CHECK(generate_candidate_literals(empty, old_vars, 0, config).empty());
  }

  SUBCASE("two positive variablizations at budget zero, four with negations") {
    auto candidates = generate_candidate_literals(store, old_vars, 0, config);
    REQUIRE(candidates.size() == 4);
    // canonical order: slot assignment first, positive before negated
    CHECK_FALSE(candidates[0].negated);
    CHECK(candidates[1].negated);
    std::vector<TypedVar> nv;
    CHECK(to_text(instantiate_candidate(candidates[0], store, old_vars, 0, &nv)) ==
          "greater_s(x, y)");
    CHECK(to_text(instantiate_candidate(candidates[2], store, old_vars, 0, &nv)) ==
          "greater_s(y, x)");
    config.allow_negated = false;
    CHECK(generate_candidate_literals(store, old_vars, 0, config).size() == 2);
  }

  SUBCASE("the all-new assignment is never emitted") {
    auto candidates = generate_candidate_literals(store, old_vars, 2, config);
    for (const auto& c : candidates) {
      bool any_old = false;
      for (const auto& s : c.slots) any_old |= !s.is_new;
      CHECK(any_old);
    }
  }

  SUBCASE("diagonal assignments removed by all_args_distinct") {
    auto candidates = generate_candidate_literals(store, old_vars, 0, config);
    for (const auto& c : candidates) CHECK(c.slots[0].index != c.slots[1].index);
  }
}

TEST_CASE("candidate gain equals explicit binding enumeration on small tasks") {
  std::mt19937_64 rng(43);
  LearnConfig config;
  int checked = 0;
  for (int round = 0; round < 25; ++round) {
    testkit::RandomKb kb = testkit::make_random_kb(rng);
    kb.store.freeze();
    const std::string& target = kb.predicates[0];
    const TypedSignature& sig = *kb.store.signature(target);
    std::vector<TypedVar> vars;
    for (int i = 0; i < sig.arity(); ++i) vars.push_back({"x" + std::to_string(i), sig.arg_types[i]});
    std::vector<LearnTuple> pos, neg;
    for (int i = 0; i < 4; ++i)
      pos.push_back({testkit::make_random_example(kb, target, rng), i});
    for (int i = 0; i < 4; ++i)
      neg.push_back({testkit::make_random_example(kb, target, rng), i});
    auto candidates = generate_candidate_literals(kb.store, vars, 1, config);
    for (size_t ci = 0; ci < candidates.size() && ci < 12; ++ci) {
      std::vector<TypedVar> new_vars;
      Literal lit = instantiate_candidate(candidates[ci], kb.store, vars, 0, &new_vars);
      GainState st = evaluate_candidate(lit, vars, new_vars, pos, neg, kb.store, config, nullptr);
      // brute force: enumerate assignments of the fresh variables over typed
      // constants, checking the literal against raw tuples
      auto count_for = [&](const std::vector<LearnTuple>& tuples, std::int64_t* extended) {
        std::int64_t total = 0;
        for (const auto& t : tuples) {
          std::map<std::string, Value> binding;
          for (size_t i = 0; i < vars.size(); ++i) binding[vars[i].name] = t.values[i];
          std::int64_t count = 0;
          std::function<void(size_t)> walk = [&](size_t vi) {
            if (vi == new_vars.size()) {
              Literal positive = lit;
              positive.negated = false;
              if (oracles::oracle_literal_ground(positive, binding, kb.store)) ++count;
              return;
            }
            for (const auto& c : kb.store.constants(new_vars[vi].type)) {
              binding[new_vars[vi].name] = c;
              walk(vi + 1);
            }
            binding.erase(new_vars[vi].name);
          };
          walk(0);
          std::int64_t contribution;
          if (!lit.negated)
            contribution = new_vars.empty() ? (count > 0 ? 1 : 0) : count;
          else
            contribution = count == 0 ? 1 : 0;
          total += contribution;
          if (extended && contribution > 0) ++*extended;
        }
        return total;
      };
      std::int64_t tpp = 0;
      std::int64_t p1 = count_for(pos, &tpp);
      std::int64_t n1 = count_for(neg, nullptr);
      CHECK(st.p1 == p1);
      CHECK(st.n1 == n1);
      CHECK(st.t_plus_plus == tpp);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("choose_literal picks the maximum and breaks ties canonically") {
  Knowledge k = testkit::updown_fixture();
  LearnConfig config;
  std::vector<TypedVar> vars = {{"x0", "price"}, {"x1", "price"}, {"x2", "price"}};
  std::vector<LearnTuple> pos = {
      {{Value::number(34), Value::number(38), Value::number(35)}, 0},
      {{Value::number(35.5), Value::number(36), Value::number(34)}, 1}};
  std::vector<LearnTuple> neg = {
      {{Value::number(38), Value::number(35), Value::number(35.5)}, 0},
      {{Value::number(36), Value::number(37), Value::number(38)}, 1}};
  config.exclude_predicates.insert("updown");
  auto candidates = generate_candidate_literals(k.store, vars, 0, config);
  LearnStats stats;
  ChooseResult best = choose_literal(candidates, vars, pos, neg, k.store, config, &stats);
  // down(x1, x2) and up(x2, x1) tie at gain 2; 'down' is canonically earlier
  std::vector<TypedVar> nv;
  CHECK(to_text(instantiate_candidate(candidates[best.index], k.store, vars, 0, &nv)) ==
        "down(x1, x2)");
  CHECK(best.gain == doctest::Approx(2.0));
  CHECK(best.state.n1 == 0);
}

TEST_CASE("pruning changes evaluation counts, never the winner") {
  Knowledge k = testkit::updown_fixture();
  LearnConfig with_prune;
  with_prune.exclude_predicates.insert("updown");
  LearnConfig no_prune = with_prune;
  no_prune.prune = false;
  std::vector<TypedVar> vars = {{"x0", "price"}, {"x1", "price"}, {"x2", "price"}};
  std::vector<LearnTuple> pos = {
      {{Value::number(34), Value::number(38), Value::number(35)}, 0},
      {{Value::number(35.5), Value::number(36), Value::number(34)}, 1}};
  std::vector<LearnTuple> neg = {
      {{Value::number(38), Value::number(35), Value::number(35.5)}, 0},
      {{Value::number(36), Value::number(37), Value::number(38)}, 1}};
  auto candidates = generate_candidate_literals(k.store, vars, 2, with_prune);
  LearnStats pruned_stats, full_stats;
  ChooseResult pruned =
      choose_literal(candidates, vars, pos, neg, k.store, with_prune, &pruned_stats);
  ChooseResult full =
      choose_literal(candidates, vars, pos, neg, k.store, no_prune, &full_stats);
  CHECK(pruned.index == full.index);
  CHECK(pruned.gain == full.gain);
  CHECK(pruned_stats.gain_evaluations <= full_stats.gain_evaluations);
}

TEST_CASE("foil learns the window rule from tables of pairs") {
  Knowledge k = testkit::updown_fixture();
  LearnConfig config;
  LearnResult result =
      foil_learn(k.task->pos, k.task->neg, k.task->target, k.store, config);
  CHECK(to_text(result.rule) == "updown(x0, x1, x2) <- down(x1, x2)");
  CHECK(result.uncovered_pos.empty());
  // extensional equivalence with the two-literal pair rule on all examples
  HornClause reference = parse_clause("updown(x, y, z) <- up(x, y) & down(y, z)", k.store);
  for (const auto& e : k.task->pos) {
    CHECK(rule_covers(result.rule, e, k.store));
    CHECK(clause_covers(reference, e, k.store));
  }
  for (const auto& e : k.task->neg) {
    CHECK_FALSE(rule_covers(result.rule, e, k.store));
    CHECK_FALSE(clause_covers(reference, e, k.store));
  }
  // trace: one line per conjoined literal with seven tab-separated fields
  CHECK(result.trace.find("down(x1, x2)\t2\t2\t2\t0\t2\t2\n") != std::string::npos);
}

TEST_CASE("no positives is a precondition error") {
  Knowledge k = testkit::updown_fixture();
  CHECK_THROWS_AS(foil_learn({}, k.task->neg, "updown", k.store, LearnConfig{}), Error);
}

TEST_CASE("planted two-literal rule is recovered exactly on 200 examples") {
  std::mt19937_64 rng(47);
  FactStore store;
  store.add_type(DataType::numeric("price"));
  store.add_signature(TypedSignature{"greater_s", {"price", "price"}, true});
  store.add_signature(TypedSignature{"volume_up", {"price"}, true});
  store.add_signature(TypedSignature{"rises", {"price", "price"}, true});
  for (int a = 1; a <= 20; ++a) {
    store.add_constant("price", Value::number(a));
    for (int b = 1; b <= 20; ++b)
      if (a > b) store.add_fact("greater_s", {Value::number(a), Value::number(b)});
  }
  for (int a = 1; a <= 20; ++a)
    if (rng() % 2) store.add_fact("volume_up", {Value::number(a)});
  store.freeze();

  std::vector<Tuple> pos, neg;
  std::set<Tuple> seen;
  while (pos.size() + neg.size() < 200) {
    Tuple e = {Value::number(double(1 + rng() % 20)), Value::number(double(1 + rng() % 20))};
    if (!seen.insert(e).second) continue;
    bool body = store.tuples("greater_s").count(e) &&
                store.tuples("volume_up").count({e[0]});
    (body ? pos : neg).push_back(e);
    if (seen.size() == 400) break;  // all pairs exhausted
  }
  REQUIRE(pos.size() >= 20);
  LearnResult result = foil_learn(pos, neg, "rises", store, LearnConfig{});
  CHECK(result.uncovered_pos.empty());
  for (const auto& e : pos) CHECK(rule_covers(result.rule, e, store));
  for (const auto& e : neg) CHECK_FALSE(rule_covers(result.rule, e, store));
}

TEST_CASE("accepted clauses cover no negatives at zero tolerance") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 15; ++round) {
    testkit::RandomKb kb = testkit::make_random_kb(rng);
    kb.store.freeze();
    const std::string& target = kb.predicates.back();
    std::set<Tuple> pos_set, neg_set;
    for (int i = 0; i < 6; ++i) pos_set.insert(testkit::make_random_example(kb, target, rng));
    for (int i = 0; i < 6; ++i) {
      Tuple e = testkit::make_random_example(kb, target, rng);
      if (!pos_set.count(e)) neg_set.insert(e);
    }
    std::vector<Tuple> pos(pos_set.begin(), pos_set.end());
    std::vector<Tuple> neg(neg_set.begin(), neg_set.end());
    if (pos.empty()) continue;
    try {
      LearnResult result = foil_learn(pos, neg, target, kb.store, LearnConfig{});
      for (const auto& clause : result.rule.clauses)
        for (const auto& e : neg) CHECK_FALSE(clause_covers(clause, e, kb.store));
    } catch (const Error& e) {
      CHECK((e.code() == Err::Unlearnable || e.code() == Err::NoUsefulLiteral));
    }
  }
}

TEST_CASE("learning is deterministic") {
  Knowledge k = testkit::updown_fixture();
  LearnConfig config;
  LearnResult a = foil_learn(k.task->pos, k.task->neg, k.task->target, k.store, config);
  LearnResult b = foil_learn(k.task->pos, k.task->neg, k.task->target, k.store, config);
  CHECK(to_text(a.rule) == to_text(b.rule));
  CHECK(a.trace == b.trace);
  CHECK(a.stats.gain_evaluations == b.stats.gain_evaluations);
}

TEST_CASE("time budget aborts the search") {
  Knowledge k = testkit::updown_fixture();
  LearnConfig config;
  config.time_budget = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(foil_learn(k.task->pos, k.task->neg, k.task->target, k.store, config),
                  Error);
}

TEST_SUITE_END();
