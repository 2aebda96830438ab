#include <doctest.h>

#include "lawmine/logic.hpp"

using namespace lawmine;

TEST_SUITE_BEGIN("logic");

TEST_CASE("value ordering and text round trip") {
  CHECK(Value::number(1.5) < Value::number(2.0));
  CHECK(Value::number(999.0) < Value::symbol("a"));  // numbers first
  CHECK(Value::symbol("a") < Value::symbol("b"));
  CHECK(Value::parse("60.6").is_number());
  CHECK(Value::parse("1999-01-04").symbol() == "1999-01-04");
  CHECK(Value::parse("mon").symbol() == "mon");
  CHECK(Value::number(900000.0).str() == "900000");
  CHECK(Value::number(60.6).str() == "60.6");
  CHECK(Value::parse(Value::number(60.6).str()) == Value::number(60.6));
  CHECK(Value::number(-0.0).str() == "0");
}

TEST_CASE("data type invariants") {
  CHECK_THROWS_AS(DataType::cyclic("bad", {"only"}), Error);
  DataType weekday = DataType::cyclic("weekday", {"mon", "tue", "wed", "thu", "fri"});
  CHECK(weekday.period == 5);
  CHECK(weekday.element_index("wed") == 2);
  CHECK_FALSE(weekday.admits(Value::symbol("sat")));
  CHECK(weekday.admits(Value::symbol("fri")));

  DataType price = DataType::numeric("price");
  CHECK(price.admits(Value::number(60.6)));
  CHECK_FALSE(price.admits(Value::symbol("high")));
  CHECK(price.relations.count("<") == 1);  // ordered scales carry an order vocabulary

  DataType date = DataType::open_symbolic("date");
  CHECK(date.admits(Value::symbol("1999-01-04")));
  CHECK_FALSE(date.admits(Value::number(19990104)));
}

TEST_CASE("cyclic distance follows the trading week") {
  DataType weekday = DataType::cyclic("weekday", {"mon", "tue", "wed", "thu", "fri"});
  CHECK(cyclic_distance("mon", "tue", weekday) == 1);
  CHECK(cyclic_distance("fri", "mon", weekday) == 1);  // wrap into next week
  CHECK(cyclic_distance("mon", "fri", weekday) == 4);
  CHECK(cyclic_distance("wed", "wed", weekday) == 0);
  CHECK_THROWS_AS(cyclic_distance("sat", "mon", weekday), Error);
  DataType price = DataType::numeric("price");
  CHECK_THROWS_AS(cyclic_distance("mon", "tue", price), Error);
}

TEST_CASE("cyclic distance properties") {
  DataType weekday = DataType::cyclic("weekday", {"mon", "tue", "wed", "thu", "fri"});
  for (const auto& a : weekday.elements) {
    for (const auto& b : weekday.elements) {
      int ab = cyclic_distance(a, b, weekday);
      int ba = cyclic_distance(b, a, weekday);
      CHECK(ab >= 0);
      CHECK(ab < weekday.period);
      CHECK((ab + ba) % weekday.period == 0);
    }
    // advancing one step period times returns to the start element
    std::string current = a;
    for (int step = 0; step < weekday.period; ++step) {
      int idx = weekday.element_index(current);
      current = weekday.elements[(idx + 1) % weekday.period];
    }
    CHECK(current == a);
  }
}

TEST_CASE("clause and rule validation") {
  Literal head{"target", {Variable{"x", "price"}, Variable{"y", "price"}}, false};
  Literal body{"up", {Variable{"x", "price"}, Variable{"y", "price"}}, false};
  HornClause ok{head, {body}};
  CHECK_NOTHROW(ok.validate());

  HornClause negated_head{Literal{"target", {Variable{"x", "price"}}, true}, {}};
  CHECK_THROWS_AS(negated_head.validate(), Error);

  HornClause constant_head{
      Literal{"target", {Term{Constant{Value::number(1), "price"}}}, false}, {}};
  CHECK_THROWS_AS(constant_head.validate(), Error);

  Rule mismatched;
  mismatched.clauses.push_back(ok);
  mismatched.clauses.push_back(
      HornClause{Literal{"other", {Variable{"x", "price"}, Variable{"y", "price"}}, false}, {}});
  CHECK_THROWS_AS(mismatched.validate(), Error);
}

TEST_CASE("printing literals and clauses") {
  Literal lit{"up",
              {Variable{"x", "price"},
               Term{FuncTerm{"sub", {Variable{"y", "price"}, Variable{"x", "price"}}, "price"}}},
              true};
  CHECK(to_text(lit) == "!up(x, sub(y, x))");
  HornClause clause{Literal{"t", {Variable{"x", "price"}}, false}, {}};
  CHECK(to_text(clause) == "t(x) <- true");
}

TEST_CASE("builtin predicates and functions") {
  CHECK(eval_builtin_predicate("greater", {Value::number(6), Value::number(5)}));
  CHECK_FALSE(eval_builtin_predicate("greater", {Value::number(5), Value::number(5)}));
  CHECK(eval_builtin_predicate("equal", {Value::symbol("a"), Value::symbol("a")}));
  CHECK(apply_builtin_function("sub", {Value::number(3), Value::number(1)}) ==
        Value::number(2));
  CHECK_THROWS_AS(apply_builtin_function("div", {Value::number(3), Value::number(1)}), Error);
}

TEST_SUITE_END();
