#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lawmine/backtest.hpp"
#include "lawmine/eval.hpp"
#include "lawmine/focl.hpp"
#include "lawmine/mmdr.hpp"

namespace py = pybind11;
using namespace lawmine;

namespace {

Sign sign_from_string(const std::string& s) {
  if (s == "up") return Sign::up;
  if (s == "down") return Sign::down;
  if (s == "abstain") return Sign::abstain;
  throw py::value_error("sign must be up/down/abstain, got '" + s + "'");
}

std::vector<Sign> signs_from_strings(const std::vector<std::string>& in) {
  std::vector<Sign> out;
  out.reserve(in.size());
  for (const auto& s : in) out.push_back(sign_from_string(s));
  return out;
}

Tuple tuple_from_tokens(const std::vector<std::string>& tokens) {
  Tuple t;
  for (const auto& tok : tokens) t.push_back(Value::parse(tok));
  return t;
}

// Knowledge-file driven wrapper exposing the main operations with plain
// string/float types.
struct PyKnowledge {
  Knowledge knowledge;

  explicit PyKnowledge(const std::string& text) : knowledge(parse_knowledge_text(text)) {
    knowledge.store.freeze();
  }

  bool covers(const std::string& clause_text, const std::vector<std::string>& example) {
    HornClause clause = parse_clause(clause_text, knowledge.store);
    return clause_covers(clause, tuple_from_tokens(example), knowledge.store);
  }

  bool literal_true(const std::string& literal_text) {
    Literal lit = parse_literal(literal_text, knowledge.store);
    return evaluate_literal(lit, Binding{}, knowledge.store);
  }

  std::string learn(const std::string& learner) {
    FoclTask task = FoclTask::from_knowledge(knowledge);
    LearnConfig config;
    LearnResult result;
    if (learner == "foil") {
      task.initial_rules.clear();
      result = foil_learn(task.pos, task.neg, task.target, knowledge.store, config);
    } else if (learner == "focl") {
      result = focl_learn(task, knowledge.store, config);
    } else {
      throw py::value_error("learner must be foil or focl");
    }
    return to_text(result.rule);
  }

  std::string describe() const { return describe_knowledge(knowledge); }
};

std::string py_mine_csv(const std::string& csv_text, const std::string& target, double alpha,
                        int max_body, const std::vector<int>& lags) {
  MarketSeries series = ingest_series_text(csv_text);
  EncodeOptions options;
  options.target_attr = target;
  options.lags = lags;
  EncodedDataset dataset = encode(series, options);
  HypothesisGrammar grammar;
  grammar.max_body_literals = max_body;
  for (const auto& [pred, sig] : dataset.store.signatures()) {
    if (dataset.head_forms.count(pred)) continue;
    if (sig.arity() == 1 && sig.arg_types[0] == dataset.day_type)
      grammar.body_predicates.push_back({pred, false});
  }
  grammar.head_predicates.push_back(target + "_next_up");
  return rule_report(mmdr_mine(dataset, grammar, alpha));
}

py::dict py_simulate(const std::vector<std::string>& signals,
                     const std::vector<double>& prices, double risk_free_rate,
                     const std::string& strategy) {
  BacktestConfig config;
  config.risk_free_rate = risk_free_rate;
  config.strategy = strategy == "long_short" ? Strategy::long_short : Strategy::long_cash;
  TradeLedger ledger = simulate_trading(signs_from_strings(signals), prices, config);
  py::dict out;
  out["final_value"] = ledger.final_value;
  out["annual_gain_pct"] = ledger.annual_gain_pct;
  return out;
}

double py_cyclic_distance(const std::vector<std::string>& elements, const std::string& a,
                          const std::string& b) {
  DataType t = DataType::cyclic("cycle", elements);
  return cyclic_distance(a, b, t);
}

}  // namespace

PYBIND11_MODULE(_lawmine, m) {
  m.doc() = "Relational rule mining for numeric time series";

  m.def("fisher_p_value", &fisher_p_value, py::arg("a"), py::arg("b"), py::arg("c"),
        py::arg("d"), "One-sided Fisher exact p-value for a 2x2 contingency table");
  m.def(
      "information_gain",
      [](std::int64_t p0, std::int64_t n0, std::int64_t p1, std::int64_t n1,
         std::int64_t tpp) {
        return information_gain(GainState{p0, n0, p1, n1, tpp});
      },
      py::arg("p0"), py::arg("n0"), py::arg("p1"), py::arg("n1"), py::arg("t_plus_plus"));
  m.def("cyclic_distance", &py_cyclic_distance, py::arg("elements"), py::arg("a"),
        py::arg("b"), "Directed distance on a cyclic scale");
  m.def(
      "sign_accuracy",
      [](const std::vector<std::string>& pred, const std::vector<std::string>& actual) {
        SignAccuracy acc = sign_accuracy(signs_from_strings(pred), signs_from_strings(actual));
        py::dict out;
        out["percent"] = acc.percent;
        out["correct"] = acc.correct;
        out["incorrect"] = acc.incorrect;
        out["abstain"] = acc.abstain;
        return out;
      },
      py::arg("predictions"), py::arg("actuals"));
  m.def("simulate_trading", &py_simulate, py::arg("signals"), py::arg("prices"),
        py::arg("risk_free_rate") = 0.03, py::arg("strategy") = "long_cash");
  m.def("buy_and_hold_gain_pct", &buy_and_hold_gain_pct, py::arg("prices"));
  m.def("mine_csv", &py_mine_csv, py::arg("csv_text"), py::arg("target") = "price",
        py::arg("alpha") = 0.05, py::arg("max_body") = 3,
        py::arg("lags") = std::vector<int>{1},
        "Mine law-like sign rules from CSV text; returns the rule report");

  py::class_<PyKnowledge>(m, "Knowledge")
      .def(py::init<const std::string&>(), py::arg("text"))
      .def("covers", &PyKnowledge::covers, py::arg("clause"), py::arg("example"))
      .def("literal_true", &PyKnowledge::literal_true, py::arg("literal"))
      .def("learn", &PyKnowledge::learn, py::arg("learner") = "foil")
      .def("describe", &PyKnowledge::describe);

  py::register_exception<Error>(m, "LawmineError");
}
