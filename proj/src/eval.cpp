#include "lawmine/eval.hpp"

#include <algorithm>
#include <functional>

namespace lawmine {

namespace {

bool term_ground(const Term& t, const Binding& binding) {
  if (std::holds_alternative<Constant>(t)) return true;
  if (auto* v = std::get_if<Variable>(&t)) return binding.bound(v->name);
  for (const auto& a : std::get<FuncTerm>(t).args)
    if (!term_ground(a, binding)) return false;
  return true;
}

bool literal_ground(const Literal& lit, const Binding& binding) {
  for (const auto& a : lit.args)
    if (!term_ground(a, binding)) return false;
  return true;
}

std::vector<Variable> unbound_variables(const Literal& lit, const Binding& binding) {
  std::vector<Variable> out;
  for (const auto& v : lit.variables())
    if (!binding.bound(v.name)) out.push_back(v);
  return out;
}

// Tuple matching applies only when every functional argument is ground.
bool joinable_extensional(const Literal& lit, const Binding& binding, const FactStore& kb) {
  if (!kb.is_extensional(lit.pred) || kb.is_intensional(lit.pred)) return false;
  for (const auto& a : lit.args)
    if (std::holds_alternative<FuncTerm>(a) && !term_ground(a, binding)) return false;
  return true;
}

bool eval_ground_atom(const std::string& pred, const Tuple& values, const FactStore& kb,
                      int depth_limit);

bool eval_ground_literal(const Literal& lit, const Binding& binding, const FactStore& kb,
                         int depth_limit) {
  Tuple values;
  values.reserve(lit.args.size());
  for (const auto& a : lit.args) values.push_back(ground_term(a, binding));
  bool truth = eval_ground_atom(lit.pred, values, kb, depth_limit);
  return lit.negated ? !truth : truth;
}

using MatchFn = std::function<bool(Binding&)>;  // return false to stop

// Iterates extensional tuples consistent with the bound slots of `lit`,
// extending `binding` with values for its unbound variables.
bool for_each_extensional_match(const Literal& lit, Binding& binding, const FactStore& kb,
                                const MatchFn& fn) {
  for (const Tuple& tuple : kb.tuples(lit.pred)) {
    std::vector<std::string> bound_here;
    bool ok = true;
    for (size_t i = 0; i < lit.args.size() && ok; ++i) {
      const Term& arg = lit.args[i];
      if (term_ground(arg, binding)) {
        ok = ground_term(arg, binding) == tuple[i];
        continue;
      }
      const auto& var = std::get<Variable>(arg);
      auto it = binding.map.find(var.name);
      if (it != binding.map.end()) {
        ok = it->second == tuple[i];
      } else {
        binding.map.emplace(var.name, tuple[i]);
        bound_here.push_back(var.name);
      }
    }
    bool keep_going = true;
    if (ok) keep_going = fn(binding);
    for (const auto& name : bound_here) binding.map.erase(name);
    if (!keep_going) return false;
  }
  return true;
}

// Enumerates assignments of `slots` over typed kb constants in sorted order,
// calling fn on each assignment satisfying the ground literal.
bool for_each_constant_match(const Literal& lit, Binding& binding,
                             const std::vector<Variable>& slots, size_t slot_index,
                             const FactStore& kb, int depth_limit, const MatchFn& fn) {
  if (slot_index == slots.size()) {
    if (!eval_ground_literal(lit, binding, kb, depth_limit)) return true;
    return fn(binding);
  }
  const Variable& var = slots[slot_index];
  for (const Value& c : kb.constants(var.type)) {
    binding.map[var.name] = c;
    bool keep_going =
        for_each_constant_match(lit, binding, slots, slot_index + 1, kb, depth_limit, fn);
    binding.map.erase(var.name);
    if (!keep_going) return false;
  }
  return true;
}

bool for_each_match(const Literal& lit, Binding& binding, const FactStore& kb,
                    int depth_limit, const MatchFn& fn) {
  if (joinable_extensional(lit, binding, kb))
    return for_each_extensional_match(lit, binding, kb, fn);
  std::vector<Variable> free = unbound_variables(lit, binding);
  return for_each_constant_match(lit, binding, free, 0, kb, depth_limit, fn);
}

// A negated literal with unbound variables is true iff no typed binding of
// those variables satisfies the positive literal.
bool eval_negated_unbound(const Literal& lit, Binding& binding, const FactStore& kb,
                          int depth_limit) {
  Literal positive = lit;
  positive.negated = false;
  bool satisfied = false;
  for_each_match(positive, binding, kb, depth_limit, [&](Binding&) {
    satisfied = true;
    return false;
  });
  return !satisfied;
}

// Backtracking conjunction solver. Ground literals evaluate eagerly;
// positive literals with unbound variables enumerate candidate bindings;
// negated literals with unbound variables wait until every positive literal
// is consumed, then apply the no-satisfying-binding semantics.
bool solve_body(const std::vector<Literal>& body, std::vector<bool>& done, Binding& binding,
                const FactStore& kb, int depth_limit) {
  for (size_t i = 0; i < body.size(); ++i) {
    if (done[i] || !literal_ground(body[i], binding)) continue;
    if (!eval_ground_literal(body[i], binding, kb, depth_limit)) return false;
    done[i] = true;
    bool result = solve_body(body, done, binding, kb, depth_limit);
    done[i] = false;
    return result;
  }
  for (size_t i = 0; i < body.size(); ++i) {
    if (done[i] || body[i].negated) continue;
    done[i] = true;
    bool solved = false;
    for_each_match(body[i], binding, kb, depth_limit, [&](Binding& b) {
      if (solve_body(body, done, b, kb, depth_limit)) {
        solved = true;
        return false;
      }
      return true;
    });
    done[i] = false;
    return solved;
  }
  for (size_t i = 0; i < body.size(); ++i) {
    if (done[i]) continue;
    if (!eval_negated_unbound(body[i], binding, kb, depth_limit)) return false;
  }
  return true;
}

bool eval_ground_atom(const std::string& pred, const Tuple& values, const FactStore& kb,
                      int depth_limit) {
  if (is_builtin_predicate(pred)) return eval_builtin_predicate(pred, values);
  const TypedSignature* sig = kb.signature(pred);
  if (!sig) fail(Err::UnknownPredicate, "predicate '" + pred + "' is not declared");
  if (sig->arity() != static_cast<int>(values.size()))
    fail(Err::SignatureMismatch, "arity mismatch evaluating '" + pred + "'");
  for (size_t i = 0; i < values.size(); ++i) {
    const DataType& t = kb.type(sig->arg_types[i]);
    if (!t.admits(values[i]))
      fail(Err::TypeMismatch, "value " + values[i].str() + " is not of type '" + t.name +
                                  "' (slot " + std::to_string(i) + " of " + pred + ")");
  }
  // Mixed predicates: tuples first, clauses second.
  if (kb.tuples(pred).count(values)) return true;
  const Rule* def = kb.definition(pred);
  if (def) {
    if (depth_limit <= 0)
      fail(Err::DepthExceeded, "intensional recursion limit reached at '" + pred + "'");
    for (const auto& clause : def->clauses) {
      Binding b;
      bool consistent = true;
      for (int i = 0; i < clause.head.arity() && consistent; ++i) {
        const auto& var = std::get<Variable>(clause.head.args[i]);
        auto it = b.map.find(var.name);
        if (it == b.map.end())
          b.map.emplace(var.name, values[i]);
        else if (it->second != values[i])
          consistent = false;
      }
      if (!consistent) continue;
      std::vector<bool> done(clause.body.size(), false);
      if (solve_body(clause.body, done, b, kb, depth_limit - 1)) return true;
    }
  }
  return false;  // closed world
}

}  // namespace

Value ground_term(const Term& t, const Binding& binding) {
  if (auto* c = std::get_if<Constant>(&t)) return c->value;
  if (auto* v = std::get_if<Variable>(&t)) return binding.at(v->name);
  const auto& f = std::get<FuncTerm>(t);
  std::vector<Value> args;
  args.reserve(f.args.size());
  for (const auto& a : f.args) args.push_back(ground_term(a, binding));
  return apply_builtin_function(f.fn, args);
}

bool evaluate_literal(const Literal& lit, const Binding& binding, const FactStore& kb,
                      int depth_limit) {
  if (literal_ground(lit, binding)) return eval_ground_literal(lit, binding, kb, depth_limit);
  if (!lit.negated)
    fail(Err::UnboundVariable, "positive literal with unbound variables: " + to_text(lit));
  Binding b = binding;
  return eval_negated_unbound(lit, b, kb, depth_limit);
}

bool clause_covers(const HornClause& clause, const Tuple& example, const FactStore& kb,
                   int depth_limit) {
  clause.validate();
  if (clause.head.arity() != static_cast<int>(example.size()))
    fail(Err::SignatureMismatch, "example arity does not match clause head");
  Binding binding;
  for (int i = 0; i < clause.head.arity(); ++i) {
    const auto& var = std::get<Variable>(clause.head.args[i]);
    if (kb.has_type(var.type) && !kb.type(var.type).admits(example[i]))
      fail(Err::TypeMismatch,
           "example value " + example[i].str() + " is not of type '" + var.type + "'");
    auto it = binding.map.find(var.name);
    if (it == binding.map.end())
      binding.map.emplace(var.name, example[i]);
    else if (it->second != example[i])
      return false;
  }
  std::vector<bool> done(clause.body.size(), false);
  return solve_body(clause.body, done, binding, kb, depth_limit);
}

bool rule_covers(const Rule& rule, const Tuple& example, const FactStore& kb,
                 int depth_limit) {
  for (const auto& c : rule.clauses)
    if (clause_covers(c, example, kb, depth_limit)) return true;
  return false;
}

bool body_satisfiable(const std::vector<Literal>& body, const Binding& binding,
                      const FactStore& kb, int depth_limit) {
  Binding b = binding;
  std::vector<bool> done(body.size(), false);
  return solve_body(body, done, b, kb, depth_limit);
}

std::vector<Tuple> literal_extensions(const Literal& lit, const Binding& binding,
                                      const std::vector<Variable>& new_vars,
                                      const FactStore& kb, int depth_limit) {
  if (lit.negated) fail(Err::ParseError, "literal_extensions expects a positive literal");
  std::set<Tuple> sink;
  Binding b = binding;
  for_each_match(lit, b, kb, depth_limit, [&](Binding& current) {
    Tuple ext;
    ext.reserve(new_vars.size());
    for (const auto& v : new_vars) ext.push_back(current.at(v.name));
    sink.insert(std::move(ext));
    return true;
  });
  return std::vector<Tuple>(sink.begin(), sink.end());
}

}  // namespace lawmine
