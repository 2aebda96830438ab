#pragma once

// Coverage of examples by literals, clauses and rules against a fact store.
//
// Extensional predicates are evaluated under the closed-world assumption;
// intensional predicates by clause expansion with a depth limit; negation is
// negation-as-failure. A negated literal with unbound variables is true iff
// no typed binding satisfies the positive literal. Existential search
// iterates constants in canonical sorted order.

#include "lawmine/kb.hpp"
#include "lawmine/logic.hpp"

namespace lawmine {

inline constexpr int kDefaultDepthLimit = 8;

// Grounds a term under a binding; functional expressions apply builtins.
Value ground_term(const Term& t, const Binding& binding);

// Truth of one ground (or negated, possibly unbound) literal.
bool evaluate_literal(const Literal& lit, const Binding& binding, const FactStore& kb,
                      int depth_limit = kDefaultDepthLimit);

// True iff some typed binding of the body's existential variables makes
// every body literal true, with head variables bound to `example`.
bool clause_covers(const HornClause& clause, const Tuple& example, const FactStore& kb,
                   int depth_limit = kDefaultDepthLimit);

bool rule_covers(const Rule& rule, const Tuple& example, const FactStore& kb,
                 int depth_limit = kDefaultDepthLimit);

// Body-only coverage with an initial binding (used by learners and scoring):
// true iff the conjunction is satisfiable extending `binding`.
bool body_satisfiable(const std::vector<Literal>& body, const Binding& binding,
                      const FactStore& kb, int depth_limit = kDefaultDepthLimit);

// All distinct extensions of `binding` over `new_vars` satisfying one
// positive literal; used for FOIL tuple expansion.
std::vector<Tuple> literal_extensions(const Literal& lit, const Binding& binding,
                                      const std::vector<Variable>& new_vars,
                                      const FactStore& kb,
                                      int depth_limit = kDefaultDepthLimit);

}  // namespace lawmine
