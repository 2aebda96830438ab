#include "lawmine/foil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace lawmine {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

std::pair<int, int> slot_token(const SlotChoice& s) {
  // New variables sort before old ones so general forms precede their
  // specializations; pruning relies on that order.
  return {s.is_new ? 0 : 1, s.index};
}

}  // namespace

double information_gain(const GainState& s) {
  if (s.p0 <= 0) fail(Err::NoPositives, "information gain needs P0 > 0");
  if (s.p1 == 0) return kMinusInf;
  double before = std::log2(double(s.p0) / double(s.p0 + s.n0));
  double after = std::log2(double(s.p1) / double(s.p1 + s.n1));
  return double(s.t_plus_plus) * (after - before);
}

int Variablization::new_var_count() const {
  int n = 0;
  for (const auto& s : slots) n += s.is_new;
  return n;
}

bool Variablization::operator<(const Variablization& other) const {
  if (pred != other.pred) return pred < other.pred;
  for (size_t i = 0; i < slots.size() && i < other.slots.size(); ++i) {
    auto a = slot_token(slots[i]);
    auto b = slot_token(other.slots[i]);
    if (a != b) return a < b;
  }
  if (slots.size() != other.slots.size()) return slots.size() < other.slots.size();
  return negated < other.negated;
}

std::string stats_report(const LearnStats& s) {
  std::ostringstream out;
  out << "candidates_generated\t" << s.candidates_generated << "\n"
      << "gain_evaluations\t" << s.gain_evaluations << "\n"
      << "tuples_touched\t" << s.tuples_touched << "\n"
      << "widening_steps\t" << s.widening_steps << "\n";
  return out.str();
}

namespace {

bool violates_constraints(const Variablization& v, const FactStore& kb) {
  for (const auto& c : kb.constraints(v.pred))
    for (auto [i, j] : c.patterns) {
      const SlotChoice& a = v.slots[i];
      const SlotChoice& b = v.slots[j];
      if (!a.is_new && !b.is_new && a.index == b.index) return true;
    }
  return false;
}

void enumerate_slots(const TypedSignature& sig, const std::vector<TypedVar>& old_vars,
                     int budget, bool use_typing, std::vector<SlotChoice>& slots,
                     int new_used, std::vector<std::vector<SlotChoice>>& out) {
  size_t slot = slots.size();
  if (slot == sig.arg_types.size()) {
    out.push_back(slots);
    return;
  }
  if (new_used < budget) {
    slots.push_back(SlotChoice{true, new_used});
    enumerate_slots(sig, old_vars, budget, use_typing, slots, new_used + 1, out);
    slots.pop_back();
  }
  for (int i = 0; i < static_cast<int>(old_vars.size()); ++i) {
    if (use_typing && old_vars[i].type != sig.arg_types[slot]) continue;
    slots.push_back(SlotChoice{false, i});
    enumerate_slots(sig, old_vars, budget, use_typing, slots, new_used, out);
    slots.pop_back();
  }
}

}  // namespace

std::vector<Variablization> generate_candidate_literals(const FactStore& kb,
                                                        const std::vector<TypedVar>& old_vars,
                                                        int new_var_budget,
                                                        const LearnConfig& config) {
  std::vector<Variablization> out;
  if (old_vars.empty()) return out;
  for (const auto& [pred, sig] : kb.signatures()) {
    if (config.exclude_predicates.count(pred)) continue;
    std::vector<std::vector<SlotChoice>> assignments;
    std::vector<SlotChoice> slots;
    enumerate_slots(sig, old_vars, new_var_budget, config.use_typing, slots, 0, assignments);
    bool intensional = kb.is_intensional(pred);
    for (auto& a : assignments) {
      bool any_old = std::any_of(a.begin(), a.end(), [](const SlotChoice& s) { return !s.is_new; });
      if (!any_old) continue;
      Variablization v{pred, a, false};
      if (config.use_constraints && violates_constraints(v, kb)) continue;
      out.push_back(v);
      // negated intensional literals cannot be operationalized, so they are
      // never offered as candidates
      if (config.allow_negated && !intensional) {
        v.negated = true;
        out.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Literal instantiate_candidate(const Variablization& v, const FactStore& kb,
                              const std::vector<TypedVar>& old_vars, int first_fresh_id,
                              std::vector<TypedVar>* new_vars_out) {
  const TypedSignature& sig = kb.required_signature(v.pred);
  Literal lit;
  lit.pred = v.pred;
  lit.negated = v.negated;
  for (size_t i = 0; i < v.slots.size(); ++i) {
    const SlotChoice& s = v.slots[i];
    if (s.is_new) {
      TypedVar fresh{"v" + std::to_string(first_fresh_id + s.index), sig.arg_types[i]};
      lit.args.push_back(Variable{fresh.name, fresh.type});
      if (new_vars_out) new_vars_out->push_back(fresh);
    } else {
      lit.args.push_back(Variable{old_vars[s.index].name, old_vars[s.index].type});
    }
  }
  return lit;
}

namespace {

Binding tuple_binding(const std::vector<TypedVar>& clause_vars, const LearnTuple& t) {
  Binding b;
  for (size_t i = 0; i < clause_vars.size(); ++i) b.map.emplace(clause_vars[i].name, t.values[i]);
  return b;
}

// Survival / extension count of one tuple under a literal. Ill-typed
// literals (possible with typing off) simply fail instead of erroring.
std::int64_t tuple_extensions(const Literal& lit, const std::vector<TypedVar>& clause_vars,
                              const std::vector<TypedVar>& lit_new_vars, const LearnTuple& t,
                              const FactStore& kb, int depth_limit) {
  Binding b = tuple_binding(clause_vars, t);
  try {
    if (!lit.negated && !lit_new_vars.empty()) {
      std::vector<Variable> fresh;
      for (const auto& v : lit_new_vars) fresh.push_back(Variable{v.name, v.type});
      return static_cast<std::int64_t>(literal_extensions(lit, b, fresh, kb, depth_limit).size());
    }
    return evaluate_literal(lit, b, kb, depth_limit) ? 1 : 0;
  } catch (const Error& e) {
    if (e.code() == Err::TypeMismatch) return 0;
    throw;
  }
}

}  // namespace

GainState evaluate_candidate(const Literal& lit, const std::vector<TypedVar>& clause_vars,
                             const std::vector<TypedVar>& lit_new_vars,
                             const std::vector<LearnTuple>& pos,
                             const std::vector<LearnTuple>& neg, const FactStore& kb,
                             const LearnConfig& config, LearnStats* stats) {
  GainState st;
  st.p0 = static_cast<std::int64_t>(pos.size());
  st.n0 = static_cast<std::int64_t>(neg.size());
  for (const auto& t : pos) {
    std::int64_t k = tuple_extensions(lit, clause_vars, lit_new_vars, t, kb, config.depth_limit);
    st.p1 += k;
    if (k > 0) ++st.t_plus_plus;
  }
  for (const auto& t : neg)
    st.n1 += tuple_extensions(lit, clause_vars, lit_new_vars, t, kb, config.depth_limit);
  if (stats) {
    ++stats->gain_evaluations;
    stats->tuples_touched += static_cast<std::int64_t>(pos.size() + neg.size());
  }
  return st;
}

namespace {

// S specializes G when G carries a new variable wherever S differs, and the
// shared old variables agree; then extensions(S) is a subset of
// extensions(G). Only positive forms participate.
bool is_generalization_of(const Variablization& general, const Variablization& specific) {
  if (general.negated || specific.negated) return false;
  if (general.pred != specific.pred || general.slots.size() != specific.slots.size())
    return false;
  bool strictly = false;
  for (size_t i = 0; i < general.slots.size(); ++i) {
    const SlotChoice& g = general.slots[i];
    const SlotChoice& s = specific.slots[i];
    if (g.is_new) {
      if (!s.is_new) strictly = true;
      continue;
    }
    if (s.is_new || s.index != g.index) return false;
  }
  return strictly;
}

}  // namespace

ChooseResult choose_literal(const std::vector<Variablization>& candidates,
                            const std::vector<TypedVar>& old_vars,
                            const std::vector<LearnTuple>& pos,
                            const std::vector<LearnTuple>& neg, const FactStore& kb,
                            const LearnConfig& config, LearnStats* stats) {
  if (candidates.empty()) fail(Err::NoUsefulLiteral, "no candidate literals");
  if (pos.empty()) fail(Err::NoPositives, "no positive tuples");
  ChooseResult best;
  best.gain = kMinusInf;
  double p0 = static_cast<double>(pos.size());
  double n0 = static_cast<double>(neg.size());
  double purity_ceiling = std::log2((p0 + n0) / p0);  // gain per T++ when N1 = 0
  std::vector<std::pair<int, std::int64_t>> evaluated_general;  // index, T++
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    const Variablization& cand = candidates[i];
    if (config.prune && best.index >= 0) {
      std::int64_t bound_t = -1;
      for (auto [j, tpp] : evaluated_general)
        if (is_generalization_of(candidates[j], cand)) bound_t = bound_t < 0 ? tpp : std::min(bound_t, tpp);
      if (bound_t >= 0 && double(bound_t) * purity_ceiling < best.gain) continue;
    }
    std::vector<TypedVar> new_vars;
    Literal lit = instantiate_candidate(cand, kb, old_vars, 0, &new_vars);
    GainState st = evaluate_candidate(lit, old_vars, new_vars, pos, neg, kb, config, stats);
    double g = information_gain(st);
    if (!cand.negated && cand.new_var_count() > 0) evaluated_general.emplace_back(i, st.t_plus_plus);
    if (g > best.gain) {
      best.index = i;
      best.state = st;
      best.gain = g;
    }
  }
  if (best.index < 0 || !(best.gain > 0.0))
    fail(Err::NoUsefulLiteral, "no candidate literal has positive gain");
  return best;
}

namespace {

std::vector<LearnTuple> extend_tuples(const Literal& lit,
                                      const std::vector<TypedVar>& clause_vars,
                                      const std::vector<TypedVar>& lit_new_vars,
                                      const std::vector<LearnTuple>& tuples,
                                      const FactStore& kb, const LearnConfig& config) {
  std::vector<LearnTuple> out;
  for (const auto& t : tuples) {
    Binding b = tuple_binding(clause_vars, t);
    try {
      if (!lit.negated && !lit_new_vars.empty()) {
        std::vector<Variable> fresh;
        for (const auto& v : lit_new_vars) fresh.push_back(Variable{v.name, v.type});
        for (const Tuple& ext : literal_extensions(lit, b, fresh, kb, config.depth_limit)) {
          LearnTuple extended = t;
          extended.values.insert(extended.values.end(), ext.begin(), ext.end());
          out.push_back(std::move(extended));
        }
      } else if (evaluate_literal(lit, b, kb, config.depth_limit)) {
        out.push_back(t);
      }
    } catch (const Error& e) {
      if (e.code() != Err::TypeMismatch) throw;
    }
  }
  return out;
}

int distinct_origins(const std::vector<LearnTuple>& tuples) {
  std::set<int> seen;
  for (const auto& t : tuples) seen.insert(t.origin);
  return static_cast<int>(seen.size());
}

struct ClauseState {
  std::vector<TypedVar> vars;
  std::vector<Literal> body;
  std::vector<LearnTuple> pos;
  std::vector<LearnTuple> neg;
  int fresh_counter = 0;
};

void append_trace(std::string& trace, const Literal& lit, const GainState& st, double gain) {
  std::ostringstream line;
  line << to_text(lit) << '\t' << st.p0 << '\t' << st.n0 << '\t' << st.p1 << '\t' << st.n1
       << '\t' << st.t_plus_plus << '\t' << format_number(gain) << '\n';
  trace += line.str();
}

// Positive literals bind variables in order, negated literals check last;
// matches the declarative body semantics of clause_covers.
std::vector<const Literal*> chaining_order(const std::vector<Literal>& literals) {
  std::vector<const Literal*> order;
  for (const auto& l : literals)
    if (!l.negated) order.push_back(&l);
  for (const auto& l : literals)
    if (l.negated) order.push_back(&l);
  return order;
}

std::vector<LearnTuple> chain_extend(const std::vector<Literal>& literals,
                                     std::vector<TypedVar>& known,
                                     std::vector<LearnTuple> tuples, const FactStore& kb,
                                     const LearnConfig& config) {
  for (const Literal* lit : chaining_order(literals)) {
    std::vector<TypedVar> lit_new;
    for (const auto& v : lit->variables()) {
      bool have = false;
      for (const auto& k : known)
        if (k.name == v.name) have = true;
      if (!have) lit_new.push_back(TypedVar{v.name, v.type});
    }
    tuples = extend_tuples(*lit, known, lit_new, tuples, kb, config);
    if (!lit->negated)
      for (const auto& v : lit_new) known.push_back(v);
    // negated literals bind nothing; their fresh variables stay scoped
  }
  return tuples;
}

// Conjunction gain of a whole seed body, evaluated by chaining extensions.
GainState seed_gain(const SeedBody& seed, const ClauseState& state, const FactStore& kb,
                    const LearnConfig& config, LearnStats* stats) {
  GainState st;
  st.p0 = static_cast<std::int64_t>(state.pos.size());
  st.n0 = static_cast<std::int64_t>(state.neg.size());
  std::vector<TypedVar> pos_known = state.vars;
  std::vector<LearnTuple> pos_after = chain_extend(seed.literals, pos_known, state.pos, kb, config);
  std::vector<TypedVar> neg_known = state.vars;
  std::vector<LearnTuple> neg_after = chain_extend(seed.literals, neg_known, state.neg, kb, config);
  st.p1 = static_cast<std::int64_t>(pos_after.size());
  st.n1 = static_cast<std::int64_t>(neg_after.size());
  std::set<int> extended;
  for (const auto& t : pos_after) extended.insert(t.origin);
  st.t_plus_plus = static_cast<std::int64_t>(extended.size());
  if (stats) {
    ++stats->gain_evaluations;
    stats->tuples_touched += static_cast<std::int64_t>(state.pos.size() + state.neg.size());
  }
  return st;
}

}  // namespace

LearnResult foil_learn_budgeted(const std::vector<Tuple>& pos, const std::vector<Tuple>& neg,
                                const std::string& target, const FactStore& kb,
                                const LearnConfig& config, int new_var_budget,
                                const std::vector<SeedBody>& seeds) {
  if (pos.empty()) fail(Err::NoPositives, "no positive examples for '" + target + "'");
  const TypedSignature& sig = kb.required_signature(target);
  for (const auto& e : pos)
    if (static_cast<int>(e.size()) != sig.arity())
      fail(Err::SignatureMismatch, "positive example arity mismatch for '" + target + "'");
  for (const auto& e : neg)
    if (static_cast<int>(e.size()) != sig.arity())
      fail(Err::SignatureMismatch, "negative example arity mismatch for '" + target + "'");

  std::vector<TypedVar> head_vars;
  Literal head;
  head.pred = target;
  for (int i = 0; i < sig.arity(); ++i) {
    TypedVar v{"x" + std::to_string(i), sig.arg_types[i]};
    head_vars.push_back(v);
    head.args.push_back(Variable{v.name, v.type});
  }

  LearnConfig cfg = config;
  cfg.exclude_predicates.insert(target);

  auto started = std::chrono::steady_clock::now();
  auto check_budget = [&]() {
    if (cfg.time_budget && std::chrono::steady_clock::now() - started > *cfg.time_budget)
      fail(Err::TimeBudgetExceeded, "learning time budget exceeded");
  };

  LearnResult result;
  std::vector<std::pair<Tuple, int>> remaining;  // example, origin id
  for (size_t i = 0; i < pos.size(); ++i) remaining.emplace_back(pos[i], static_cast<int>(i));

  while (!remaining.empty() &&
         static_cast<int>(result.rule.clauses.size()) < cfg.max_clauses) {
    check_budget();
    ClauseState state;
    state.vars = head_vars;
    for (const auto& [example, origin] : remaining)
      state.pos.push_back(LearnTuple{example, origin});
    for (size_t i = 0; i < neg.size(); ++i)
      state.neg.push_back(LearnTuple{neg[i], static_cast<int>(i)});

    bool accepted = false;
    bool first_literal = true;
    while (true) {
      check_budget();
      int cov_pos = distinct_origins(state.pos);
      int cov_neg = distinct_origins(state.neg);
      double neg_frac =
          cov_pos + cov_neg == 0 ? 1.0 : double(cov_neg) / double(cov_pos + cov_neg);
      if (cov_pos >= cfg.min_clause_pos && neg_frac <= cfg.neg_tolerance) {
        accepted = true;
        break;
      }
      if (cov_pos == 0) break;  // nothing left to defend
      if (static_cast<int>(state.body.size()) >= cfg.max_clause_len) break;

      // Initial-rule seeds compete as whole bodies before ordinary literals.
      // The best one is adopted even at non-positive gain (later literals can
      // rule negatives out); a seed covering no positive is replaced instead.
      if (first_literal && !seeds.empty()) {
        first_literal = false;
        int best_seed = -1;
        GainState best_state;
        double best_gain = kMinusInf;
        for (int si = 0; si < static_cast<int>(seeds.size()); ++si) {
          GainState st = seed_gain(seeds[si], state, kb, cfg, &result.stats);
          if (st.p1 == 0) continue;
          double g = information_gain(st);
          if (best_seed < 0 || g > best_gain) {
            best_seed = si;
            best_state = st;
            best_gain = g;
          }
        }
        if (best_seed >= 0) {
          const SeedBody& seed = seeds[best_seed];
          std::vector<TypedVar> known = state.vars;
          state.pos = chain_extend(seed.literals, known, state.pos, kb, cfg);
          std::vector<TypedVar> scratch = state.vars;
          state.neg = chain_extend(seed.literals, scratch, state.neg, kb, cfg);
          state.vars = known;
          for (const auto& lit : seed.literals) {
            state.body.push_back(lit);
            append_trace(result.trace, lit, best_state, best_gain);
          }
          state.fresh_counter += static_cast<int>(seed.introduced.size());
          continue;
        }
      }

      auto candidates =
          generate_candidate_literals(kb, state.vars, new_var_budget, cfg);
      result.stats.candidates_generated += static_cast<std::int64_t>(candidates.size());
      ChooseResult chosen;
      try {
        chosen = choose_literal(candidates, state.vars, state.pos, state.neg, kb, cfg,
                                &result.stats);
      } catch (const Error& e) {
        if (e.code() == Err::NoUsefulLiteral || e.code() == Err::NoPositives) break;
        throw;
      }
      std::vector<TypedVar> new_vars;
      Literal lit = instantiate_candidate(candidates[chosen.index], kb, state.vars,
                                          state.fresh_counter, &new_vars);
      state.pos = extend_tuples(lit, state.vars, new_vars, state.pos, kb, cfg);
      state.neg = extend_tuples(lit, state.vars, new_vars, state.neg, kb, cfg);
      if (!lit.negated)
        for (const auto& v : new_vars) state.vars.push_back(v);
      state.fresh_counter += static_cast<int>(new_vars.size());
      state.body.push_back(lit);
      append_trace(result.trace, lit, chosen.state, chosen.gain);
    }

    if (!accepted) break;
    HornClause clause{head, state.body};
    result.rule.clauses.push_back(clause);
    std::set<int> covered;
    for (const auto& t : state.pos) covered.insert(t.origin);
    std::vector<std::pair<Tuple, int>> still;
    for (auto& [example, origin] : remaining)
      if (!covered.count(origin)) still.emplace_back(std::move(example), origin);
    if (still.size() == remaining.size()) break;  // no progress
    remaining = std::move(still);
  }

  if (result.rule.clauses.empty())
    fail(Err::Unlearnable, "no clause with positive gain covers any positive example");
  for (auto& [example, origin] : remaining) {
    (void)origin;
    result.uncovered_pos.push_back(std::move(example));
  }
  return result;
}

LearnResult foil_learn(const std::vector<Tuple>& pos, const std::vector<Tuple>& neg,
                       const std::string& target, const FactStore& kb,
                       const LearnConfig& config) {
  return foil_learn_budgeted(pos, neg, target, kb, config, config.max_new_vars, {});
}

}  // namespace lawmine
