#pragma once

#include <stdexcept>
#include <string>

namespace lawmine {

enum class Err {
  // logic / evaluation
  UnknownPredicate,
  TypeMismatch,
  DepthExceeded,
  NotCyclic,
  UnknownElement,
  UnboundVariable,
  // ingestion / encoding
  ParseError,
  NonMonotoneDates,
  SchemaMismatch,
  LagTooLarge,
  EmptySeries,
  MissingAttribute,
  SignatureMismatch,
  // learning
  NoPositives,
  NoUsefulLiteral,
  Unlearnable,
  TimeBudgetExceeded,
  NotIntensional,
  NotOperationalizable,
  // mmdr / forecasting
  BodyNeverSatisfied,
  EmptyIntersection,
  // backtest
  NoDecisions,
  AlignmentError,
  InsufficientData,
  // cli
  ConfigError,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

const char* err_name(Err code);

}  // namespace lawmine
