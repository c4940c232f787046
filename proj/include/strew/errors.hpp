#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strew {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed `.mrs` input. Positions are 1-based; col 0 means "whole line".
struct SyntaxError : Error {
  std::size_t line;
  std::size_t col;
  SyntaxError(std::string msg, std::size_t line_, std::size_t col_ = 0)
      : Error("syntax error at line " + std::to_string(line_) +
              (col_ ? ", col " + std::to_string(col_) : std::string()) + ": " +
              msg),
        line(line_),
        col(col_) {}
};

/// A rule or word uses a symbol that is not in the alphabet.
struct UnknownLetterError : Error {
  std::string symbol;
  std::size_t line;
  std::size_t col;
  explicit UnknownLetterError(std::string symbol_, std::size_t line_ = 0,
                              std::size_t col_ = 0)
      : Error("unknown letter \"" + symbol_ + "\"" +
              (line_ ? " at line " + std::to_string(line_) : std::string())),
        symbol(std::move(symbol_)),
        line(line_),
        col(col_) {}
};

/// A rule with an empty left-hand side.
struct EmptyLhsError : Error {
  std::size_t line;
  explicit EmptyLhsError(std::size_t line_ = 0)
      : Error("rule has empty left-hand side" +
              (line_ ? " at line " + std::to_string(line_) : std::string())),
        line(line_) {}
};

/// The alphabet declares the same symbol twice.
struct DuplicateLetterError : Error {
  std::string symbol;
  std::size_t line;
  explicit DuplicateLetterError(std::string symbol_, std::size_t line_ = 0)
      : Error("duplicate letter \"" + symbol_ + "\"" +
              (line_ ? " at line " + std::to_string(line_) : std::string())),
        symbol(std::move(symbol_)),
        line(line_) {}
};

/// Reduction requested on a system with no termination guarantee and no
/// explicit step budget.
struct NonTerminatingRiskError : Error {
  NonTerminatingRiskError()
      : Error("system is not length-reducing; pass an explicit step budget") {}
};

/// Confluence decision requested for a system we cannot prove terminating.
struct NotTerminatingError : Error {
  NotTerminatingError()
      : Error("confluence check requires a length-reducing system") {}
};

/// A search or enumeration exceeded its configured budget.
struct BudgetExceededError : Error {
  using Error::Error;
};

struct IterationBudgetError : Error {
  std::size_t budget;
  explicit IterationBudgetError(std::size_t budget_)
      : Error("iteration budget exceeded (" + std::to_string(budget_) + ")"),
        budget(budget_) {}
};

struct SizeBudgetError : Error {
  std::size_t limit;
  explicit SizeBudgetError(std::size_t limit_)
      : Error("size budget exceeded (" + std::to_string(limit_) + " vertices)"),
        limit(limit_) {}
};

/// An operation's stated precondition does not hold. `flag` names the
/// missing property ("monadic", "confluent", "group", ...).
struct PreconditionError : Error {
  std::string flag;
  explicit PreconditionError(std::string flag_, std::string detail = {})
      : Error("precondition failed: " + flag_ +
              (detail.empty() ? std::string() : " (" + detail + ")")),
        flag(std::move(flag_)) {}
};

/// A property the analysis asserts unconditionally was observed to fail.
/// These are test hooks: they must never fire on valid input.
struct LemmaViolationError : Error {
  using Error::Error;
};

struct TheoremViolationError : Error {
  using Error::Error;
};

/// The normalization fixpoint produced a non-confluent system; surfaced
/// instead of attempting completion.
struct NormalizationFailedError : Error {
  using Error::Error;
};

/// A vertex or product lies outside the constructed ball.
struct OutOfBallError : Error {
  using Error::Error;
};

}  // namespace strew
