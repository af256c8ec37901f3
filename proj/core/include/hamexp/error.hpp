#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace hamexp {

// Bad user input: malformed files, violated preconditions. CLI exit code 65.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A randomized stage ran out of budget or produced no valid structure.
// CLI exit code 2 (abstain/failure).
struct ComputeError : std::runtime_error {
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

// An internal structural guarantee failed; indicates a bug, not bad luck.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

struct NoSurvivingCopy : ComputeError {
  int pair_index;
  explicit NoSurvivingCopy(int idx)
      : ComputeError("last_step: no surviving copy for pair " + std::to_string(idx)),
        pair_index(idx) {}
};

struct RetryBudgetExhausted : ComputeError {
  int round;
  int leftover;
  RetryBudgetExhausted(int round_, int leftover_)
      : ComputeError("connect: retry budget exhausted at round " + std::to_string(round_) +
                     " with " + std::to_string(leftover_) + " pairs left"),
        round(round_),
        leftover(leftover_) {}
};

struct ConnectThroughFailure : ComputeError {
  std::vector<int> failed_pairs;
  explicit ConnectThroughFailure(std::vector<int> failed)
      : ComputeError("connect_through: " + std::to_string(failed.size()) +
                     " pairs could not be routed"),
        failed_pairs(std::move(failed)) {}
};

struct TemplateDefect : ComputeError {
  explicit TemplateDefect(const std::string& what) : ComputeError(what) {}
};

}  // namespace hamexp
