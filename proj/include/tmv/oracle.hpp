#pragma once

// Brute-force necessary condition: every input up to a length runs within
// floor(T(n)) steps. Independent of the decision procedure.

#include <optional>

#include "tmv/bounds.hpp"
#include "tmv/simulate.hpp"

namespace tmv {

struct OracleResult {
  bool passed = true;
  std::optional<Word> witness;
  std::uint64_t witness_steps = 0;  // steps within budget floor(T(|w|)) + 1
  BigNat allowed = 0;
  std::uint64_t words = 0;
  std::uint64_t max_steps = 0;
};

template <typename M, TimeBound B>
OracleResult brute_force_oracle(const M& m, const B& bound, std::size_t max_len) {
  OracleResult r;
  for (std::size_t n = 0; n <= max_len && r.passed; ++n) {
    BigNat allowed = bound.floor_eval(n);
    std::uint64_t budget = clamp_u64(allowed + 1);
    for_each_word_of_length(m.input_symbol_count(), n, [&](const Word& w) {
      if (!r.passed) return;
      ++r.words;
      RunOutcome out = run(m, w, budget);
      if (!out.halted() || BigNat(out.steps) > allowed) {
        r.passed = false;
        r.witness = w;
        r.witness_steps = out.steps;
        r.allowed = allowed;
        return;
      }
      r.max_steps = std::max(r.max_steps, out.steps);
    });
  }
  return r;
}

}  // namespace tmv
