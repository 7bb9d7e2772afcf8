#pragma once

// DFA extraction from one-tape machines that run in time Cn+D.

#include "tmv/decision.hpp"

namespace tmv {

struct Extraction {
  Dfa dfa;
  AnalysisResult analysis;
};

namespace detail {

// T(n) = D: the machine never reads past cell D-1, so words sharing a prefix
// of length D behave alike.
inline Dfa behaviour_table_dfa(std::size_t k, std::size_t n0, const std::vector<std::pair<Word, RunStatus>>& rows) {
  Dfa d(k);
  std::map<Word, int> node;
  node[{}] = d.add_state(false);
  d.set_start(0);
  for (const auto& [w, status] : rows) {
    if (!node.count(w)) {
      Word parent(w.begin(), w.end() - 1);
      int s = d.add_state(false);
      node[w] = s;
      d.set_next(node.at(parent), w.back(), s);
    }
    d.set_accepting(node.at(w), status == RunStatus::Accepted);
  }
  for (const auto& [w, s] : node)
    if (w.size() == n0)
      for (std::size_t a = 0; a < k; ++a) d.set_next(s, static_cast<Symbol>(a), s);
  return d.minimized();
}

}  // namespace detail

inline Extraction extract_dfa_with_analysis(const OneTapeMachine& m, std::uint64_t C, std::uint64_t D,
                                            const CheckLimits& limits = {}) {
  if (D == 0) throw PreconditionError("no machine runs in time Cn+0: every machine makes a step on the empty input");
  LinearBound bound(C, D);
  AnalysisResult a = analyze_one_tape(m, bound, limits);
  if (a.verdict.kind != VerdictKind::RunsInTime)
    throw PreconditionError(std::string("machine is not verified to run in time ") + bound.describe() + ": " +
                            to_string(a.verdict.kind) + " (" + a.verdict.detail + ")");
  const std::size_t k = m.input_symbol_count();
  if (C == 0) {
    Dfa d = detail::behaviour_table_dfa(k, static_cast<std::size_t>(*a.trivial_n0), a.behaviours);
    return {std::move(d), std::move(a)};
  }
  const AnalysisTables& t = *a.tables;
  PartLanguages langs(t);
  Dfa d = base_language_union(
      t, langs, [](const BaseWord& x) { return x.status == RunStatus::Accepted; }, false);
  return {std::move(d), std::move(a)};
}

inline Dfa extract_dfa(const OneTapeMachine& m, std::uint64_t C, std::uint64_t D, const CheckLimits& limits = {}) {
  return extract_dfa_with_analysis(m, C, D, limits).dfa;
}

}  // namespace tmv
