#pragma once

// Languages of parts and the coverage automaton built from analysis tables.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tmv/dfa.hpp"
#include "tmv/tables.hpp"

namespace tmv {

using SeqSubset = std::vector<bool>;  // indexed by SeqId

inline SeqSubset all_sequences(const AnalysisTables& t) { return SeqSubset(t.sequences.size(), true); }

// Builds L_{s,S~}: words compatible with s whose pretend simulation produces
// only sequences from S~. Results are memoized on (s, S~).
class PartLanguages {
 public:
  PartLanguages(const AnalysisTables& t, Effort* effort = nullptr) : t_(t), effort_(effort) {}

  const Dfa& language(SeqId s, const SeqSubset& subset) {
    if (subset.size() != t_.sequences.size()) throw PreconditionError("sequence subset has the wrong size");
    if (s < 0 || static_cast<std::size_t>(s) >= subset.size() || !subset[static_cast<std::size_t>(s)])
      throw PreconditionError("sequence must belong to the subset");
    auto key = std::make_pair(s, subset);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    SeqSubset bar = subset;
    bar[static_cast<std::size_t>(s)] = false;
    const std::size_t k = t_.alphabet;
    Dfa terms = Dfa::empty(k);
    for (const Part& p : t_.Y[static_cast<std::size_t>(s)]) {
      bool usable = true;
      for (SeqId si : p.internal) usable = usable && bar[static_cast<std::size_t>(si)];
      if (!usable) continue;
      Dfa term = Dfa::word(k, {p.y[0]});
      for (std::size_t i = 1; i < p.y.size(); ++i) {
        term = concat(term, language(p.internal[i - 1], bar));
        term = concat(term, Dfa::word(k, {p.y[i]}));
      }
      terms = union_of(terms, term);
      charge(terms);
    }
    Dfa result = star(terms);
    charge(result);
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  void charge(const Dfa& d) {
    if (effort_) effort_->charge(d.state_count() * (t_.alphabet + 1), "automaton construction");
  }

  const AnalysisTables& t_;
  Effort* effort_;
  std::map<std::pair<SeqId, SeqSubset>, Dfa> memo_;
};

inline Dfa language_of_sequence(const AnalysisTables& t, SeqId s, const SeqSubset& subset) {
  PartLanguages langs(t);
  return langs.language(s, subset);
}

// x_1 L_{s_1,S} x_2 L_{s_2,S} ... x_k L_{s_k,S} for one base word.
inline Dfa base_word_language(const AnalysisTables& t, const BaseWord& x, PartLanguages& langs) {
  const std::size_t k = t.alphabet;
  if (x.x.empty()) return Dfa::epsilon(k);
  SeqSubset all = all_sequences(t);
  Dfa d = Dfa::epsilon(k);
  for (std::size_t i = 0; i < x.x.size(); ++i) {
    d = concat(d, Dfa::word(k, {x.x[i]}));
    d = concat(d, langs.language(x.seqs[i], all));
  }
  return d;
}

// Union of base-word languages over the selected base words, plus {eps} when
// `with_epsilon`.
template <typename Select>
Dfa base_language_union(const AnalysisTables& t, PartLanguages& langs, Select&& select, bool with_epsilon,
                        Effort* effort = nullptr) {
  Dfa d = with_epsilon ? Dfa::epsilon(t.alphabet) : Dfa::empty(t.alphabet);
  for (const BaseWord& x : t.X) {
    if (!select(x)) continue;
    d = union_of(d, base_word_language(t, x, langs));
    if (effort) effort->charge(d.state_count() * (t.alphabet + 1), "coverage automaton");
  }
  return d;
}

inline Dfa coverage_automaton(const AnalysisTables& t, PartLanguages& langs, Effort* effort = nullptr) {
  return base_language_union(t, langs, [](const BaseWord&) { return true; }, true, effort);
}

inline Dfa coverage_automaton(const AnalysisTables& t) {
  PartLanguages langs(t);
  return coverage_automaton(t, langs);
}

}  // namespace tmv
