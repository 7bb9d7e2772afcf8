#pragma once

// Base words, crossing-sequence set and parts: the tables the one-tape
// decision procedure is built on.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmv/bounds.hpp"
#include "tmv/crossing.hpp"

namespace tmv {

using SeqId = int;

// Work counter shared by one analysis; throws EffortExceeded past the limit.
class Effort {
 public:
  explicit Effort(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t units, const char* what) {
    used_ += units;
    if (used_ > limit_) throw EffortExceeded(what);
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

struct BaseWord {
  Word x;
  std::vector<SeqId> seqs;  // boundaries 1..|x|
  std::uint64_t steps = 0;  // T_x
  RunStatus status = RunStatus::BudgetExceeded;
};

struct Part {
  SeqId s = 0;
  Word y;
  std::vector<SeqId> internal;  // boundaries 1..|y|-1
  std::uint64_t time = 0;       // T_{s,y}
};

struct PartRef {
  SeqId s = 0;
  std::size_t index = 0;
  friend auto operator<=>(const PartRef&, const PartRef&) = default;
};

struct AnalysisTables {
  std::uint64_t c = 0;
  BigNat K = 0;
  std::size_t limit = 0;  // words and parts have length <= limit
  std::size_t alphabet = 0;

  std::vector<CrossingSequence> sequences;  // S, indexed by SeqId
  std::map<CrossingSequence, SeqId> index;
  std::vector<BaseWord> X;
  std::vector<std::vector<Part>> Y;  // Y[s]
  std::vector<std::size_t> probed;   // parts of length <= probed[s] examined

  std::size_t length_done = 0;  // base words of every length < length_done simulated
  std::uint64_t words_simulated = 0;
  std::uint64_t probes = 0;

  SeqId intern(const CrossingSequence& s) {
    auto [it, fresh] = index.emplace(s, static_cast<SeqId>(sequences.size()));
    if (fresh) {
      sequences.push_back(s);
      Y.emplace_back();
      probed.push_back(0);
    }
    return it->second;
  }

  std::optional<SeqId> find(const CrossingSequence& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  const Part& part(PartRef r) const { return Y.at(static_cast<std::size_t>(r.s)).at(r.index); }

  std::size_t part_count() const {
    std::size_t n = 0;
    for (const auto& ys : Y) n += ys.size();
    return n;
  }
};

enum class CompatFailure { None, Mismatch, HaltInside, LoopInside, InternalOverCap, NotPrimitive };

inline const char* to_string(CompatFailure f) {
  switch (f) {
    case CompatFailure::None: return "none";
    case CompatFailure::Mismatch: return "mismatch";
    case CompatFailure::HaltInside: return "halt-inside";
    case CompatFailure::LoopInside: return "loop-inside";
    case CompatFailure::InternalOverCap: return "internal-sequence-over-cap";
    default: return "not-primitive";
  }
}

struct CompatResult {
  bool compatible = false;
  bool primitive = false;
  std::vector<CrossingSequence> internal;  // boundaries 1..|y|-1
  std::uint64_t part_time = 0;
  CompatFailure failure = CompatFailure::None;
};

// Runs M on y alone, pretending the surroundings produce s at both ends of y.
// Left and right pointers walk s independently; the head re-enters on the
// side it last left.
inline CompatResult probe_primitive_compat(const OneTapeMachine& m, const CrossingSequence& s, const Word& y,
                                           std::uint64_t c) {
  CompatResult res;
  if (y.empty()) throw PreconditionError("parts must be non-empty");
  const Cell len = static_cast<Cell>(y.size());
  res.internal.assign(y.size() - 1, {});
  if (s.empty()) {
    res.compatible = true;
    res.primitive = y.size() == 1;
    res.failure = res.primitive ? CompatFailure::None : CompatFailure::NotPrimitive;
    return res;
  }
  const std::size_t k = s.size();
  Word tape = y;
  Cell head = 0;
  State q = s[0];
  std::size_t l = 1, r = 0;
  std::set<std::vector<int>> seen;
  auto fail = [&](CompatFailure f) {
    res.failure = f;
    return res;
  };

  while (true) {
    if (m.halting(q)) return fail(CompatFailure::HaltInside);
    if (y.size() >= 2) {
      std::vector<int> key{q, static_cast<int>(head)};
      key.insert(key.end(), tape.begin(), tape.end());
      if (!seen.insert(std::move(key)).second) return fail(CompatFailure::LoopInside);
    }
    const Transition& tr = m.step(q, tape[static_cast<std::size_t>(head)]);
    tape[static_cast<std::size_t>(head)] = tr.write;
    Cell next = head + delta_of(tr.move);
    q = tr.next;
    if (next < 0) {
      if (l >= k || s[l] != q) return fail(CompatFailure::Mismatch);
      ++l;
      if (l == k) {
        if (r != k) return fail(CompatFailure::Mismatch);
        break;
      }
      q = s[l++];
      head = 0;
      seen.clear();
    } else if (next >= len) {
      if (r >= k || s[r] != q) return fail(CompatFailure::Mismatch);
      ++r;
      if (r == k) {
        if (l != k) return fail(CompatFailure::Mismatch);
        break;
      }
      q = s[r++];
      head = len - 1;
      seen.clear();
    } else {
      auto& seq = res.internal[static_cast<std::size_t>(crossed_boundary(head, next) - 1)];
      seq.push_back(q);
      if (seq.size() > c) return fail(CompatFailure::InternalOverCap);
      head = next;
    }
  }

  res.compatible = true;
  res.part_time = k;
  for (const auto& seq : res.internal) res.part_time += seq.size();
  std::set<CrossingSequence> distinct(res.internal.begin(), res.internal.end());
  res.primitive = distinct.size() == res.internal.size() && !distinct.count(s);
  res.failure = res.primitive ? CompatFailure::None : CompatFailure::NotPrimitive;
  return res;
}

// Why building the tables stopped early.
struct TableStop {
  enum class Kind { TimeOverrun, CrossingOverCap } kind;
  Word word;
  std::uint64_t steps = 0;        // TimeOverrun: steps taken within budget floor(T)+1
  BigNat allowed = 0;             // floor(T(|w|))
  Cell boundary = 0;              // CrossingOverCap
  std::size_t length = 0;         // CrossingOverCap
};

namespace detail {

struct BaseRun {
  Word w;
  RunOutcome out;
  CrossingRecord rec;
};

// Simulates every word of length `len` under budget floor(T(len)) + 1,
// spreading the words over `jobs` workers; results come back in shortlex order.
template <TimeBound B>
std::vector<BaseRun> simulate_length(const OneTapeMachine& m, const B& bound, std::size_t len, unsigned jobs) {
  std::vector<Word> words;
  for_each_word_of_length(m.input_symbol_count(), len, [&](const Word& w) { words.push_back(w); });
  std::uint64_t budget = clamp_u64(bound.floor_eval(len) + 1);
  std::vector<BaseRun> out(words.size());
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      auto [o, rec] = record_crossings(m, words[i], budget);
      out[i] = BaseRun{words[i], o, std::move(rec)};
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(words.size() / 64 + 1)));
  if (jobs == 1) {
    work(0, words.size());
  } else {
    std::vector<std::future<void>> fs;
    std::size_t chunk = (words.size() + jobs - 1) / jobs;
    for (std::size_t from = 0; from < words.size(); from += chunk)
      fs.push_back(std::async(std::launch::async, work, from, std::min(words.size(), from + chunk)));
    for (auto& f : fs) f.get();
  }
  return out;
}

}  // namespace detail

// Adds every input of length tables.length_done .. limit to the base tables.
template <TimeBound B>
std::optional<TableStop> extend_base_tables(const OneTapeMachine& m, const B& bound, AnalysisTables& t,
                                            std::size_t limit, Effort& effort, unsigned jobs = 1) {
  t.alphabet = m.input_symbol_count();
  for (std::size_t len = t.length_done; len <= limit; ++len) {
    BigNat allowed = bound.floor_eval(len);
    auto runs = detail::simulate_length(m, bound, len, jobs);
    for (auto& run : runs) {
      effort.charge(run.out.steps + 1, "base-table simulation");
      ++t.words_simulated;
      if (BigNat(run.out.steps) > allowed || !run.out.halted())
        return TableStop{TableStop::Kind::TimeOverrun, run.w, run.out.steps, allowed, 0, 0};
    }
    for (auto& run : runs) {
      for (const auto& [b, seq] : run.rec.boundaries)
        if (seq.size() > t.c) return TableStop{TableStop::Kind::CrossingOverCap, run.w, run.out.steps, allowed, b, seq.size()};
      BaseWord bw{run.w, {}, run.out.steps, run.out.status};
      for (std::size_t b = 1; b <= len; ++b) bw.seqs.push_back(t.intern(run.rec.at(static_cast<Cell>(b))));
      std::set<SeqId> distinct(bw.seqs.begin(), bw.seqs.end());
      if (distinct.size() == bw.seqs.size()) t.X.push_back(std::move(bw));
    }
    t.length_done = len + 1;
  }
  t.limit = std::max(t.limit, limit);
  return std::nullopt;
}

// Closes Y and S: every s in S is probed against every part of length
// 1..limit; primitive parts contribute their internal sequences to S.
inline void saturate_tables(const OneTapeMachine& m, AnalysisTables& t, std::size_t limit, Effort& effort) {
  t.limit = std::max(t.limit, limit);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < t.sequences.size(); ++s) {
      if (t.probed[s] >= limit) continue;
      changed = true;
      for (std::size_t len = t.probed[s] + 1; len <= limit; ++len) {
        for_each_word_of_length(t.alphabet, len, [&](const Word& y) {
          effort.charge(len * (t.sequences[s].size() + 1), "part probing");
          ++t.probes;
          CompatResult r = probe_primitive_compat(m, t.sequences[s], y, t.c);
          if (!r.primitive) return;
          Part p{static_cast<SeqId>(s), y, {}, r.part_time};
          for (const auto& seq : r.internal) p.internal.push_back(t.intern(seq));
          t.Y[s].push_back(std::move(p));
        });
      }
      t.probed[s] = limit;
    }
  }
}

// Base tables for every input of length <= limit, without saturation.
template <TimeBound B>
std::pair<AnalysisTables, std::optional<TableStop>> build_base_tables(const OneTapeMachine& m, const B& bound,
                                                                      std::uint64_t c, std::size_t limit,
                                                                      std::uint64_t effort_limit = 50'000'000) {
  AnalysisTables t;
  t.c = c;
  t.K = sequence_count_bound(std::max<std::size_t>(m.state_count(), 2), c);
  Effort effort(effort_limit);
  auto stop = extend_base_tables(m, bound, t, limit, effort);
  return {std::move(t), stop};
}

// Monotone closure: starting from the sequences x produces, consume parts
// whose sequence is available. True iff every part in the family is consumed.
inline bool realizable(const AnalysisTables& t, const BaseWord& x, const std::vector<PartRef>& family,
                       std::vector<PartRef>* order = nullptr) {
  std::set<SeqId> avail(x.seqs.begin(), x.seqs.end());
  std::vector<bool> used(family.size(), false);
  std::size_t remaining = family.size();
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (used[i] || !avail.count(family[i].s)) continue;
      used[i] = true;
      --remaining;
      progress = true;
      if (order) order->push_back(family[i]);
      for (SeqId s : t.part(family[i]).internal) avail.insert(s);
    }
  }
  return remaining == 0;
}

// Inserts each part of `plan` (applied in order, with multiplicity) at the
// first boundary carrying its sequence. Returns the composed word.
inline Word compose(const AnalysisTables& t, const BaseWord& x,
                    const std::vector<std::pair<PartRef, std::size_t>>& plan) {
  Word w = x.x;
  std::vector<SeqId> seqs = x.seqs;  // boundaries 1..|w|
  for (const auto& [ref, reps] : plan) {
    const Part& p = t.part(ref);
    auto it = std::find(seqs.begin(), seqs.end(), p.s);
    if (it == seqs.end()) throw PreconditionError("part sequence not available for insertion");
    std::size_t b = static_cast<std::size_t>(it - seqs.begin()) + 1;
    w = insert_at(w, b, p.y, reps);
    std::vector<SeqId> added;
    for (std::size_t r = 0; r < reps; ++r) {
      added.insert(added.end(), p.internal.begin(), p.internal.end());
      added.push_back(p.s);
    }
    seqs.insert(seqs.begin() + static_cast<std::ptrdiff_t>(b), added.begin(), added.end());
  }
  return w;
}

inline json tables_summary(const AnalysisTables& t) {
  std::size_t longest = 0;
  for (const auto& s : t.sequences) longest = std::max(longest, s.size());
  return {{"c", t.c},
          {"K", t.K.str()},
          {"length_limit", t.limit},
          {"X", t.X.size()},
          {"S", t.sequences.size()},
          {"parts", t.part_count()},
          {"longest_sequence", longest},
          {"words_simulated", t.words_simulated},
          {"probes", t.probes}};
}

}  // namespace tmv
