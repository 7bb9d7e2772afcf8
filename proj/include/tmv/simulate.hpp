#pragma once

// Step-exact simulation of one-tape and multi-tape machines.

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmv/machine.hpp"

namespace tmv {

using Cell = long long;

enum class RunStatus { Accepted, Rejected, BudgetExceeded };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Accepted: return "Accepted";
    case RunStatus::Rejected: return "Rejected";
    default: return "BudgetExceeded";
  }
}

inline RunStatus parse_run_status(const std::string& s) {
  if (s == "Accepted") return RunStatus::Accepted;
  if (s == "Rejected") return RunStatus::Rejected;
  if (s == "BudgetExceeded") return RunStatus::BudgetExceeded;
  throw Error("unknown run status '" + s + "'");
}

struct RunOutcome {
  RunStatus status = RunStatus::BudgetExceeded;
  std::uint64_t steps = 0;
  Cell leftmost = 0;
  Cell rightmost = 0;

  bool halted() const { return status != RunStatus::BudgetExceeded; }
  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

// Sparse tape: only non-blank cells are stored.
class Tape {
 public:
  explicit Tape(Symbol blank) : blank_(blank) {}

  static Tape from_word(const Word& w, Symbol blank) {
    Tape t(blank);
    for (std::size_t i = 0; i < w.size(); ++i) t.set(static_cast<Cell>(i), w[i]);
    return t;
  }

  Symbol blank() const { return blank_; }

  Symbol get(Cell i) const {
    auto it = cells_.find(i);
    return it == cells_.end() ? blank_ : it->second;
  }

  void set(Cell i, Symbol a) {
    if (a == blank_) cells_.erase(i);
    else cells_[i] = a;
  }

  const std::map<Cell, Symbol>& cells() const { return cells_; }

  friend bool operator==(const Tape&, const Tape&) = default;

 private:
  Symbol blank_;
  std::map<Cell, Symbol> cells_;
};

namespace detail {

// Contiguous working tape that grows in both directions.
class DenseTape {
 public:
  DenseTape(const Tape& t, Symbol blank) : blank_(blank) {
    if (!t.cells().empty()) {
      offset_ = -t.cells().begin()->first;
      data_.assign(static_cast<std::size_t>(t.cells().rbegin()->first + offset_ + 1), blank);
      for (const auto& [i, a] : t.cells()) data_[static_cast<std::size_t>(i + offset_)] = a;
    }
  }

  Symbol get(Cell i) {
    ensure(i);
    return data_[static_cast<std::size_t>(i + offset_)];
  }
  void set(Cell i, Symbol a) {
    ensure(i);
    data_[static_cast<std::size_t>(i + offset_)] = a;
  }

  Tape to_tape() const {
    Tape t(blank_);
    for (std::size_t k = 0; k < data_.size(); ++k) t.set(static_cast<Cell>(k) - offset_, data_[k]);
    return t;
  }

 private:
  void ensure(Cell i) {
    if (data_.empty()) {
      data_.assign(16, blank_);
      offset_ = 8 - i;
    }
    while (i + offset_ < 0) {
      std::size_t grow = data_.size();
      data_.insert(data_.begin(), grow, blank_);
      offset_ += static_cast<Cell>(grow);
    }
    while (static_cast<std::size_t>(i + offset_) >= data_.size()) data_.resize(data_.size() * 2, blank_);
  }

  Symbol blank_;
  std::vector<Symbol> data_;
  Cell offset_ = 0;
};

}  // namespace detail

// One simulated step, as seen by an observer.
struct StepEvent {
  std::uint64_t step;  // 1-based
  Cell from;           // head cell before the move
  Cell to;             // head cell after the move
  Symbol read;
  Symbol written;
  State state_before;
  State state_after;
};

// Every transition crosses exactly one boundary; boundary i separates cells
// i - 1 and i.
inline Cell crossed_boundary(Cell from, Cell to) { return from < to ? to : from; }

struct NoObserver {
  void operator()(const StepEvent&) const {}
};

// Global self-check of the step-sum identity: when enabled, every halting
// one-tape simulation cross-checks its step count against the per-boundary crossing
// counts. Test drivers enable it and inspect the counters.
namespace audit {
inline std::atomic<bool> enabled{false};
inline std::atomic<std::uint64_t> checked{0};
inline std::atomic<std::uint64_t> mismatches{0};

inline void reset() {
  checked = 0;
  mismatches = 0;
}

inline void record(std::uint64_t steps, std::uint64_t crossing_total) {
  ++checked;
  if (steps != crossing_total) ++mismatches;
}
}  // namespace audit

// Runs `m` on tape `t` starting at cell 0 for at most `budget` steps.
template <typename Observer = NoObserver>
RunOutcome simulate(const OneTapeMachine& m, const Tape& t, std::uint64_t budget, Observer&& observe = {},
                    Tape* final_tape = nullptr) {
  detail::DenseTape tape(t, m.blank());
  RunOutcome out;
  State q = m.start();
  Cell head = 0;
  std::uint64_t steps = 0;
  const bool auditing = audit::enabled.load(std::memory_order_relaxed);
  std::unordered_map<Cell, std::uint64_t> per_boundary;
  while (steps < budget && !m.halting(q)) {
    Symbol a = tape.get(head);
    const Transition& tr = m.step(q, a);
    tape.set(head, tr.write);
    Cell next = head + delta_of(tr.move);
    ++steps;
    if (auditing) ++per_boundary[crossed_boundary(head, next)];
    observe(StepEvent{steps, head, next, a, tr.write, q, tr.next});
    q = tr.next;
    head = next;
    out.leftmost = std::min(out.leftmost, head);
    out.rightmost = std::max(out.rightmost, head);
  }
  out.steps = steps;
  if (q == m.accept()) out.status = RunStatus::Accepted;
  else if (q == m.reject()) out.status = RunStatus::Rejected;
  else out.status = RunStatus::BudgetExceeded;
  if (auditing && out.halted()) {
    std::uint64_t total = 0;
    for (const auto& [b, n] : per_boundary) total += n;
    audit::record(out.steps, total);
  }
  if (final_tape) *final_tape = tape.to_tape();
  return out;
}

// Runs `m` on input `w`; see simulate() for the budget semantics.
inline RunOutcome run(const OneTapeMachine& m, const Word& w, std::uint64_t budget) {
  return simulate(m, Tape::from_word(w, m.blank()), budget);
}

// Multi-tape run: tape 0 holds the input, the other tapes start blank. The
// visited extent reported is that of the input-tape head.
inline RunOutcome run(const MultiTapeMachine& m, const Word& w, std::uint64_t budget) {
  const std::size_t k = m.tape_count();
  std::vector<detail::DenseTape> tapes;
  tapes.emplace_back(Tape::from_word(w, m.blank()), m.blank());
  for (std::size_t i = 1; i < k; ++i) tapes.emplace_back(Tape(m.blank()), m.blank());
  std::vector<Cell> heads(k, 0);
  std::vector<Symbol> read(k);
  RunOutcome out;
  State q = m.start();
  std::uint64_t steps = 0;
  while (steps < budget && !m.halting(q)) {
    for (std::size_t i = 0; i < k; ++i) read[i] = tapes[i].get(heads[i]);
    const MultiTransition& tr = m.step(q, read);
    for (std::size_t i = 0; i < k; ++i) {
      tapes[i].set(heads[i], tr.write[i]);
      heads[i] += delta_of(tr.move[i]);
    }
    q = tr.next;
    ++steps;
    out.leftmost = std::min(out.leftmost, heads[0]);
    out.rightmost = std::max(out.rightmost, heads[0]);
  }
  out.steps = steps;
  if (q == m.accept()) out.status = RunStatus::Accepted;
  else if (q == m.reject()) out.status = RunStatus::Rejected;
  else out.status = RunStatus::BudgetExceeded;
  return out;
}

// Shortlex enumeration of all words of length 0..max_len over an alphabet of
// `alphabet_size` symbols (symbol ids 0..alphabet_size-1).
class ShortlexWords {
 public:
  ShortlexWords(std::size_t alphabet_size, std::size_t max_len) : alpha_(alphabet_size), max_len_(max_len) {
    if (alphabet_size == 0) throw PreconditionError("alphabet must be non-empty");
  }

  // Returns false once every word has been produced.
  bool next(Word& out) {
    if (!started_) {
      started_ = true;
      current_.clear();
      out = current_;
      return true;
    }
    // Increment as a base-alpha counter; overflow grows the length.
    std::size_t i = current_.size();
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(current_[i]) + 1 < alpha_) {
        ++current_[i];
        out = current_;
        return true;
      }
      current_[i] = 0;
    }
    if (current_.size() >= max_len_) return false;
    current_.assign(current_.size() + 1, 0);
    out = current_;
    return true;
  }

 private:
  std::size_t alpha_;
  std::size_t max_len_;
  bool started_ = false;
  Word current_;
};

inline std::vector<Word> enumerate_inputs(std::size_t alphabet_size, std::size_t max_len) {
  std::vector<Word> out;
  ShortlexWords gen(alphabet_size, max_len);
  Word w;
  while (gen.next(w)) out.push_back(w);
  return out;
}

// Calls fn(word) for every word of exactly length `len`, in lexicographic order.
template <typename Fn>
void for_each_word_of_length(std::size_t alphabet_size, std::size_t len, Fn&& fn) {
  Word w(len, 0);
  while (true) {
    fn(static_cast<const Word&>(w));
    std::size_t i = len;
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(w[i]) + 1 < alphabet_size) {
        ++w[i];
        break;
      }
      w[i] = 0;
      if (i == 0) return;
    }
    if (len == 0) return;
  }
}

}  // namespace tmv
