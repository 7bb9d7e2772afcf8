#pragma once

// Crossing sequences of one-tape runs, tape cut-and-glue, and word pumping.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tmv/simulate.hpp"

namespace tmv {

using CrossingSequence = std::vector<State>;

// Boundary index -> states after each step that crossed it, in order.
// Boundaries that were never crossed are absent.
struct CrossingRecord {
  std::map<Cell, CrossingSequence> boundaries;
  std::uint64_t total_steps = 0;

  const CrossingSequence& at(Cell boundary) const {
    static const CrossingSequence empty;
    auto it = boundaries.find(boundary);
    return it == boundaries.end() ? empty : it->second;
  }

  std::uint64_t crossing_total() const {
    std::uint64_t n = 0;
    for (const auto& [b, c] : boundaries) n += c.size();
    return n;
  }

  std::size_t longest() const {
    std::size_t n = 0;
    for (const auto& [b, c] : boundaries) n = std::max(n, c.size());
    return n;
  }
};

inline std::pair<RunOutcome, CrossingRecord> record_crossings(const OneTapeMachine& m, const Tape& tape,
                                                              std::uint64_t budget) {
  CrossingRecord rec;
  auto out = simulate(m, tape, budget,
                      [&](const StepEvent& e) { rec.boundaries[crossed_boundary(e.from, e.to)].push_back(e.state_after); });
  rec.total_steps = out.steps;
  if (audit::enabled.load(std::memory_order_relaxed) && out.halted()) audit::record(out.steps, rec.crossing_total());
  return {out, std::move(rec)};
}

inline std::pair<RunOutcome, CrossingRecord> record_crossings(const OneTapeMachine& m, const Word& w,
                                                              std::uint64_t budget) {
  return record_crossings(m, Tape::from_word(w, m.blank()), budget);
}

enum class SegmentKind { LeftInfinite, Finite, RightInfinite };

// A piece of a tape between two cuts. Local coordinates:
//   LeftInfinite:  content[k] sits at -content.size() + k (cells left of the cut)
//   Finite:        content[k] sits at k
//   RightInfinite: content[k] sits at k
// Cells outside `content` on an infinite segment are blank. `origin`, when
// set, is the local coordinate of tape cell 0.
struct TapeSegment {
  SegmentKind kind = SegmentKind::Finite;
  std::vector<Symbol> content;
  std::optional<Cell> origin;
};

// Cuts `tape` at the given strictly increasing boundaries. The segment that
// holds cell 0 carries the origin marker.
inline std::vector<TapeSegment> cut(const Tape& tape, const std::vector<Cell>& boundaries) {
  if (boundaries.empty()) throw PreconditionError("cut needs at least one boundary");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (boundaries[i] <= boundaries[i - 1]) throw PreconditionError("cut boundaries must be strictly increasing");

  const auto& cells = tape.cells();
  std::vector<TapeSegment> out;
  // Left part: cells < boundaries.front().
  {
    TapeSegment s;
    s.kind = SegmentKind::LeftInfinite;
    Cell end = boundaries.front();
    Cell lo = cells.empty() ? end : std::min(end, cells.begin()->first);
    for (Cell c = lo; c < end; ++c) s.content.push_back(tape.get(c));
    if (0 < end) s.origin = 0 - end;
    out.push_back(std::move(s));
  }
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    TapeSegment s;
    s.kind = SegmentKind::Finite;
    for (Cell c = boundaries[i]; c < boundaries[i + 1]; ++c) s.content.push_back(tape.get(c));
    if (boundaries[i] <= 0 && 0 < boundaries[i + 1]) s.origin = 0 - boundaries[i];
    out.push_back(std::move(s));
  }
  {
    TapeSegment s;
    s.kind = SegmentKind::RightInfinite;
    Cell start = boundaries.back();
    Cell hi = cells.empty() ? start : std::max(start, cells.rbegin()->first + 1);
    for (Cell c = start; c < hi; ++c) s.content.push_back(tape.get(c));
    if (start <= 0) s.origin = 0 - start;
    out.push_back(std::move(s));
  }
  return out;
}

// Glues segments back into a tape; cell numbering follows the single origin
// marker.
inline Tape splice(const std::vector<TapeSegment>& segments, Symbol blank) {
  if (segments.size() < 2) throw PreconditionError("splice needs a left-infinite and a right-infinite segment");
  if (segments.front().kind != SegmentKind::LeftInfinite)
    throw PreconditionError("first segment must be left-infinite");
  if (segments.back().kind != SegmentKind::RightInfinite)
    throw PreconditionError("last segment must be right-infinite");
  for (std::size_t i = 1; i + 1 < segments.size(); ++i)
    if (segments[i].kind != SegmentKind::Finite) throw PreconditionError("middle segments must be finite");
  std::size_t markers = 0;
  for (const auto& s : segments) markers += s.origin.has_value();
  if (markers != 1) throw PreconditionError("exactly one segment must carry the origin marker");

  // Lay out with the first cut at position 0, then shift.
  std::vector<Cell> start(segments.size());
  Cell pos = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    start[i] = pos;
    if (segments[i].kind == SegmentKind::Finite) pos += static_cast<Cell>(segments[i].content.size());
  }
  Cell shift = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!s.origin) continue;
    Cell o = *s.origin;
    if (s.kind == SegmentKind::LeftInfinite && o >= 0) throw PreconditionError("origin outside left segment");
    if (s.kind == SegmentKind::Finite && (o < 0 || o >= static_cast<Cell>(s.content.size())))
      throw PreconditionError("origin outside finite segment");
    if (s.kind == SegmentKind::RightInfinite && o < 0) throw PreconditionError("origin outside right segment");
    shift = start[i] + o;
  }
  Tape t(blank);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    Cell base = start[i] - (s.kind == SegmentKind::LeftInfinite ? static_cast<Cell>(s.content.size()) : 0);
    for (std::size_t k = 0; k < s.content.size(); ++k) t.set(base + static_cast<Cell>(k) - shift, s.content[k]);
  }
  return t;
}

// Repeats the subword between boundaries i and j (0 < i < j <= |w|) `reps`
// times; reps = 0 removes it.
inline Word pump(const Word& w, std::size_t i, std::size_t j, std::size_t reps) {
  if (i == 0 || i >= j || j > w.size())
    throw PreconditionError("pump requires 0 < i < j <= |w|");
  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
  for (std::size_t r = 0; r < reps; ++r)
    out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(j), w.end());
  return out;
}

// Inserts `reps` copies of y at boundary b of x (0 <= b <= |x|).
inline Word insert_at(const Word& x, std::size_t b, const Word& y, std::size_t reps = 1) {
  if (b > x.size()) throw PreconditionError("insertion boundary out of range");
  Word out(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(b));
  for (std::size_t r = 0; r < reps; ++r) out.insert(out.end(), y.begin(), y.end());
  out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(b), x.end());
  return out;
}

inline json crossing_report(const OneTapeMachine& m, const RunOutcome& out, const CrossingRecord& rec) {
  json b = json::object();
  for (const auto& [i, seq] : rec.boundaries) {
    json states = json::array();
    for (State q : seq) states.push_back(m.state_name(q));
    b[std::to_string(i)] = states;
  }
  return {{"outcome", to_string(out.status)}, {"steps", out.steps}, {"boundaries", b}};
}

}  // namespace tmv
