#pragma once

// Reduction gadgets: machines built from H whose running time encodes
// whether H halts on the empty input.

#include <mpfr.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "tmv/kobayashi.hpp"
#include "tmv/machine.hpp"

namespace tmv {

struct GadgetParams {
  std::uint64_t C = 6;
  std::uint64_t n0 = 0;
  std::string bound;
  std::uint64_t horizon = 0;  // inequality scanned on [n0, horizon], certified beyond
};

namespace detail {

// Smallest n0 >= lower such that floor(T(n)) >= 3 n log_C n + 6n + 1 on
// [n0, horizon]. The right side is rounded up.
template <TimeBound B>
std::optional<std::uint64_t> scan_gadget_inequality(const B& bound, std::uint64_t C, std::uint64_t lower,
                                                    std::uint64_t horizon) {
  Mpfr log_c(128), rhs(128), t(128);
  mpfr_set_ui(log_c, static_cast<unsigned long>(C), MPFR_RNDD);
  mpfr_log(log_c, log_c, MPFR_RNDD);
  std::uint64_t last_fail = lower - 1;
  for (std::uint64_t n = lower; n <= horizon; ++n) {
    mpfr_set_ui(rhs, static_cast<unsigned long>(n), MPFR_RNDU);
    mpfr_log(rhs, rhs, MPFR_RNDU);
    mpfr_div(rhs, rhs, log_c, MPFR_RNDU);
    mpfr_mul_ui(rhs, rhs, static_cast<unsigned long>(3 * n), MPFR_RNDU);
    mpfr_add_ui(rhs, rhs, static_cast<unsigned long>(6 * n + 1), MPFR_RNDU);
    t.set(bound.floor_eval(n), MPFR_RNDD);
    if (mpfr_less_p(t.get(), rhs.get())) last_fail = n;
  }
  if (last_fail == horizon) return std::nullopt;
  return last_fail + 1;
}

}  // namespace detail

// Tail certification: for n beyond the scan, T(n) = a f(n) + b.
//   poly (e >= 2): a n^{e-1} - 3 log_6 n - 7 is increasing for n >= 16, so
//     holding at the horizon it holds beyond;
//   nlog: a n floor(log2 n) >= 3 n log_6 n + 7n once
//     log2 n >= (a + 7) / (a - 1.161), which needs a >= 2.
inline GadgetParams gadget_params(const TableBound& bound, std::uint64_t horizon = 1u << 16) {
  const std::uint64_t C = 6;
  if (horizon < 16) horizon = 16;
  horizon = std::max<std::uint64_t>(horizon, bound.prefix_size());
  switch (bound.tail_kind()) {
    case TableBound::Tail::Poly: break;
    case TableBound::Tail::NLog: {
      if (bound.tail_a() < 2) throw PreconditionError("bound too small for the pass gadget: n log n tail needs a >= 2");
      double a = static_cast<double>(bound.tail_a());
      double need = std::ceil((a + 7.0) / (a - 1.161));
      if (need > 24) throw PreconditionError("bound tail certification needs a scan past 2^24");
      horizon = std::max<std::uint64_t>(horizon, std::uint64_t{1} << static_cast<unsigned>(need));
      break;
    }
    default:
      throw PreconditionError("bound " + bound.describe() + " is o(n log n); the pass gadget needs T(n) >= 3n log_6 n + 6n + 1");
  }
  auto n0 = detail::scan_gadget_inequality(bound, C, C, horizon);
  if (!n0) throw PreconditionError("bound " + bound.describe() + " never satisfies T(n) >= 3n log_6 n + 6n + 1 up to " +
                                   std::to_string(horizon));
  return GadgetParams{C, *n0, bound.describe(), horizon};
}

inline GadgetParams gadget_params(const LinearBound& bound, std::uint64_t = 0) {
  throw PreconditionError("linear bound " + bound.describe() + " is never of order n log n; the pass gadget needs one");
}

namespace detail {

inline std::string fresh_name(std::string name, const std::set<std::string>& used) {
  while (used.count(name)) name += "~";
  return name;
}

inline json transition(const std::string& q, const std::string& read, const std::string& write, Move mv,
                       const std::string& next) {
  return {{"state", q}, {"read", read}, {"write", write}, {"move", to_string(mv)}, {"next", next}};
}

inline Move opposite(Move m) { return m == Move::Left ? Move::Right : Move::Left; }

}  // namespace detail

// Two tapes: tape 0 is the input, tape 1 holds H's tape. Each step advances
// the input head and performs one step of H on the empty input; on reaching
// the blank after the input the machine accepts, so it halts after exactly
// |w| + 1 steps unless H halts earlier, in which case it loops forever.
inline MultiTapeMachine build_counting_gadget(const OneTapeMachine& H) {
  std::vector<std::string> gamma = H.symbol_names();
  std::vector<std::string> sigma;
  for (Symbol a = 0; a < static_cast<Symbol>(H.input_symbol_count()); ++a) sigma.push_back(H.symbol_name(a));
  const std::string blank = H.symbol_name(H.blank());

  std::vector<std::string> states;
  auto run = [&](State q) { return "run." + H.state_name(q); };
  for (State q = 0; q < static_cast<State>(H.state_count()); ++q)
    if (!H.halting(q)) states.push_back(run(q));
  states.insert(states.end(), {"loop", "accept", "reject"});

  json delta = json::array();
  auto add = [&](const std::string& q, const std::string& r0, const std::string& r1, const std::string& w1, Move m1,
                 const std::string& next) {
    delta.push_back({{"state", q},
                     {"read", {r0, r1}},
                     {"write", {r0, w1}},
                     {"move", {"R", to_string(m1)}},
                     {"next", next}});
  };
  for (State q = 0; q < static_cast<State>(H.state_count()); ++q) {
    if (H.halting(q)) continue;
    for (const auto& x : gamma)
      for (Symbol a = 0; a < static_cast<Symbol>(gamma.size()); ++a) {
        const Transition& t = H.step(q, a);
        const std::string next = x == blank ? "accept" : H.halting(t.next) ? "loop" : run(t.next);
        add(run(q), x, gamma[static_cast<std::size_t>(a)], H.symbol_name(t.write), t.move, next);
      }
  }
  for (const auto& x : gamma)
    for (const auto& a : gamma) add("loop", x, a, a, Move::Right, "loop");

  json doc = {{"type", "multi-tape"},
              {"tapes", 2},
              {"states", states},
              {"start", run(H.start())},
              {"accept", "accept"},
              {"reject", "reject"},
              {"input_alphabet", sigma},
              {"tape_alphabet", gamma},
              {"blank", blank},
              {"delta", delta}};
  return MultiTapeMachine::from_document(doc);
}

// One-tape head-pass gadget. State naming scheme:
//   scan.<i>, scan.long          read the input, write #1^{n-1}#
//   prep.left, prep.seek,        countdown: each rightward pass blanks one
//   prep.c<j>.k<0|1>             more cell and turns C-1 of every C ones into
//                                zeros; c<j> counts ones, k<1> = a one survived
//   prep.final, ins.seek,        two passes writing the marked blank and a blank
//   ins.2, ins.run
//   sim.<q>.<L|R>.c<j>.d<0|1>.k<0|1>
//                                simulation pass: H in state q, direction,
//                                zero counter, H step done this pass, zero kept
//   mark.<p>.<L|R>.c<j>.k<0|1>   marks H's new head cell
//   loop.<L|R>                   bounce between the # cells forever
inline OneTapeMachine build_pass_gadget(const OneTapeMachine& H, const GadgetParams& params) {
  if (params.C < 2 || params.n0 < params.C) throw PreconditionError("gadget parameters need 2 <= C <= n0");
  const std::size_t C = params.C;
  std::vector<std::string> gamma = H.symbol_names();
  std::set<std::string> used(gamma.begin(), gamma.end());
  std::vector<std::string> marked;
  for (const auto& a : gamma) {
    marked.push_back(detail::fresh_name(a + "'", used));
    used.insert(marked.back());
  }
  const std::string zero = detail::fresh_name("0", used);
  used.insert(zero);
  const std::string one = detail::fresh_name("1", used);
  used.insert(one);
  const std::string hash = detail::fresh_name("#", used);
  used.insert(hash);
  const std::string blank = H.symbol_name(H.blank());
  const std::string blank_m = marked[static_cast<std::size_t>(H.blank())];

  std::vector<std::string> sigma;
  for (Symbol a = 0; a < static_cast<Symbol>(H.input_symbol_count()); ++a) sigma.push_back(H.symbol_name(a));
  std::vector<std::string> all = gamma;
  all.insert(all.end(), marked.begin(), marked.end());
  all.insert(all.end(), {zero, one, hash});

  std::vector<std::string> states;
  json delta = json::array();
  auto add = [&](const std::string& q, const std::string& r, const std::string& w, Move m, const std::string& next) {
    delta.push_back(detail::transition(q, r, w, m, next));
  };
  const Move L = Move::Left, R = Move::Right;
  auto dname = [](Move d) { return d == Move::Left ? std::string("L") : std::string("R"); };
  auto is_input = [&](const std::string& s) { return std::find(sigma.begin(), sigma.end(), s) != sigma.end(); };

  // Phases 1 and 2.
  auto scan = [&](std::size_t i) { return i >= params.n0 ? std::string("scan.long") : "scan." + std::to_string(i); };
  for (std::size_t i = 0; i <= params.n0; ++i) {
    const std::string q = scan(i);
    states.push_back(q);
    for (const auto& s : all) {
      if (is_input(s)) add(q, s, i == 0 ? hash : one, R, scan(i + 1));
      else if (s == blank) {
        if (i >= params.n0) add(q, s, hash, L, "prep.left");
        else add(q, s, s, R, "accept");
      } else add(q, s, s, R, "reject");
    }
  }

  // Phase 3.
  auto prep = [](std::size_t j, int k) { return "prep.c" + std::to_string(j) + ".k" + std::to_string(k); };
  states.insert(states.end(), {"prep.left", "prep.seek", "prep.final", "ins.seek", "ins.2", "ins.run"});
  for (const auto& s : all) {
    if (s == hash) {
      add("prep.left", s, s, R, "prep.seek");
      add("prep.seek", s, s, L, "prep.final");
      add("prep.final", s, s, R, "ins.seek");
      add("ins.seek", s, s, L, "accept");
      add("ins.2", s, s, L, "accept");
      add("ins.run", s, s, L, "sim." + H.state_name(H.start()) + ".L.c0.d0.k0");
      continue;
    }
    add("prep.left", s, s, L, "prep.left");
    add("prep.final", s, s, L, "prep.final");
    add("ins.run", s, s, R, "ins.run");
    if (s == blank) {
      add("prep.seek", s, s, R, "prep.seek");
      add("ins.seek", s, s, R, "ins.seek");
    } else {
      add("prep.seek", s, blank, R, prep(0, 0));
      add("ins.seek", s, blank_m, R, "ins.2");
    }
    add("ins.2", s, blank, R, "ins.run");
  }
  for (std::size_t j = 0; j < C; ++j)
    for (int k = 0; k < 2; ++k) {
      const std::string q = prep(j, k);
      states.push_back(q);
      for (const auto& s : all) {
        if (s == one) {
          if (j + 1 < C) add(q, s, zero, R, prep(j + 1, k));
          else add(q, s, one, R, prep(0, 1));
        } else if (s == hash) {
          add(q, s, s, L, k ? "prep.left" : "prep.final");
        } else {
          add(q, s, s, R, q);
        }
      }
    }

  // Phases 4 and 5.
  auto sim = [&](State q, Move d, std::size_t j, int done, int kept) {
    return "sim." + H.state_name(q) + "." + dname(d) + ".c" + std::to_string(j) + ".d" + std::to_string(done) + ".k" +
           std::to_string(kept);
  };
  auto mark = [&](State q, Move d, std::size_t j, int kept) {
    return "mark." + H.state_name(q) + "." + dname(d) + ".c" + std::to_string(j) + ".k" + std::to_string(kept);
  };
  for (Move d : {L, R}) {
    const std::string lp = "loop." + dname(d);
    states.push_back(lp);
    for (const auto& s : all) add(lp, s, s, s == hash ? detail::opposite(d) : d, s == hash ? "loop." + dname(detail::opposite(d)) : lp);
  }
  for (State q = 0; q < static_cast<State>(H.state_count()); ++q) {
    if (H.halting(q)) continue;
    for (Move d : {L, R})
      for (std::size_t j = 0; j < C; ++j)
        for (int kept = 0; kept < 2; ++kept) {
          for (int done = 0; done < 2; ++done) {
            const std::string st = sim(q, d, j, done, kept);
            states.push_back(st);
            for (const auto& s : all) {
              if (s == zero) {
                if (j + 1 < C) add(st, s, blank, d, sim(q, d, j + 1, done, kept));
                else add(st, s, zero, d, sim(q, d, 0, done, 1));
              } else if (s == hash) {
                if (kept) add(st, s, s, detail::opposite(d), sim(q, detail::opposite(d), 0, 0, 0));
                else add(st, s, s, detail::opposite(d), "accept");
              } else if (auto it = std::find(marked.begin(), marked.end(), s); it != marked.end()) {
                Symbol a = static_cast<Symbol>(it - marked.begin());
                const Transition& t = H.step(q, a);
                if (done || t.move != d) {
                  add(st, s, s, d, st);
                } else if (H.halting(t.next)) {
                  add(st, s, H.symbol_name(t.write), d, "loop." + dname(d));
                } else {
                  add(st, s, H.symbol_name(t.write), d, mark(t.next, d, j, kept));
                }
              } else {
                add(st, s, s, d, st);
              }
            }
          }
          const std::string mk = mark(q, d, j, kept);
          states.push_back(mk);
          for (const auto& s : all) {
            if (s == hash) add(mk, s, s, detail::opposite(d), "accept");
            else if (s == zero) add(mk, s, blank_m, d, sim(q, d, j, 1, kept));
            else if (auto it = std::find(gamma.begin(), gamma.end(), s); it != gamma.end())
              add(mk, s, marked[static_cast<std::size_t>(it - gamma.begin())], d, sim(q, d, j, 1, kept));
            else add(mk, s, s, d, "reject");
          }
        }
  }
  states.insert(states.end(), {"accept", "reject"});

  json doc = {{"type", "one-tape"},
              {"states", states},
              {"start", scan(0)},
              {"accept", "accept"},
              {"reject", "reject"},
              {"input_alphabet", sigma},
              {"tape_alphabet", all},
              {"blank", blank},
              {"delta", delta}};
  return OneTapeMachine::from_document(doc);
}

}  // namespace tmv
