#pragma once

// Deciding whether a machine runs within a time bound T(n).

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "tmv/kobayashi.hpp"
#include "tmv/regular.hpp"

namespace tmv {

enum class VerdictKind { RunsInTime, Violation, Inconclusive };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::RunsInTime: return "RunsInTime";
    case VerdictKind::Violation: return "Violation";
    default: return "Inconclusive";
  }
}

inline VerdictKind parse_verdict_kind(const std::string& s) {
  if (s == "RunsInTime") return VerdictKind::RunsInTime;
  if (s == "Violation") return VerdictKind::Violation;
  if (s == "Inconclusive") return VerdictKind::Inconclusive;
  throw Error("unknown verdict kind '" + s + "'");
}

// Violation either carries `witness`, a word whose run exceeds floor(T(|w|))
// steps, or leaves it empty and describes a structural certificate.
struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<Word> witness;
  std::string detail;
  std::string exhausted;  // Inconclusive: "cap_c", "max_len" or "effort"
  json certificate;       // structural evidence, null when absent

  static Verdict runs_in_time(std::string detail) { return {VerdictKind::RunsInTime, std::nullopt, std::move(detail), "", nullptr}; }
  static Verdict violation(Word w, std::string detail) {
    return {VerdictKind::Violation, std::move(w), std::move(detail), "", nullptr};
  }
  static Verdict structural(std::string detail, json cert) {
    return {VerdictKind::Violation, std::nullopt, std::move(detail), "", std::move(cert)};
  }
  static Verdict inconclusive(std::string exhausted, std::string detail) {
    return {VerdictKind::Inconclusive, std::nullopt, std::move(detail), std::move(exhausted), nullptr};
  }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline json verdict_to_json(const Verdict& v, const MachineAlphabet& a) {
  json j = {{"kind", to_string(v.kind)}, {"detail", v.detail}};
  if (v.witness) {
    j["witness"] = a.format_word(*v.witness);
    j["witness_symbols"] = a.word_names(*v.witness);
  }
  if (v.kind == VerdictKind::Inconclusive) j["exhausted"] = v.exhausted;
  if (!v.certificate.is_null()) j["certificate"] = v.certificate;
  return j;
}

inline Verdict verdict_from_json(const json& j, const MachineAlphabet& a) {
  Verdict v;
  v.kind = parse_verdict_kind(j.at("kind").get<std::string>());
  v.detail = j.value("detail", std::string());
  if (j.contains("witness_symbols")) v.witness = a.word_from_names(j.at("witness_symbols").get<std::vector<std::string>>());
  v.exhausted = j.value("exhausted", std::string());
  if (j.contains("certificate")) v.certificate = j.at("certificate");
  return v;
}

struct CheckLimits {
  std::optional<std::uint64_t> cap_c;
  std::optional<std::uint64_t> max_len;
  std::uint64_t effort = 50'000'000;
  unsigned jobs = 1;
  KobayashiLimits kobayashi;
  // Reused instead of recomputing when q and the bound match.
  std::optional<KobayashiConstant> known_constant;
};

struct AnalysisResult {
  Verdict verdict;
  std::optional<AnalysisTables> tables;  // present when the full procedure ran
  std::optional<BigNat> trivial_n0;
  bool certified_c = false;
  bool certified_len = false;
  std::optional<KobayashiConstant> kobayashi;
  std::uint64_t families_checked = 0;
  std::size_t coverage_states = 0;
  std::uint64_t effort_used = 0;
  // Trivial branch: outcome per word of length <= n0, in shortlex order.
  std::vector<std::pair<Word, RunStatus>> behaviours;
};

// One family: true iff T_x + sum k_i T_i <= T(|x| + sum k_i |y_i|)
// for every choice of multiplicities k_i >= 1.
template <TimeBound B>
bool check_family_inequality(const B& bound, const AnalysisTables& t, const BaseWord& x,
                             const std::vector<PartRef>& family) {
  if (family.empty()) return BigNat(x.steps) <= bound.floor_eval(x.x.size());
  if (x.x.empty()) throw PreconditionError("the empty base word admits no insertions");
  std::vector<BigNat> A{BigNat(x.x.size())}, Bv{BigNat(x.steps)};
  for (const PartRef& r : family) {
    const Part& p = t.part(r);
    A[0] += p.y.size();
    Bv[0] += p.time;
    A.push_back(p.y.size());
    Bv.push_back(p.time);
  }
  return !bound.decide_linear_inequality(A, Bv);
}

namespace detail {

inline std::string words_text(const MachineAlphabet& a, const Word& w) {
  std::string s = a.format_word(w);
  return s.empty() ? "eps" : "\"" + s + "\"";
}

inline Word pad(Word w, std::size_t len) {
  w.resize(std::max(len, w.size()), 0);
  return w;
}

// Shared by the one-tape and multi-tape trivial branches: all inputs of
// length <= n0 are simulated; past n0 the machine cannot see beyond cell
// n0 - 1, so its worst case T_w at length n0 repeats at every longer length.
template <typename M, TimeBound B>
AnalysisResult trivial_branch(const M& m, const B& bound, const BigNat& n0_big, const CheckLimits& limits) {
  AnalysisResult res;
  res.trivial_n0 = n0_big;
  Effort effort(limits.effort);
  try {
    if (n0_big > 64) throw EffortExceeded("trivial-branch enumeration");
    std::size_t n0 = static_cast<std::size_t>(n0_big);
    std::uint64_t t_w = 0;
    Word arg;
    for (std::size_t n = 0; n <= n0; ++n) {
      BigNat allowed = bound.floor_eval(n);
      std::uint64_t budget = clamp_u64(allowed + 1);
      std::optional<Verdict> bad;
      for_each_word_of_length(m.input_symbol_count(), n, [&](const Word& w) {
        if (bad) return;
        RunOutcome out = run(m, w, budget);
        effort.charge(out.steps + 1, "trivial-branch enumeration");
        if (!out.halted() || BigNat(out.steps) > allowed) {
          bad = Verdict::violation(w, "input " + words_text(m, w) + " needs more than " + allowed.str() + " steps");
          return;
        }
        res.behaviours.emplace_back(w, out.status);
        if (n == n0 && (out.steps > t_w || arg.size() != n0)) {
          t_w = out.steps;
          arg = w;
        }
      });
      if (bad) {
        res.verdict = *bad;
        res.effort_used = effort.used();
        return res;
      }
    }
    // Is there n > n0 with T(n) < T_w?
    if (bound.decide_linear_inequality({BigNat(n0 + 1), BigNat(1)}, {BigNat(t_w), BigNat(0)})) {
      for (std::size_t n = n0 + 1; n <= n0 + 4096; ++n)
        if (bound.floor_eval(n) < t_w) {
          Word w = pad(arg, n);
          res.verdict = Verdict::violation(w, "input " + words_text(m, w) + " needs " + std::to_string(t_w) +
                                                  " steps, more than " + bound.floor_eval(n).str());
          res.effort_used = effort.used();
          return res;
        }
      res.verdict = Verdict::structural("worst case " + std::to_string(t_w) + " steps exceeds T(n) for some n > " +
                                            std::to_string(n0),
                                        {{"kind", "trivial-tail"}, {"n0", n0}, {"T_w", t_w}});
    } else {
      res.verdict = Verdict::runs_in_time("every input of length <= " + std::to_string(n0) +
                                          " checked; longer inputs repeat the worst case of " + std::to_string(t_w) +
                                          " steps");
    }
  } catch (const EffortExceeded& e) {
    res.verdict = Verdict::inconclusive("effort", std::string("effort limit reached during ") + e.what());
  }
  res.effort_used = effort.used();
  return res;
}

// Enumerates parts reachable from x (monotone closure) and, for each, the
// chain of parts needed to make its sequence available.
inline std::vector<std::pair<PartRef, std::vector<PartRef>>> reachable_parts(const AnalysisTables& t,
                                                                             const BaseWord& x) {
  std::map<SeqId, std::vector<PartRef>> chain_to;  // sequence -> parts that make it available
  for (SeqId s : x.seqs) chain_to.emplace(s, std::vector<PartRef>{});
  std::vector<std::pair<PartRef, std::vector<PartRef>>> out;
  std::set<PartRef> done;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t s = 0; s < t.Y.size(); ++s) {
      auto it = chain_to.find(static_cast<SeqId>(s));
      if (it == chain_to.end()) continue;
      for (std::size_t i = 0; i < t.Y[s].size(); ++i) {
        PartRef r{static_cast<SeqId>(s), i};
        if (!done.insert(r).second) continue;
        progress = true;
        std::vector<PartRef> chain = chain_to.at(static_cast<SeqId>(s));
        out.emplace_back(r, chain);
        chain.push_back(r);
        for (SeqId si : t.part(r).internal) chain_to.emplace(si, chain);
      }
    }
  }
  return out;
}

}  // namespace detail

// Family inequalities over every base word and every realizable family. Returns a
// Violation, or nullopt when every inequality holds.
template <TimeBound B>
std::optional<Verdict> check_all_families(const OneTapeMachine& m, const B& bound, const AnalysisTables& t,
                                          Effort& effort, std::uint64_t& families) {
  for (const BaseWord& x : t.X) {
    ++families;
    if (!check_family_inequality(bound, t, x, {}))
      return Verdict::violation(x.x, "base word exceeds its bound");
    if (x.x.empty()) continue;
    auto reach = detail::reachable_parts(t, x);

    if constexpr (std::is_same_v<B, LinearBound>) {
      // Violated iff some reachable part grows faster than C per symbol; the
      // chain that enables it plus enough copies of it gives the witness.
      for (const auto& [ref, chain] : reach) {
        ++families;
        effort.charge(1, "family inequalities");
        const Part& p = t.part(ref);
        if (BigNat(p.time) <= bound.C() * p.y.size()) continue;
        BigNat len = x.x.size(), steps = x.steps;
        for (const PartRef& r : chain) {
          len += t.part(r).y.size();
          steps += t.part(r).time;
        }
        BigNat slope = BigNat(p.time) - bound.C() * p.y.size();
        BigNat deficit = bound.floor_eval(len) - steps;  // may be negative
        BigNat reps = deficit < 0 ? BigNat(1) : deficit / slope + 1;
        std::vector<std::pair<PartRef, std::size_t>> plan;
        for (const PartRef& r : chain) plan.emplace_back(r, 1);
        plan.emplace_back(ref, clamp_u64(reps));
        json cert = {{"kind", "family-inequality"},
                     {"base", m.format_word(x.x)},
                     {"part", m.format_word(p.y)},
                     {"part_sequence", t.sequences[static_cast<std::size_t>(p.s)].size()},
                     {"part_time", p.time},
                     {"copies", reps.str()}};
        if (reps <= 4096) {
          Word w = compose(t, x, plan);
          return Verdict{VerdictKind::Violation, w,
                         "inserting " + reps.str() + " copies of " + detail::words_text(m, p.y) + " into " +
                             detail::words_text(m, x.x) + " exceeds the bound",
                         "", cert};
        }
        return Verdict::structural("family inequality fails", cert);
      }
    } else {
      // General bounds: every subset of the reachable parts that is
      // realizable from x.
      std::vector<PartRef> refs;
      for (const auto& [ref, chain] : reach) refs.push_back(ref);
      if (refs.size() > 40) throw EffortExceeded("family enumeration");
      const std::uint64_t total = std::uint64_t{1} << refs.size();
      for (std::uint64_t mask = 1; mask < total; ++mask) {
        effort.charge(refs.size() + 1, "family inequalities");
        std::vector<PartRef> fam;
        for (std::size_t i = 0; i < refs.size(); ++i)
          if (mask >> i & 1) fam.push_back(refs[i]);
        std::vector<PartRef> order;
        if (!realizable(t, x, fam, &order)) continue;
        ++families;
        if (check_family_inequality(bound, t, x, fam)) continue;
        json parts = json::array();
        for (const PartRef& r : order) parts.push_back(m.format_word(t.part(r).y));
        json cert = {{"kind", "family-inequality"}, {"base", m.format_word(x.x)}, {"parts", parts}};
        // Look for a concrete witness with equal multiplicities.
        for (std::size_t k = 1; k <= 256; ++k) {
          std::vector<std::pair<PartRef, std::size_t>> plan;
          BigNat len = x.x.size(), steps = x.steps;
          for (const PartRef& r : order) {
            plan.emplace_back(r, k);
            len += t.part(r).y.size() * k;
            steps += t.part(r).time * k;
          }
          if (bound.floor_eval(len) < steps) {
            Word w = compose(t, x, plan);
            return Verdict{VerdictKind::Violation, w, "composed input exceeds the bound", "", cert};
          }
        }
        return Verdict::structural("family inequality fails", cert);
      }
    }
  }
  return std::nullopt;
}

// The full one-tape procedure. The enumeration length grows one step at a
// time: a universal coverage automaton together with passing inequalities
// already proves the bound, so the search stops at the first length where
// that happens instead of enumerating up to K.
template <TimeBound B>
AnalysisResult analyze_one_tape(const OneTapeMachine& m, const B& bound, const CheckLimits& limits = {}) {
  if (auto n0 = bound.find_trivial_n0()) return detail::trivial_branch(m, bound, *n0, limits);

  AnalysisResult res;
  const std::uint64_t q = std::max<std::uint64_t>(m.state_count(), 2);
  std::uint64_t c;
  if (limits.cap_c) {
    c = *limits.cap_c;
  } else {
    const auto& known = limits.known_constant;
    if (known && known->q == q && known->bound == bound.describe()) res.kobayashi = *known;
    else res.kobayashi = kobayashi_constant(q, bound, limits.kobayashi);
    c = res.kobayashi->c;
    res.certified_c = true;
  }
  AnalysisTables t;
  t.c = c;
  t.K = sequence_count_bound(q, c);
  t.alphabet = m.input_symbol_count();
  BigNat max_len = t.K;
  if (limits.max_len && BigNat(*limits.max_len) < max_len) max_len = *limits.max_len;
  else res.certified_len = true;
  const bool certified = res.certified_c && res.certified_len;

  Effort effort(limits.effort);
  auto finish = [&](Verdict v) {
    res.verdict = std::move(v);
    res.effort_used = effort.used();
    res.tables = std::move(t);
    return res;
  };

  try {
    for (std::size_t len = 0;; ++len) {
      if (auto stop = extend_base_tables(m, bound, t, len, effort, limits.jobs)) {
        if (stop->kind == TableStop::Kind::TimeOverrun)
          return finish(Verdict::violation(stop->word, "input " + detail::words_text(m, stop->word) + " runs past " +
                                                           stop->allowed.str() + " steps"));
        json cert = {{"kind", "crossing-length"},
                     {"input", m.format_word(stop->word)},
                     {"boundary", stop->boundary},
                     {"length", stop->length},
                     {"c", c}};
        if (res.certified_c)
          return finish(Verdict::structural("input " + detail::words_text(m, stop->word) +
                                                " produces a crossing sequence longer than the certified bound c = " +
                                                std::to_string(c),
                                            cert));
        return finish(Verdict::inconclusive("cap_c", "crossing sequence of length " + std::to_string(stop->length) +
                                                         " exceeds cap c = " + std::to_string(c)));
      }
      saturate_tables(m, t, len, effort);

      PartLanguages langs(t, &effort);
      Dfa cover = coverage_automaton(t, langs, &effort);
      res.coverage_states = cover.state_count();
      LanguageCheck u = is_universal(cover);
      if (u.holds) {
        if (auto v = check_all_families(m, bound, t, effort, res.families_checked)) return finish(*v);
        if (certified)
          return finish(Verdict::runs_in_time("coverage is universal and every family inequality holds (length " +
                                              std::to_string(len) + ")"));
        return finish(Verdict::inconclusive(res.certified_c ? "max_len" : "cap_c",
                                            "analysis passed under user caps; the caps are not certified"));
      }
      if (BigNat(len) >= max_len) {
        json cert = {{"kind", "coverage-gap"}, {"word", m.format_word(*u.counterexample)}, {"length", len}};
        if (certified)
          return finish(Verdict::structural("input " + detail::words_text(m, *u.counterexample) +
                                                " cannot be assembled from base words and parts",
                                            cert));
        Verdict v = Verdict::inconclusive(res.certified_len ? "cap_c" : "max_len",
                                          "coverage incomplete at length limit " + std::to_string(len));
        v.certificate = cert;
        return finish(v);
      }
    }
  } catch (const EffortExceeded& e) {
    return finish(Verdict::inconclusive("effort", std::string("effort limit reached during ") + e.what()));
  }
}

template <TimeBound B>
Verdict check_time_one_tape(const OneTapeMachine& m, const B& bound, const CheckLimits& limits = {}) {
  return analyze_one_tape(m, bound, limits).verdict;
}

// Any machine type under a bound with T(n0) < n0 + 1 for some n0.
template <typename M, TimeBound B>
AnalysisResult analyze_trivial_only(const M& m, const B& bound, const CheckLimits& limits = {}) {
  auto n0 = bound.find_trivial_n0();
  if (!n0)
    throw OutsideDecidableRange("outside decidable range: T(n) >= n + 1 for every n, so running time of multi-tape "
                                "machines cannot be verified for this bound");
  return detail::trivial_branch(m, bound, *n0, limits);
}

template <TimeBound B>
AnalysisResult analyze_multi_tape(const MultiTapeMachine& m, const B& bound, const CheckLimits& limits = {}) {
  return analyze_trivial_only(m, bound, limits);
}

template <TimeBound B>
Verdict check_time_multi_tape(const MultiTapeMachine& m, const B& bound, const CheckLimits& limits = {}) {
  return analyze_multi_tape(m, bound, limits).verdict;
}

}  // namespace tmv
