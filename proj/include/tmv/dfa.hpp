#pragma once

// Complete deterministic automata over symbol ids 0..k-1, with closure
// combinators, minimization, universality and equivalence checks.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tmv/machine.hpp"

namespace tmv {

class Dfa {
 public:
  Dfa() = default;
  explicit Dfa(std::size_t alphabet_size) : k_(alphabet_size) {}

  std::size_t alphabet_size() const { return k_; }
  std::size_t state_count() const { return accepting_.size(); }
  int start() const { return start_; }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)]; }
  int next(int q, Symbol a) const { return delta_[static_cast<std::size_t>(q) * k_ + static_cast<std::size_t>(a)]; }

  int add_state(bool accepting) {
    accepting_.push_back(accepting);
    delta_.resize(accepting_.size() * k_, -1);
    return static_cast<int>(accepting_.size() - 1);
  }
  void set_next(int q, Symbol a, int to) { delta_[static_cast<std::size_t>(q) * k_ + static_cast<std::size_t>(a)] = to; }
  void set_start(int q) { start_ = q; }
  void set_accepting(int q, bool acc) { accepting_[static_cast<std::size_t>(q)] = acc; }

  bool accepts(const Word& w) const {
    int q = start_;
    for (Symbol a : w) q = next(q, a);
    return accepting(q);
  }

  // Single-state automata.
  static Dfa empty(std::size_t k) { return constant(k, false); }
  static Dfa universal(std::size_t k) { return constant(k, true); }

  // Accepts exactly the given words.
  static Dfa words(std::size_t k, const std::vector<Word>& ws) {
    Dfa d(k);
    int dead = d.add_state(false);
    for (std::size_t a = 0; a < k; ++a) d.set_next(dead, static_cast<Symbol>(a), dead);
    int root = d.add_state(false);
    for (std::size_t a = 0; a < k; ++a) d.set_next(root, static_cast<Symbol>(a), dead);
    d.set_start(root);
    for (const Word& w : ws) {
      int q = root;
      for (Symbol a : w) {
        if (a < 0 || static_cast<std::size_t>(a) >= k) throw PreconditionError("symbol outside automaton alphabet");
        int t = d.next(q, a);
        if (t == dead) {
          t = d.add_state(false);
          for (std::size_t b = 0; b < k; ++b) d.set_next(t, static_cast<Symbol>(b), dead);
          d.set_next(q, a, t);
        }
        q = t;
      }
      d.set_accepting(q, true);
    }
    return d.minimized();
  }
  static Dfa word(std::size_t k, const Word& w) { return words(k, {w}); }
  static Dfa epsilon(std::size_t k) { return words(k, {Word{}}); }

  // Reachable part, states renumbered in BFS order (symbol order breaks ties).
  Dfa trimmed() const {
    std::vector<int> id(state_count(), -1);
    std::vector<int> order{start_};
    id[static_cast<std::size_t>(start_)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t a = 0; a < k_; ++a) {
        int t = next(order[i], static_cast<Symbol>(a));
        if (id[static_cast<std::size_t>(t)] < 0) {
          id[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
          order.push_back(t);
        }
      }
    Dfa d(k_);
    for (int q : order) d.add_state(accepting(q));
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t a = 0; a < k_; ++a)
        d.set_next(static_cast<int>(i), static_cast<Symbol>(a), id[static_cast<std::size_t>(next(order[i], static_cast<Symbol>(a)))]);
    d.set_start(0);
    return d;
  }

  // Moore partition refinement on the reachable part; the result is canonical
  // (equal languages give identical automata).
  Dfa minimized() const {
    Dfa r = trimmed();
    std::size_t n = r.state_count();
    std::vector<int> cls(n);
    for (std::size_t q = 0; q < n; ++q) cls[q] = r.accepting_[q] ? 1 : 0;
    std::size_t classes = 0;
    while (true) {
      std::map<std::vector<int>, int> sig_id;
      std::vector<int> next_cls(n);
      for (std::size_t q = 0; q < n; ++q) {
        std::vector<int> sig{cls[q]};
        for (std::size_t a = 0; a < k_; ++a) sig.push_back(cls[static_cast<std::size_t>(r.next(static_cast<int>(q), static_cast<Symbol>(a)))]);
        auto [it, fresh] = sig_id.emplace(std::move(sig), static_cast<int>(sig_id.size()));
        next_cls[q] = it->second;
      }
      cls = std::move(next_cls);
      if (sig_id.size() == classes) break;
      classes = sig_id.size();
    }
    Dfa d(k_);
    for (std::size_t c = 0; c < classes; ++c) d.add_state(false);
    for (std::size_t q = 0; q < n; ++q) {
      d.set_accepting(cls[q], r.accepting_[q]);
      for (std::size_t a = 0; a < k_; ++a)
        d.set_next(cls[q], static_cast<Symbol>(a), cls[static_cast<std::size_t>(r.next(static_cast<int>(q), static_cast<Symbol>(a)))]);
    }
    d.set_start(cls[0]);
    return d.trimmed();
  }

  Dfa complement() const {
    Dfa d = *this;
    for (std::size_t q = 0; q < d.accepting_.size(); ++q) d.accepting_[q] = !d.accepting_[q];
    return d;
  }

  friend bool operator==(const Dfa&, const Dfa&) = default;

 private:
  static Dfa constant(std::size_t k, bool acc) {
    Dfa d(k);
    int q = d.add_state(acc);
    for (std::size_t a = 0; a < k; ++a) d.set_next(q, static_cast<Symbol>(a), q);
    d.set_start(q);
    return d;
  }

  std::size_t k_ = 0;
  int start_ = 0;
  std::vector<bool> accepting_;
  std::vector<int> delta_;
};

// Epsilon-free nondeterministic automaton.
struct Nfa {
  std::size_t k = 0;
  std::vector<std::vector<std::vector<int>>> delta;  // state -> symbol -> targets
  std::vector<bool> accepting;
  std::vector<int> start;

  int add_state(bool acc) {
    delta.emplace_back(k);
    accepting.push_back(acc);
    return static_cast<int>(accepting.size() - 1);
  }

  // Copies `d` in; returns the offset of its states.
  int embed(const Dfa& d) {
    int base = static_cast<int>(accepting.size());
    for (std::size_t q = 0; q < d.state_count(); ++q) add_state(d.accepting(static_cast<int>(q)));
    for (std::size_t q = 0; q < d.state_count(); ++q)
      for (std::size_t a = 0; a < k; ++a)
        delta[base + q][a].push_back(base + d.next(static_cast<int>(q), static_cast<Symbol>(a)));
    return base;
  }
};

inline Dfa determinize(const Nfa& n) {
  Dfa d(n.k);
  std::map<std::vector<int>, int> ids;
  std::deque<std::vector<int>> work;
  auto intern = [&](std::vector<int> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    bool acc = std::any_of(set.begin(), set.end(), [&](int q) { return n.accepting[static_cast<std::size_t>(q)]; });
    int id = d.add_state(acc);
    ids.emplace(set, id);
    work.push_back(std::move(set));
    return id;
  };
  d.set_start(intern(n.start));
  while (!work.empty()) {
    std::vector<int> set = std::move(work.front());
    work.pop_front();
    int from = ids.at(set);
    for (std::size_t a = 0; a < n.k; ++a) {
      std::vector<int> to;
      for (int q : set) {
        const auto& t = n.delta[static_cast<std::size_t>(q)][a];
        to.insert(to.end(), t.begin(), t.end());
      }
      d.set_next(from, static_cast<Symbol>(a), intern(std::move(to)));
    }
  }
  return d.minimized();
}

enum class Combinator { Union, Concat, Star };

inline Dfa combine(Combinator kind, const Dfa& a, const Dfa* b = nullptr) {
  if (kind != Combinator::Star) {
    if (!b) throw PreconditionError("union and concatenation need two automata");
    if (a.alphabet_size() != b->alphabet_size()) throw PreconditionError("automata alphabets differ");
  }
  Nfa n;
  n.k = a.alphabet_size();
  switch (kind) {
    case Combinator::Union: {
      int pa = n.embed(a), pb = n.embed(*b);
      n.start = {pa + a.start(), pb + b->start()};
      break;
    }
    case Combinator::Concat: {
      int pa = n.embed(a), pb = n.embed(*b);
      int sb = pb + b->start();
      // Any move into an accepting state of A may instead jump to B's start.
      for (std::size_t q = 0; q < a.state_count(); ++q) {
        n.accepting[pa + q] = false;
        for (std::size_t x = 0; x < n.k; ++x)
          if (a.accepting(a.next(static_cast<int>(q), static_cast<Symbol>(x)))) n.delta[pa + q][x].push_back(sb);
      }
      n.start = {pa + a.start()};
      if (a.accepting(a.start())) n.start.push_back(sb);
      break;
    }
    case Combinator::Star: {
      int pa = n.embed(a);
      int sa = pa + a.start();
      for (std::size_t q = 0; q < a.state_count(); ++q)
        for (std::size_t x = 0; x < n.k; ++x)
          if (a.accepting(a.next(static_cast<int>(q), static_cast<Symbol>(x)))) n.delta[pa + q][x].push_back(sa);
      int s0 = n.add_state(true);
      n.delta[static_cast<std::size_t>(s0)] = n.delta[static_cast<std::size_t>(sa)];
      n.start = {s0};
      break;
    }
  }
  return determinize(n);
}

inline Dfa union_of(const Dfa& a, const Dfa& b) { return combine(Combinator::Union, a, &b); }
inline Dfa concat(const Dfa& a, const Dfa& b) { return combine(Combinator::Concat, a, &b); }
inline Dfa star(const Dfa& a) { return combine(Combinator::Star, a); }

struct LanguageCheck {
  bool holds = true;
  std::optional<Word> counterexample;  // shortest, shortlex-least
};

// BFS over the product of the given automata; returns the shortest word whose
// state tuple satisfies `bad`.
template <typename Bad>
std::optional<Word> shortest_word_where(const std::vector<const Dfa*>& ds, Bad&& bad) {
  std::size_t k = ds.front()->alphabet_size();
  using Tuple = std::vector<int>;
  std::map<Tuple, std::pair<Tuple, Symbol>> parent;
  Tuple s;
  for (const Dfa* d : ds) s.push_back(d->start());
  parent.emplace(s, std::pair<Tuple, Symbol>{{}, -1});
  std::deque<Tuple> work{s};
  while (!work.empty()) {
    Tuple t = std::move(work.front());
    work.pop_front();
    if (bad(t)) {
      Word w;
      for (Tuple cur = t; parent.at(cur).second >= 0; cur = parent.at(cur).first) w.push_back(parent.at(cur).second);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (std::size_t a = 0; a < k; ++a) {
      Tuple u;
      for (std::size_t i = 0; i < ds.size(); ++i) u.push_back(ds[i]->next(t[i], static_cast<Symbol>(a)));
      if (parent.emplace(u, std::pair<Tuple, Symbol>{t, static_cast<Symbol>(a)}).second) work.push_back(std::move(u));
    }
  }
  return std::nullopt;
}

inline LanguageCheck is_universal(const Dfa& d) {
  auto w = shortest_word_where({&d}, [&](const std::vector<int>& t) { return !d.accepting(t[0]); });
  return {!w.has_value(), w};
}

inline LanguageCheck is_empty(const Dfa& d) {
  auto w = shortest_word_where({&d}, [&](const std::vector<int>& t) { return d.accepting(t[0]); });
  return {!w.has_value(), w};
}

inline LanguageCheck equivalent(const Dfa& a, const Dfa& b) {
  if (a.alphabet_size() != b.alphabet_size()) throw PreconditionError("automata alphabets differ");
  auto w = shortest_word_where({&a, &b}, [&](const std::vector<int>& t) { return a.accepting(t[0]) != b.accepting(t[1]); });
  return {!w.has_value(), w};
}

// L(sub) subset of L(super); the counterexample lies in L(sub) \ L(super).
inline LanguageCheck includes(const Dfa& super, const Dfa& sub) {
  if (super.alphabet_size() != sub.alphabet_size()) throw PreconditionError("automata alphabets differ");
  auto w = shortest_word_where({&super, &sub},
                               [&](const std::vector<int>& t) { return !super.accepting(t[0]) && sub.accepting(t[1]); });
  return {!w.has_value(), w};
}

inline json dfa_to_json(const Dfa& d, const std::vector<std::string>& symbols) {
  json acc = json::array();
  json tr = json::array();
  for (std::size_t q = 0; q < d.state_count(); ++q) {
    if (d.accepting(static_cast<int>(q))) acc.push_back(q);
    for (std::size_t a = 0; a < d.alphabet_size(); ++a)
      tr.push_back({{"from", q}, {"symbol", symbols.at(a)}, {"to", d.next(static_cast<int>(q), static_cast<Symbol>(a))}});
  }
  return {{"alphabet", symbols}, {"states", d.state_count()}, {"start", d.start()}, {"accepting", acc}, {"transitions", tr}};
}

inline Dfa dfa_from_json(const json& doc) {
  try {
    auto symbols = doc.at("alphabet").get<std::vector<std::string>>();
    std::map<std::string, Symbol> sym;
    for (std::size_t i = 0; i < symbols.size(); ++i) sym[symbols[i]] = static_cast<Symbol>(i);
    Dfa d(symbols.size());
    std::size_t n = doc.at("states").get<std::size_t>();
    for (std::size_t q = 0; q < n; ++q) d.add_state(false);
    for (const auto& q : doc.at("accepting")) d.set_accepting(q.get<int>(), true);
    std::size_t filled = 0;
    for (const auto& t : doc.at("transitions")) {
      int from = t.at("from").get<int>(), to = t.at("to").get<int>();
      if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= n || static_cast<std::size_t>(to) >= n)
        throw ValidationError("transition state out of range");
      d.set_next(from, sym.at(t.at("symbol").get<std::string>()), to);
      ++filled;
    }
    if (filled != n * symbols.size()) throw ValidationError("automaton transition map is not total");
    d.set_start(doc.at("start").get<int>());
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed automaton document: ") + e.what());
  }
}

inline std::string dfa_to_dot(const Dfa& d, const std::vector<std::string>& symbols, const std::string& name = "dfa") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t q = 0; q < d.state_count(); ++q)
    out << "  s" << q << " [shape=" << (d.accepting(static_cast<int>(q)) ? "doublecircle" : "circle") << ", label=\"" << q
        << "\"];\n";
  out << "  __start -> s" << d.start() << ";\n";
  for (std::size_t q = 0; q < d.state_count(); ++q) {
    std::map<int, std::string> labels;
    for (std::size_t a = 0; a < d.alphabet_size(); ++a) {
      auto& l = labels[d.next(static_cast<int>(q), static_cast<Symbol>(a))];
      if (!l.empty()) l += ",";
      for (char ch : symbols.at(a)) {
        if (ch == '"' || ch == '\\') l += '\\';
        l += ch;
      }
    }
    for (const auto& [to, l] : labels) out << "  s" << q << " -> s" << to << " [label=\"" << l << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tmv
