#pragma once

#include <catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "tmv/tmv.hpp"

namespace support {

using namespace tmv;

inline std::string fixture_path(const std::string& name) { return std::string(TMV_FIXTURES) + "/" + name; }

inline json fixture_doc(const std::string& name) {
  std::ifstream in(fixture_path(name));
  REQUIRE(in.good());
  return json::parse(in);
}

inline OneTapeMachine one_tape(const std::string& name) { return OneTapeMachine::from_document(fixture_doc(name)); }
inline MultiTapeMachine multi_tape(const std::string& name) { return MultiTapeMachine::from_document(fixture_doc(name)); }

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(Catch::getSeed() * 1000003ull + salt); }

// Reference interpreter working on the raw JSON document with string
// symbols and a std::map tape. Shares no code with the library simulator.
struct RefRun {
  std::string outcome;  // "Accepted", "Rejected", "BudgetExceeded"
  std::uint64_t steps = 0;
  long long leftmost = 0, rightmost = 0;
  std::map<long long, std::vector<std::string>> crossings;  // boundary -> states
  std::map<long long, std::vector<int>> directions;         // boundary -> +1 / -1
  std::map<long long, std::string> tape;
};

inline RefRun reference_run(const json& doc, const std::vector<std::string>& input, std::uint64_t budget) {
  std::map<std::pair<std::string, std::string>, json> delta;
  for (const auto& t : doc["delta"]) delta[{t["state"].get<std::string>(), t["read"].get<std::string>()}] = t;
  const std::string blank = doc["blank"], acc = doc["accept"], rej = doc["reject"];
  RefRun r;
  for (std::size_t i = 0; i < input.size(); ++i) r.tape[static_cast<long long>(i)] = input[i];
  std::string q = doc["start"];
  long long head = 0;
  while (r.steps < budget && q != acc && q != rej) {
    auto it = r.tape.find(head);
    std::string a = it == r.tape.end() ? blank : it->second;
    const json& t = delta.at({q, a});
    r.tape[head] = t["write"].get<std::string>();
    long long next = head + (t["move"] == "R" ? 1 : -1);
    q = t["next"].get<std::string>();
    long long b = std::max(head, next);
    r.crossings[b].push_back(q);
    r.directions[b].push_back(next > head ? 1 : -1);
    head = next;
    r.leftmost = std::min(r.leftmost, head);
    r.rightmost = std::max(r.rightmost, head);
    ++r.steps;
  }
  r.outcome = q == acc ? "Accepted" : q == rej ? "Rejected" : "BudgetExceeded";
  return r;
}

// Random total one-tape machine: `states` working states plus qa/qr, input
// {a,b}, tape {a,b,_} or {a,_} variants. `right_bias` in [0,1] skews moves
// rightwards so that more runs halt.
inline json random_machine_doc(std::mt19937_64& g, int states, int tape_symbols, double right_bias = 0.6,
                               double halt_rate = 0.2) {
  std::vector<std::string> qs;
  for (int i = 0; i < states; ++i) qs.push_back("q" + std::to_string(i));
  std::vector<std::string> all = qs;
  all.insert(all.end(), {"qa", "qr"});
  std::vector<std::string> sigma = tape_symbols >= 3 ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{"a"};
  std::vector<std::string> gamma = sigma;
  gamma.push_back("_");
  while (static_cast<int>(gamma.size()) < tape_symbols) gamma.push_back("x" + std::to_string(gamma.size()));
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> pick_state(0, states - 1);
  std::uniform_int_distribution<int> pick_sym(0, static_cast<int>(gamma.size()) - 1);
  json delta = json::array();
  for (const auto& q : qs)
    for (const auto& a : gamma) {
      std::string next = u(g) < halt_rate ? (u(g) < 0.5 ? "qa" : "qr") : qs[static_cast<std::size_t>(pick_state(g))];
      delta.push_back({{"state", q},
                       {"read", a},
                       {"write", gamma[static_cast<std::size_t>(pick_sym(g))]},
                       {"move", u(g) < right_bias ? "R" : "L"},
                       {"next", next}});
    }
  return {{"type", "one-tape"}, {"states", all},  {"start", "q0"},  {"accept", "qa"}, {"reject", "qr"},
          {"input_alphabet", sigma}, {"tape_alphabet", gamma}, {"blank", "_"}, {"delta", delta}};
}

inline std::vector<std::string> names_of(const MachineAlphabet& m, const Word& w) { return m.word_names(w); }

// Words over {0..k-1} of length <= n, generated independently of the library.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (std::size_t a = 0; a < k; ++a) {
        Word v = w;
        v.push_back(static_cast<Symbol>(a));
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline Word word_of(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(static_cast<Symbol>(c - 'a'));
  return w;
}

}  // namespace support
