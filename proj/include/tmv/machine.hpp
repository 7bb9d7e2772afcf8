#pragma once

// Deterministic one-tape and multi-tape Turing machines: the document schema,
// validation, and symbol/state interning.
//
// Machine document (JSON):
//   {
//     "type": "one-tape" | "multi-tape",
//     "states": [...], "start": s, "accept": s, "reject": s,
//     "input_alphabet": [...], "tape_alphabet": [...], "blank": b,
//     "tapes": k,                       // multi-tape only, k >= 2
//     "delta": [ {"state": s, "read": x, "write": y, "move": "L"|"R", "next": t}, ...]
//   }
// Multi-tape transitions use arrays of length k for read, write and move.
// Tape 0 of a multi-tape machine is the read-only input tape.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tmv/error.hpp"

namespace tmv {

using json = nlohmann::json;

using State = int;
using Symbol = int;
// Input words are sequences of symbol ids; input symbols occupy ids
// [0, |input alphabet|) in every machine.
using Word = std::vector<Symbol>;

enum class Move : std::int8_t { Left = -1, Right = 1 };

inline int delta_of(Move m) { return static_cast<int>(m); }

inline const char* to_string(Move m) { return m == Move::Left ? "L" : "R"; }

inline Move parse_move(const std::string& s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  if (s == "S" || s == "N" || s == "0")
    throw ValidationError("stay move '" + s + "' is not allowed: every transition moves the head");
  throw ValidationError("unknown move '" + s + "'");
}

// Shared naming data of both machine kinds.
class MachineAlphabet {
 public:
  MachineAlphabet() = default;

  std::size_t state_count() const { return state_names_.size(); }
  std::size_t tape_symbol_count() const { return symbol_names_.size(); }
  std::size_t input_symbol_count() const { return input_size_; }

  const std::string& state_name(State q) const { return state_names_.at(q); }
  const std::string& symbol_name(Symbol a) const { return symbol_names_.at(a); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& symbol_names() const { return symbol_names_; }
  std::vector<std::string> input_alphabet() const {
    return {symbol_names_.begin(), symbol_names_.begin() + static_cast<std::ptrdiff_t>(input_size_)};
  }

  std::optional<State> find_state(const std::string& name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Symbol> find_symbol(const std::string& name) const {
    auto it = symbol_index_.find(name);
    if (it == symbol_index_.end()) return std::nullopt;
    return it->second;
  }

  State start() const { return start_; }
  State accept() const { return accept_; }
  State reject() const { return reject_; }
  Symbol blank() const { return blank_; }
  bool halting(State q) const { return q == accept_ || q == reject_; }
  bool is_input_symbol(Symbol a) const { return a >= 0 && static_cast<std::size_t>(a) < input_size_; }

  // Renders a word: symbols are concatenated when every tape symbol is a
  // single character, otherwise separated by spaces.
  std::string format_word(const Word& w) const {
    std::string out;
    bool compact = single_char_symbols();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i) out += ' ';
      out += symbol_names_.at(w[i]);
    }
    return out;
  }

  Word parse_word(const std::string& text) const {
    Word w;
    if (text.find_first_of(" ,") == std::string::npos && single_char_symbols()) {
      for (char ch : text) w.push_back(input_symbol(std::string(1, ch)));
      return w;
    }
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) w.push_back(input_symbol(cur));
      cur.clear();
    };
    for (char ch : text) {
      if (ch == ' ' || ch == ',') flush();
      else cur += ch;
    }
    flush();
    return w;
  }

  Word word_from_names(const std::vector<std::string>& names) const {
    Word w;
    for (const auto& n : names) w.push_back(input_symbol(n));
    return w;
  }

  std::vector<std::string> word_names(const Word& w) const {
    std::vector<std::string> out;
    for (Symbol a : w) out.push_back(symbol_names_.at(a));
    return out;
  }

 protected:
  bool single_char_symbols() const {
    for (std::size_t i = 0; i < input_size_; ++i)
      if (symbol_names_[i].size() != 1) return false;
    return true;
  }

  Symbol input_symbol(const std::string& name) const {
    auto a = find_symbol(name);
    if (!a || !is_input_symbol(*a)) throw ValidationError("'" + name + "' is not an input symbol");
    return *a;
  }

  // Reads and checks the parts common to both machine kinds.
  void load_alphabet(const json& doc) {
    auto names = [&](const char* key) {
      if (!doc.contains(key) || !doc[key].is_array())
        throw ValidationError(std::string("missing array '") + key + "'");
      std::vector<std::string> out;
      for (const auto& v : doc[key]) {
        if (!v.is_string() || v.get<std::string>().empty())
          throw ValidationError(std::string("entries of '") + key + "' must be non-empty strings");
        out.push_back(v.get<std::string>());
      }
      return out;
    };
    auto field = [&](const char* key) {
      if (!doc.contains(key) || !doc[key].is_string())
        throw ValidationError(std::string("missing string '") + key + "'");
      return doc[key].get<std::string>();
    };

    state_names_ = names("states");
    if (state_names_.empty()) throw ValidationError("machine has no states");
    for (std::size_t i = 0; i < state_names_.size(); ++i) {
      if (!state_index_.emplace(state_names_[i], static_cast<State>(i)).second)
        throw ValidationError("duplicate state '" + state_names_[i] + "'");
    }

    auto sigma = names("input_alphabet");
    auto gamma = names("tape_alphabet");
    std::string blank = field("blank");
    if (sigma.empty()) throw ValidationError("input alphabet must be non-empty");
    std::set<std::string> gamma_set;
    for (const auto& g : gamma)
      if (!gamma_set.insert(g).second) throw ValidationError("duplicate tape symbol '" + g + "'");
    std::set<std::string> sigma_set;
    for (const auto& a : sigma) {
      if (!sigma_set.insert(a).second) throw ValidationError("duplicate input symbol '" + a + "'");
      if (a == blank) throw ValidationError("blank symbol '" + blank + "' must not be declared in the input alphabet");
      if (!gamma_set.count(a)) throw ValidationError("input symbol '" + a + "' missing from tape alphabet");
    }
    if (!gamma_set.count(blank)) throw ValidationError("blank '" + blank + "' missing from tape alphabet");

    // Input symbols first, then the remaining tape symbols in document order.
    symbol_names_ = sigma;
    input_size_ = sigma.size();
    for (const auto& g : gamma)
      if (!sigma_set.count(g)) symbol_names_.push_back(g);
    for (std::size_t i = 0; i < symbol_names_.size(); ++i)
      symbol_index_.emplace(symbol_names_[i], static_cast<Symbol>(i));
    blank_ = symbol_index_.at(blank);

    start_ = require_state(field("start"));
    accept_ = require_state(field("accept"));
    reject_ = require_state(field("reject"));
    if (start_ == accept_ || start_ == reject_ || accept_ == reject_)
      throw ValidationError("start, accept and reject states must be pairwise distinct");
  }

  State require_state(const std::string& name) const {
    auto q = find_state(name);
    if (!q) throw ValidationError("unknown state '" + name + "'");
    return *q;
  }
  Symbol require_symbol(const std::string& name) const {
    auto a = find_symbol(name);
    if (!a) throw ValidationError("symbol '" + name + "' is not in the tape alphabet");
    return *a;
  }

  json alphabet_document() const {
    json doc;
    doc["states"] = state_names_;
    doc["start"] = state_names_[start_];
    doc["accept"] = state_names_[accept_];
    doc["reject"] = state_names_[reject_];
    doc["input_alphabet"] = input_alphabet();
    doc["tape_alphabet"] = symbol_names_;
    doc["blank"] = symbol_names_[blank_];
    return doc;
  }

  std::vector<std::string> state_names_;
  std::vector<std::string> symbol_names_;
  std::unordered_map<std::string, State> state_index_;
  std::unordered_map<std::string, Symbol> symbol_index_;
  std::size_t input_size_ = 0;
  Symbol blank_ = 0;
  State start_ = 0, accept_ = 0, reject_ = 0;
};

struct Transition {
  State next;
  Symbol write;
  Move move;
};

class OneTapeMachine : public MachineAlphabet {
 public:
  static OneTapeMachine from_document(const json& doc) {
    OneTapeMachine m;
    if (doc.value("type", std::string("one-tape")) != "one-tape")
      throw ValidationError("document type is not 'one-tape'");
    m.load_alphabet(doc);
    const std::size_t g = m.tape_symbol_count();
    m.delta_.assign(m.state_count() * g, std::nullopt);
    if (!doc.contains("delta") || !doc["delta"].is_array()) throw ValidationError("missing array 'delta'");
    for (const auto& t : doc["delta"]) {
      State q = m.require_state(t.at("state").get<std::string>());
      Symbol r = m.require_symbol(t.at("read").get<std::string>());
      Symbol w = m.require_symbol(t.at("write").get<std::string>());
      Move mv = parse_move(t.at("move").get<std::string>());
      State p = m.require_state(t.at("next").get<std::string>());
      if (m.halting(q))
        throw ValidationError("halting state '" + m.state_name(q) + "' must not have outgoing transitions");
      auto& slot = m.delta_[q * g + r];
      if (slot) throw ValidationError("duplicate transition for (" + m.state_name(q) + ", " + m.symbol_name(r) + ")");
      slot = Transition{p, w, mv};
    }
    for (State q = 0; q < static_cast<State>(m.state_count()); ++q) {
      if (m.halting(q)) continue;
      for (Symbol a = 0; a < static_cast<Symbol>(g); ++a)
        if (!m.delta_[q * g + a])
          throw ValidationError("missing transition for (" + m.state_name(q) + ", " + m.symbol_name(a) + ")");
    }
    return m;
  }

  // Precondition: q is not halting.
  const Transition& step(State q, Symbol a) const { return *delta_[q * tape_symbol_count() + a]; }

  json to_document() const {
    json doc = alphabet_document();
    doc["type"] = "one-tape";
    json delta = json::array();
    const std::size_t g = tape_symbol_count();
    for (State q = 0; q < static_cast<State>(state_count()); ++q) {
      if (halting(q)) continue;
      for (Symbol a = 0; a < static_cast<Symbol>(g); ++a) {
        const auto& t = *delta_[q * g + a];
        delta.push_back({{"state", state_name(q)},
                         {"read", symbol_name(a)},
                         {"write", symbol_name(t.write)},
                         {"move", to_string(t.move)},
                         {"next", state_name(t.next)}});
      }
    }
    doc["delta"] = delta;
    return doc;
  }

 private:
  std::vector<std::optional<Transition>> delta_;
};

struct MultiTransition {
  State next;
  std::vector<Symbol> write;
  std::vector<Move> move;
};

class MultiTapeMachine : public MachineAlphabet {
 public:
  static MultiTapeMachine from_document(const json& doc) {
    MultiTapeMachine m;
    if (doc.value("type", std::string()) != "multi-tape")
      throw ValidationError("document type is not 'multi-tape'");
    m.load_alphabet(doc);
    if (!doc.contains("tapes") || !doc["tapes"].is_number_integer() || doc["tapes"].get<int>() < 2)
      throw ValidationError("multi-tape machine needs an integer 'tapes' >= 2");
    m.tapes_ = doc["tapes"].get<std::size_t>();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < m.tapes_; ++i) {
      combos *= m.tape_symbol_count();
      if (combos > (1u << 24)) throw ValidationError("transition table too large");
    }
    m.combos_ = combos;
    m.delta_.assign(m.state_count() * combos, std::nullopt);
    if (!doc.contains("delta") || !doc["delta"].is_array()) throw ValidationError("missing array 'delta'");
    auto arr = [&](const json& t, const char* key) {
      const auto& v = t.at(key);
      if (!v.is_array() || v.size() != m.tapes_)
        throw ValidationError(std::string("'") + key + "' must be an array of length " + std::to_string(m.tapes_));
      return v.get<std::vector<std::string>>();
    };
    for (const auto& t : doc["delta"]) {
      State q = m.require_state(t.at("state").get<std::string>());
      auto reads = arr(t, "read");
      auto writes = arr(t, "write");
      auto moves = arr(t, "move");
      State p = m.require_state(t.at("next").get<std::string>());
      if (m.halting(q))
        throw ValidationError("halting state '" + m.state_name(q) + "' must not have outgoing transitions");
      std::vector<Symbol> r, w;
      std::vector<Move> mv;
      for (std::size_t i = 0; i < m.tapes_; ++i) {
        r.push_back(m.require_symbol(reads[i]));
        w.push_back(m.require_symbol(writes[i]));
        mv.push_back(parse_move(moves[i]));
      }
      if (r[0] != w[0])
        throw ValidationError("transition from '" + m.state_name(q) + "' writes '" + writes[0] + "' over '" + reads[0] +
                              "' on the read-only input tape");
      auto& slot = m.delta_[q * combos + m.index(r)];
      if (slot) throw ValidationError("duplicate transition from '" + m.state_name(q) + "'");
      slot = MultiTransition{p, std::move(w), std::move(mv)};
    }
    for (State q = 0; q < static_cast<State>(m.state_count()); ++q) {
      if (m.halting(q)) continue;
      for (std::size_t c = 0; c < combos; ++c)
        if (!m.delta_[q * combos + c])
          throw ValidationError("missing transition for state '" + m.state_name(q) + "' on symbol tuple " +
                                std::to_string(c));
    }
    return m;
  }

  std::size_t tape_count() const { return tapes_; }

  const MultiTransition& step(State q, const std::vector<Symbol>& read) const {
    return *delta_[q * combos_ + index(read)];
  }

  json to_document() const {
    json doc = alphabet_document();
    doc["type"] = "multi-tape";
    doc["tapes"] = tapes_;
    json delta = json::array();
    const std::size_t g = tape_symbol_count();
    for (State q = 0; q < static_cast<State>(state_count()); ++q) {
      if (halting(q)) continue;
      for (std::size_t c = 0; c < combos_; ++c) {
        const auto& t = *delta_[q * combos_ + c];
        std::vector<std::string> r, w, mv;
        std::size_t rest = c;
        for (std::size_t i = 0; i < tapes_; ++i) {
          r.push_back(symbol_name(static_cast<Symbol>(rest % g)));
          rest /= g;
          w.push_back(symbol_name(t.write[i]));
          mv.push_back(to_string(t.move[i]));
        }
        delta.push_back({{"state", state_name(q)}, {"read", r}, {"write", w}, {"move", mv}, {"next", state_name(t.next)}});
      }
    }
    doc["delta"] = delta;
    return doc;
  }

 private:
  std::size_t index(const std::vector<Symbol>& read) const {
    std::size_t idx = 0, mul = 1;
    for (std::size_t i = 0; i < tapes_; ++i) {
      idx += static_cast<std::size_t>(read[i]) * mul;
      mul *= tape_symbol_count();
    }
    return idx;
  }

  std::size_t tapes_ = 0;
  std::size_t combos_ = 0;
  std::vector<std::optional<MultiTransition>> delta_;
};

using AnyMachine = std::variant<OneTapeMachine, MultiTapeMachine>;

// Validates a machine document of either kind.
inline AnyMachine validate(const json& doc) {
  if (!doc.is_object()) throw ValidationError("machine document must be a JSON object");
  std::string type = doc.value("type", std::string());
  if (type == "one-tape") return OneTapeMachine::from_document(doc);
  if (type == "multi-tape") return MultiTapeMachine::from_document(doc);
  throw ValidationError("unknown machine type '" + type + "'");
}

inline AnyMachine validate_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed machine document: ") + e.what());
  }
  try {
    return validate(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed machine document: ") + e.what());
  }
}

inline json document_of(const AnyMachine& m) {
  return std::visit([](const auto& mm) { return mm.to_document(); }, m);
}

// Stable 64-bit FNV-1a digest of the canonical document text.
inline std::string machine_digest(const json& doc) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
  return out;
}

}  // namespace tmv
