#include "support.hpp"

using namespace support;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("M_RIGHT validates") {
  auto any = validate(fixture_doc("m_right.json"));
  REQUIRE(std::holds_alternative<OneTapeMachine>(any));
  const auto& m = std::get<OneTapeMachine>(any);
  CHECK(m.state_count() == 3);
  CHECK(m.input_symbol_count() == 1);
  CHECK(m.tape_symbol_count() == 2);
  CHECK(m.state_name(m.start()) == "q0");
}

TEST_CASE("validation errors") {
  json doc = fixture_doc("m_right.json");

  SECTION("missing transition") {
    doc["delta"].erase(0);
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("missing transition"));
  }
  SECTION("stay move") {
    doc["delta"][0]["move"] = "S";
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("stay move"));
  }
  SECTION("blank in input alphabet") {
    doc["input_alphabet"].push_back("_");
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("must not be declared in the input alphabet"));
  }
  SECTION("duplicate state") {
    doc["states"].push_back("q0");
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("duplicate state"));
  }
  SECTION("symbol outside the tape alphabet") {
    doc["delta"][0]["write"] = "z";
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("not in the tape alphabet"));
  }
  SECTION("transition out of a halting state") {
    doc["delta"].push_back({{"state", "qa"}, {"read", "a"}, {"write", "a"}, {"move", "R"}, {"next", "q0"}});
    CHECK_THROWS_WITH(validate(doc), ContainsSubstring("halting state"));
  }
  SECTION("start equals accept") {
    doc["accept"] = "q0";
    CHECK_THROWS_AS(validate(doc), ValidationError);
  }
  SECTION("malformed text") { CHECK_THROWS_AS(validate_text("{not json"), ValidationError); }
}

TEST_CASE("multi-tape read-only input tape") {
  json doc = fixture_doc("const2tape.json");
  CHECK_NOTHROW(validate(doc));
  for (auto& t : doc["delta"])
    if (t["read"][0] == "a") {
      t["write"][0] = "b";
      break;
    }
  CHECK_THROWS_WITH(validate(doc), ContainsSubstring("read-only input tape"));
}

TEST_CASE("run examples") {
  auto right = one_tape("m_right.json");
  auto loop = one_tape("m_loop.json");

  RunOutcome r = run(right, word_of("aaa"), 100);
  CHECK(r.status == RunStatus::Accepted);
  CHECK(r.steps == 4);

  r = run(right, {}, 100);
  CHECK(r.status == RunStatus::Accepted);
  CHECK(r.steps == 1);

  r = run(loop, word_of("a"), 50);
  CHECK(r.status == RunStatus::BudgetExceeded);
  CHECK(r.steps == 50);
}

TEST_CASE("halting exactly at the budget reports the halting status") {
  auto right = one_tape("m_right.json");
  for (std::size_t n = 0; n < 8; ++n) {
    Word w(n, 0);
    RunOutcome exact = run(right, w, n + 1);
    CHECK(exact.status == RunStatus::Accepted);
    CHECK(exact.steps == n + 1);
    RunOutcome short_by_one = run(right, w, n == 0 ? 1 : n);
    if (n > 0) CHECK(short_by_one.status == RunStatus::BudgetExceeded);
  }
}

TEST_CASE("multi-tape runs") {
  auto c = multi_tape("const2tape.json");
  auto s = multi_tape("scan2tape.json");
  for (const Word& w : all_words(2, 5)) {
    RunOutcome rc = run(c, w, 100);
    CHECK(rc.status == RunStatus::Accepted);
    CHECK(rc.steps == 3);
    RunOutcome rs = run(s, w, 100);
    CHECK(rs.status == RunStatus::Accepted);
    CHECK(rs.steps == w.size() + 1);
  }
}

TEST_CASE("enumerate_inputs") {
  CHECK(enumerate_inputs(1, 2) == std::vector<Word>{{}, {0}, {0, 0}});
  CHECK(enumerate_inputs(2, 1) == std::vector<Word>{{}, {0}, {1}});
  CHECK(enumerate_inputs(2, 0) == std::vector<Word>{{}});
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t n = 0; n <= 4; ++n) CHECK(enumerate_inputs(k, n) == all_words(k, n));
  CHECK_THROWS_AS(enumerate_inputs(0, 2), PreconditionError);
}

TEST_CASE("word parsing and formatting") {
  auto parity = one_tape("m_parity.json");
  Word w = parity.parse_word("abba");
  CHECK(w == word_of("abba"));
  CHECK(parity.format_word(w) == "abba");
  CHECK(parity.parse_word("a b,b a") == w);
  CHECK(parity.parse_word("").empty());
  CHECK_THROWS_AS(parity.parse_word("abc"), ValidationError);
}

TEST_CASE("documents round-trip") {
  for (const char* name : {"m_right.json", "m_loop.json", "m_parity.json", "const2tape.json", "scan2tape.json"}) {
    AnyMachine m = validate(fixture_doc(name));
    json doc = document_of(m);
    AnyMachine again = validate(doc);
    CHECK(machine_digest(document_of(again)) == machine_digest(doc));
  }
}

TEST_CASE("simulator agrees with the reference interpreter on random machines") {
  auto g = rng(1);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    json doc = random_machine_doc(g, 1 + trial % 4, 2 + trial % 3);
    auto m = OneTapeMachine::from_document(doc);
    for (const Word& w : all_words(m.input_symbol_count(), 4)) {
      Tape final_tape(m.blank());
      RunOutcome r = simulate(m, Tape::from_word(w, m.blank()), 60, NoObserver{}, &final_tape);
      RefRun ref = reference_run(doc, m.word_names(w), 60);
      REQUIRE(to_string(r.status) == ref.outcome);
      REQUIRE(r.steps == ref.steps);
      REQUIRE(r.leftmost == ref.leftmost);
      REQUIRE(r.rightmost == ref.rightmost);
      for (const auto& [cell, sym] : ref.tape) REQUIRE(m.symbol_name(final_tape.get(cell)) == sym);
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("determinism, monotone budgets and head extent") {
  auto g = rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = OneTapeMachine::from_document(random_machine_doc(g, 1 + trial % 4, 3));
    for (const Word& w : all_words(2, 3)) {
      RunOutcome a = run(m, w, 40), b = run(m, w, 40);
      REQUIRE(a == b);
      REQUIRE(a.rightmost - a.leftmost + 1 <= static_cast<Cell>(a.steps) + 1);
      if (a.halted())
        for (std::uint64_t budget : {a.steps, a.steps + 1, a.steps + 17, std::uint64_t{1000}}) {
          RunOutcome c = run(m, w, std::max<std::uint64_t>(budget, 1));
          REQUIRE(c == a);
        }
    }
  }
}
