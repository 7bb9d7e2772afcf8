#include <cmath>

#include "support.hpp"

using namespace support;

namespace {

// Steps of one run plus the trace checks shared by the pass-gadget tests:
// cells holding # are never rewritten, and once the borders are written the
// head never leaves the span between them.
struct Trace {
  RunOutcome out;
  bool hash_rewritten = false;
  bool left_borders = false;
};

Trace trace_pass(const OneTapeMachine& g, const Word& w, std::uint64_t budget) {
  const Symbol hash = *g.find_symbol("#");
  Trace tr;
  std::set<Cell> hashes;
  Cell lo = 0, hi = -1;
  tr.out = simulate(g, Tape::from_word(w, g.blank()), budget, [&](const StepEvent& e) {
    if (e.read == hash && e.written != hash) tr.hash_rewritten = true;
    if (e.written == hash) hashes.insert(e.from);
    if (hashes.size() == 2 && hi < lo) {
      lo = *hashes.begin();
      hi = *hashes.rbegin();
    }
    if (hi >= lo && (e.to < lo || e.to > hi)) tr.left_borders = true;
  });
  return tr;
}

OneTapeMachine squared_gadget(const char* h) {
  TableBound sq = TableBound::from_file(fixture_path("n_squared.json"));
  return build_pass_gadget(one_tape(h), gadget_params(sq));
}

}  // namespace

TEST_CASE("gadget parameters for n^2") {
  TableBound sq = TableBound::from_file(fixture_path("n_squared.json"));
  GadgetParams p = gadget_params(sq);
  CHECK(p.C == 6);
  CHECK(p.n0 == 10);

  // Independent scan in long double.
  auto holds = [](long double n) { return n * n >= 3 * n * std::log(n) / std::log(6.0L) + 6 * n + 1; };
  CHECK_FALSE(holds(9));
  for (std::uint64_t n = 10; n <= 1'000'000; ++n) REQUIRE(holds(static_cast<long double>(n)));

  TableBound cube = TableBound::poly(1, 3, 0);
  GadgetParams pc = gadget_params(cube);
  CHECK(pc.n0 == 6);
  TableBound nlog = TableBound::from_json({{"tail", {{"kind", "nlog"}, {"a", 8}}}});
  GadgetParams pn = gadget_params(nlog);
  for (std::uint64_t n = pn.n0; n <= 5000; ++n) {
    long double x = static_cast<long double>(n);
    REQUIRE(static_cast<long double>(nlog.floor_eval(n)) >= 3 * x * std::log(x) / std::log(6.0L) + 6 * x + 1);
  }
  CHECK(pn.n0 == 6);
}

TEST_CASE("gadget parameter errors") {
  CHECK_THROWS_AS(gadget_params(LinearBound(5, 5)), PreconditionError);
  CHECK_THROWS_AS(gadget_params(TableBound::from_json({{"tail", {{"kind", "nsqrtlog"}, {"a", 50}}}})),
                  PreconditionError);
  CHECK_THROWS_AS(gadget_params(TableBound::from_json({{"tail", {{"kind", "nlog"}, {"a", 1}}}})), PreconditionError);
  GadgetParams bad{6, 3, "x", 100};
  CHECK_THROWS_AS(build_pass_gadget(one_tape("h_loop.json"), bad), PreconditionError);
}

TEST_CASE("counting gadget") {
  auto imm = build_counting_gadget(one_tape("h_immediate.json"));
  RunOutcome r = run(imm, Word{}, 10'000);
  CHECK(r.status == RunStatus::Accepted);
  CHECK(r.steps == 1);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(run(imm, Word(n, 0), 10'000).status == RunStatus::BudgetExceeded);

  auto loop = build_counting_gadget(one_tape("h_loop.json"));
  for (std::size_t n = 0; n <= 6; ++n) {
    RunOutcome o = run(loop, Word(n, 0), 10'000);
    CHECK(o.status == RunStatus::Accepted);
    CHECK(o.steps == n + 1);
  }

  // H halts on the empty input after 2 steps: inputs of length >= 2 loop.
  auto halt2 = build_counting_gadget(one_tape("h_halt2.json"));
  for (std::size_t n = 0; n <= 6; ++n) {
    RunOutcome o = run(halt2, Word(n, 0), 10'000);
    if (n < 2) CHECK(o.steps == n + 1);
    else CHECK(o.status == RunStatus::BudgetExceeded);
  }
}

TEST_CASE("counting gadget follows H step for step") {
  // Tape 1 of the gadget after k steps equals H's tape after k steps.
  auto g = rng(40);
  for (int trial = 0; trial < 40; ++trial) {
    json doc = random_machine_doc(g, 1 + trial % 3, 3, 0.5, 0.1);
    auto H = OneTapeMachine::from_document(doc);
    auto G = build_counting_gadget(H);
    RefRun ref = reference_run(doc, {}, 8);
    RunOutcome o = run(G, Word(7, 0), 10'000);
    if (ref.outcome == "BudgetExceeded") {
      CHECK(o.status == RunStatus::Accepted);
      CHECK(o.steps == 8);
    } else {
      CHECK(o.status == RunStatus::BudgetExceeded);
    }
  }
}

TEST_CASE("pass gadget on short inputs") {
  auto g = squared_gadget("h_loop.json");
  for (std::size_t n = 0; n <= 9; ++n) {
    RunOutcome r = run(g, Word(n, 0), 10'000);
    CHECK(r.status == RunStatus::Accepted);
    CHECK(r.steps == n + 1);
  }
  Symbol b = *g.find_symbol("#");
  CHECK(run(g, Word{b}, 100).status == RunStatus::Rejected);
}

TEST_CASE("pass gadget with a non-halting H stays within n^2 + 1") {
  auto g = squared_gadget("h_loop.json");
  for (std::size_t n = 10; n <= 40; ++n) {
    Trace tr = trace_pass(g, Word(n, 0), n * n + 1);
    INFO("n = " << n << ", steps " << tr.out.steps);
    CHECK(tr.out.status == RunStatus::Accepted);
    CHECK(tr.out.steps <= n * n + 1);
    CHECK_FALSE(tr.hash_rewritten);
    CHECK_FALSE(tr.left_borders);
  }
}

TEST_CASE("pass gadget with a halting H exceeds the bound") {
  auto imm = squared_gadget("h_immediate.json");
  Trace tr = trace_pass(imm, Word(40, 0), 1601);
  CHECK(tr.out.status == RunStatus::BudgetExceeded);
  CHECK_FALSE(tr.hash_rewritten);
  CHECK_FALSE(tr.left_borders);
  for (std::size_t n = 11; n < 40; ++n) CHECK(run(imm, Word(n, 0), n * n + 1).status == RunStatus::BudgetExceeded);

  // Two steps of H need more passes, hence a longer input.
  auto halt2 = squared_gadget("h_halt2.json");
  CHECK(run(halt2, Word(40, 0), 1601).status == RunStatus::Accepted);
  tr = trace_pass(halt2, Word(100, 0), 100 * 100 + 1);
  CHECK(tr.out.status == RunStatus::BudgetExceeded);
  CHECK_FALSE(tr.hash_rewritten);
}

TEST_CASE("gadget documents validate and round-trip") {
  auto g = squared_gadget("h_halt2.json");
  AnyMachine again = validate(document_of(AnyMachine{g}));
  CHECK(std::holds_alternative<OneTapeMachine>(again));
  auto c = build_counting_gadget(one_tape("h_loop.json"));
  CHECK(std::holds_alternative<MultiTapeMachine>(validate(document_of(AnyMachine{c}))));
  CHECK(c.tape_count() == 2);
}
