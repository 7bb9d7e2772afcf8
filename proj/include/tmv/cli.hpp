#pragma once

// Command-line front end. run_cli returns the process exit code:
// 0 RunsInTime / success, 1 Violation, 2 Inconclusive, 3 usage or input
// error, 4 infeasible bound computation.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "tmv/extract.hpp"
#include "tmv/gadgets.hpp"
#include "tmv/oracle.hpp"

namespace tmv {

namespace cli {

constexpr int kExitUsage = 3;
constexpr int kExitInfeasible = 4;

using AnyBound = std::variant<LinearBound, TableBound>;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

inline AnyMachine load_machine(const std::string& path) { return validate_text(read_file(path)); }

inline AnyBound load_bound(const std::string& linear, const std::string& table) {
  if (!linear.empty() && !table.empty()) throw PreconditionError("give either --bound or --bound-table, not both");
  if (!table.empty()) return TableBound::from_file(table);
  if (linear.empty()) throw PreconditionError("a bound is required (--bound C,D or --bound-table PATH)");
  return LinearBound::parse(linear);
}

inline int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::RunsInTime: return 0;
    case VerdictKind::Violation: return 1;
    default: return 2;
  }
}

inline std::string describe(const AnyBound& b) {
  return std::visit([](const auto& x) { return x.describe(); }, b);
}

struct Options {
  std::string machine, bound, bound_table, input, out, dot, report, kind;
  std::optional<std::uint64_t> cap_c, max_len, budget;
  std::uint64_t effort = 50'000'000;
  std::uint64_t C = 0, D = 0;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int dispatch(const std::string& cmd, const Options& o) {
    start_ = std::chrono::steady_clock::now();
    report_ = {{"command", cmd}};
    if (cmd == "check") return check(o);
    if (cmd == "check-multi") return check_multi(o);
    if (cmd == "simulate") return simulate_cmd(o);
    if (cmd == "crossings") return crossings(o);
    if (cmd == "extract-dfa") return extract(o);
    if (cmd == "gadget") return gadget(o);
    if (cmd == "oracle") return oracle(o);
    throw PreconditionError("unknown command '" + cmd + "'");
  }

  int emit(const Options& o, int code) {
    report_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    report_["exit_code"] = code;
    std::string text = report_.dump(2);
    out_ << text << "\n";
    if (!o.report.empty()) write_file(o.report, text + "\n");
    return code;
  }

  int fail(const Options& o, const std::string& kind, const std::string& message, int code) {
    err_ << "error: " << message << "\n";
    report_["error"] = {{"kind", kind}, {"message", message}};
    return emit(o, code);
  }

  json& report() { return report_; }

 private:
  void describe_machine(const AnyMachine& m) {
    json doc = document_of(m);
    report_["machine"] = {{"digest", machine_digest(doc)},
                          {"type", doc["type"]},
                          {"states", doc["states"].size()},
                          {"tape_symbols", doc["tape_alphabet"].size()}};
  }

  static CheckLimits limits_of(const Options& o) {
    CheckLimits l;
    l.cap_c = o.cap_c;
    l.max_len = o.max_len;
    l.effort = o.effort;
    l.jobs = o.jobs;
    return l;
  }

  void record_analysis(const AnalysisResult& a, const MachineAlphabet& m, const Options& o) {
    report_["verdict"] = verdict_to_json(a.verdict, m);
    json caps = {{"cap_c", o.cap_c ? json(*o.cap_c) : json(nullptr)},
                 {"max_len", o.max_len ? json(*o.max_len) : json(nullptr)},
                 {"effort", o.effort},
                 {"effort_used", a.effort_used},
                 {"c_certified", a.certified_c},
                 {"len_certified", a.certified_len}};
    if (a.trivial_n0) caps["trivial_n0"] = a.trivial_n0->str();
    if (a.kobayashi) caps["kobayashi"] = {{"c", a.kobayashi->c}, {"threshold", a.kobayashi->threshold.str()},
                                          {"evaluations", a.kobayashi->evaluations}};
    report_["caps"] = caps;
    if (a.tables) {
      json t = tables_summary(*a.tables);
      t["families_checked"] = a.families_checked;
      t["coverage_states"] = a.coverage_states;
      report_["tables"] = t;
    }
  }

  int check(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!std::holds_alternative<OneTapeMachine>(any))
      throw PreconditionError("check needs a one-tape machine; use check-multi for multi-tape machines");
    const auto& m = std::get<OneTapeMachine>(any);
    AnyBound b = load_bound(o.bound, o.bound_table);
    report_["bound"] = describe(b);
    AnalysisResult a = std::visit([&](const auto& bb) { return analyze_one_tape(m, bb, limits_of(o)); }, b);
    record_analysis(a, m, o);
    return emit(o, exit_code(a.verdict.kind));
  }

  int check_multi(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    AnyBound b = load_bound(o.bound, o.bound_table);
    report_["bound"] = describe(b);
    AnalysisResult a =
        std::visit([&](const auto& m, const auto& bb) { return analyze_trivial_only(m, bb, limits_of(o)); }, any, b);
    const MachineAlphabet& alpha = std::visit([](const auto& m) -> const MachineAlphabet& { return m; }, any);
    record_analysis(a, alpha, o);
    return emit(o, exit_code(a.verdict.kind));
  }

  template <typename M>
  Word input_of(const M& m, const Options& o) {
    return m.parse_word(o.input);
  }

  int simulate_cmd(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!o.budget || *o.budget < 1) throw PreconditionError("--budget N with N >= 1 is required");
    std::visit(
        [&](const auto& m) {
          Word w = input_of(m, o);
          RunOutcome r = run(m, w, *o.budget);
          report_["input"] = m.format_word(w);
          report_["outcome"] = to_string(r.status);
          report_["steps"] = r.steps;
          report_["leftmost"] = r.leftmost;
          report_["rightmost"] = r.rightmost;
        },
        any);
    return emit(o, 0);
  }

  int crossings(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!std::holds_alternative<OneTapeMachine>(any)) throw PreconditionError("crossings needs a one-tape machine");
    if (!o.budget || *o.budget < 1) throw PreconditionError("--budget N with N >= 1 is required");
    const auto& m = std::get<OneTapeMachine>(any);
    Word w = m.parse_word(o.input);
    auto [r, rec] = record_crossings(m, w, *o.budget);
    json cr = crossing_report(m, r, rec);
    for (auto& [k, v] : cr.items()) report_[k] = v;
    return emit(o, 0);
  }

  int extract(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!std::holds_alternative<OneTapeMachine>(any)) throw PreconditionError("extract-dfa needs a one-tape machine");
    const auto& m = std::get<OneTapeMachine>(any);
    report_["bound"] = LinearBound(o.C, o.D).describe();
    CheckLimits l = limits_of(o);
    Extraction ex = extract_dfa_with_analysis(m, o.C, o.D, l);
    std::vector<std::string> syms;
    for (Symbol a = 0; a < static_cast<Symbol>(m.input_symbol_count()); ++a) syms.push_back(m.symbol_name(a));
    json dj = dfa_to_json(ex.dfa, syms);
    if (!o.out.empty()) write_file(o.out, dj.dump(2) + "\n");
    if (!o.dot.empty()) write_file(o.dot, dfa_to_dot(ex.dfa, syms));
    record_analysis(ex.analysis, m, o);
    report_["dfa"] = {{"states", ex.dfa.state_count()}, {"universal", is_universal(ex.dfa).holds},
                      {"empty", is_empty(ex.dfa).holds}};
    if (o.out.empty()) report_["dfa"]["automaton"] = dj;
    return emit(o, 0);
  }

  int gadget(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!std::holds_alternative<OneTapeMachine>(any)) throw PreconditionError("gadget needs a one-tape machine H");
    const auto& h = std::get<OneTapeMachine>(any);
    json doc;
    if (o.kind == "counting") {
      doc = build_counting_gadget(h).to_document();
    } else if (o.kind == "pass") {
      if (o.bound_table.empty()) throw PreconditionError("the pass gadget needs --bound-table");
      GadgetParams p = gadget_params(TableBound::from_file(o.bound_table));
      report_["params"] = {{"C", p.C}, {"n0", p.n0}, {"bound", p.bound}, {"horizon", p.horizon}};
      doc = build_pass_gadget(h, p).to_document();
    } else {
      throw PreconditionError("--kind must be 'counting' or 'pass'");
    }
    report_["gadget"] = {{"kind", o.kind},
                         {"digest", machine_digest(doc)},
                         {"states", doc["states"].size()},
                         {"tape_symbols", doc["tape_alphabet"].size()}};
    if (!o.out.empty()) write_file(o.out, doc.dump(2) + "\n");
    else report_["gadget"]["machine"] = doc;
    return emit(o, 0);
  }

  int oracle(const Options& o) {
    AnyMachine any = load_machine(o.machine);
    describe_machine(any);
    if (!o.max_len) throw PreconditionError("oracle needs --max-len");
    AnyBound b = load_bound(o.bound, o.bound_table);
    report_["bound"] = describe(b);
    int code = 0;
    std::visit(
        [&](const auto& m, const auto& bb) {
          OracleResult r = brute_force_oracle(m, bb, static_cast<std::size_t>(*o.max_len));
          report_["max_len"] = *o.max_len;
          report_["words"] = r.words;
          report_["passed"] = r.passed;
          report_["max_steps"] = r.max_steps;
          if (!r.passed) {
            report_["witness"] = m.format_word(*r.witness);
            report_["witness_symbols"] = m.word_names(*r.witness);
            report_["witness_steps"] = r.witness_steps;
            report_["allowed"] = r.allowed.str();
            code = 1;
          }
        },
        any, b);
    return emit(o, code);
  }

  std::ostream& out_;
  std::ostream& err_;
  json report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Turing machine running-time verifier"};
  app.require_subcommand(1);
  cli::Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--machine", o.machine, "machine document (JSON)")->required();
    s->add_option("--report", o.report, "also write the JSON report here");
    s->add_option("--seed", o.seed, "seed (recorded in the report)");
    s->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };
  auto bounds = [&](CLI::App* s) {
    s->add_option("--bound", o.bound, "linear bound C,D");
    s->add_option("--bound-table", o.bound_table, "table-backed bound (JSON)");
  };
  auto caps = [&](CLI::App* s) {
    s->add_option("--cap-c", o.cap_c, "crossing-length cap");
    s->add_option("--max-len", o.max_len, "enumeration length cap");
    s->add_option("--effort", o.effort, "work limit");
  };

  CLI::App* check = app.add_subcommand("check", "decide whether a one-tape machine runs in time T(n)");
  common(check), bounds(check), caps(check);
  CLI::App* multi = app.add_subcommand("check-multi", "decide a multi-tape machine under a bound with T(n0) < n0 + 1");
  common(multi), bounds(multi);
  multi->add_option("--effort", o.effort, "work limit");
  CLI::App* sim = app.add_subcommand("simulate", "run a machine on one input");
  common(sim);
  sim->add_option("--input", o.input, "input word")->required();
  sim->add_option("--budget", o.budget, "step budget")->required();
  CLI::App* cross = app.add_subcommand("crossings", "crossing sequences of one run");
  common(cross);
  cross->add_option("--input", o.input, "input word")->required();
  cross->add_option("--budget", o.budget, "step budget")->required();
  CLI::App* ext = app.add_subcommand("extract-dfa", "DFA equivalent to a machine running in time Cn+D");
  common(ext), caps(ext);
  ext->add_option("--C", o.C, "C")->required();
  ext->add_option("--D", o.D, "D")->required();
  ext->add_option("--out", o.out, "DFA JSON output");
  ext->add_option("--dot", o.dot, "Graphviz output");
  CLI::App* gad = app.add_subcommand("gadget", "compile a reduction gadget from H");
  common(gad);
  gad->add_option("--kind", o.kind, "counting | pass")->required()->check(CLI::IsMember({"counting", "pass"}));
  gad->add_option("--bound-table", o.bound_table, "bound for the pass gadget");
  gad->add_option("--out", o.out, "machine document output");
  CLI::App* orc = app.add_subcommand("oracle", "brute-force running-time check up to a length");
  common(orc), bounds(orc);
  orc->add_option("--max-len", o.max_len, "longest input")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return cli::kExitUsage;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  cli::Runner r(out, err);
  try {
    return r.dispatch(cmd, o);
  } catch (const InfeasibleBound& e) {
    return r.fail(o, "infeasible-bound", e.what(), cli::kExitInfeasible);
  } catch (const OutsideDecidableRange& e) {
    return r.fail(o, "outside-decidable-range", e.what(), cli::kExitUsage);
  } catch (const ValidationError& e) {
    return r.fail(o, "invalid-machine", e.what(), cli::kExitUsage);
  } catch (const Error& e) {
    return r.fail(o, "error", e.what(), cli::kExitUsage);
  } catch (const std::exception& e) {
    return r.fail(o, "error", e.what(), cli::kExitUsage);
  }
}

}  // namespace tmv
