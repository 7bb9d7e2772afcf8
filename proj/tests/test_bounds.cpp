#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using namespace support;

namespace {

std::vector<BigNat> big(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("floor_eval") {
  CHECK(LinearBound(1, 1).floor_eval(5) == 6);
  CHECK(LinearBound(0, 5).floor_eval(9) == 5);
  CHECK(LinearBound(2, 0).floor_eval(0) == 0);
  BigNat huge = BigNat(1) << 200;
  CHECK(LinearBound(3, 7).floor_eval(huge) == huge * 3 + 7);
}

TEST_CASE("LinearBound parsing") {
  CHECK(LinearBound::parse("1,1") == LinearBound(1, 1));
  CHECK(LinearBound::parse("3,5") == LinearBound(3, 5));
  CHECK_THROWS_AS(LinearBound::parse("1"), PreconditionError);
  CHECK_THROWS_AS(LinearBound::parse("a,b"), PreconditionError);
  CHECK_THROWS_AS(LinearBound::parse("-1,2"), PreconditionError);
}

TEST_CASE("decide_linear_inequality examples") {
  LinearBound b(1, 1);
  CHECK_FALSE(b.decide_linear_inequality(big({1, 1}), big({2, 1})));
  CHECK(b.decide_linear_inequality(big({1, 1}), big({2, 2})));
  CHECK_THROWS_AS(b.decide_linear_inequality({}, {}), PreconditionError);
  CHECK_THROWS_AS(b.decide_linear_inequality(big({1, 1}), big({1})), PreconditionError);
  CHECK_THROWS_AS(b.decide_linear_inequality(big({0, 1}), big({1, 1})), PreconditionError);
}

TEST_CASE("decide_linear_inequality agrees with enumeration for linear bounds") {
  auto g = rng(10);
  int yes = 0;
  for (int i = 0; i < 500; ++i) {
    auto in = oracles::random_linear_instance(g);
    LinearBound b(in.C, in.D);
    bool expected = oracles::brute_force_exists([&](std::uint64_t n) { return in.C * n + in.D; }, in.A, in.B);
    INFO("C=" << in.C << " D=" << in.D);
    REQUIRE(b.decide_linear_inequality(big(in.A), big(in.B)) == expected);
    yes += expected;
  }
  CHECK(yes > 20);
  CHECK(yes < 480);
}

TEST_CASE("decide_linear_inequality agrees with enumeration for table bounds") {
  auto g = rng(11);
  std::vector<TableBound> bounds{
      TableBound::poly(1, 2, 0), TableBound::poly(2, 2, 3),
      TableBound::from_json({{"name", "nlog"}, {"values", {1, 2, 3, 5}}, {"tail", {{"kind", "nlog"}, {"a", 1}}}}),
      TableBound::from_json({{"name", "nsqrtlog"}, {"values", {2, 2}}, {"tail", {{"kind", "nsqrtlog"}, {"a", 20}, {"b", 1}}}})};
  for (const auto& b : bounds)
    for (int i = 0; i < 150; ++i) {
      auto in = oracles::random_linear_instance(g);
      auto floor_t = [&](std::uint64_t n) { return static_cast<std::uint64_t>(b.floor_eval(n)); };
      bool expected = oracles::brute_force_exists(floor_t, in.A, in.B);
      INFO(b.describe());
      REQUIRE(b.decide_linear_inequality(big(in.A), big(in.B)) == expected);
    }
}

TEST_CASE("convergence_witness") {
  LinearBound b(1, 1);
  CHECK(b.convergence_witness(1) == 4);
  CHECK(b.convergence_witness(0) == 2);
  CHECK(LinearBound(2, 3).convergence_witness(2) == BigNat(1) << 10);

  // g(n) = n log n / T(n) >= K on [n_K, n_K + 1000]
  for (auto [C, D] : std::vector<std::pair<int, int>>{{1, 1}, {1, 0}, {2, 2}, {0, 3}})
    for (unsigned K : {1u, 2u, 3u}) {
      LinearBound lb(C, D);
      BigNat nk = lb.convergence_witness(K);
      if (nk > 1'000'000) continue;
      auto start = static_cast<std::uint64_t>(nk);
      for (std::uint64_t n = start; n <= start + 1000; ++n) {
        long double gn = n * std::log2(static_cast<long double>(n)) / static_cast<long double>(C * n + D);
        REQUIRE(gn >= K);
      }
    }
}

TEST_CASE("convergence witness for the n sqrt(log n) table tail") {
  TableBound b = TableBound::from_json({{"tail", {{"kind", "nsqrtlog"}, {"a", 1}}}});
  for (unsigned K : {1u, 2u}) {
    BigNat nk = b.convergence_witness(K);
    REQUIRE(nk <= 1'000'000);
    auto start = static_cast<std::uint64_t>(nk);
    for (std::uint64_t n = std::max<std::uint64_t>(start, 2); n <= start + 1000; ++n) {
      long double gn = n * std::log2(static_cast<long double>(n)) / static_cast<long double>(b.floor_eval(n));
      REQUIRE(gn >= K);
    }
  }
  CHECK_THROWS_AS(TableBound::poly(1, 2, 0).convergence_witness(1), PreconditionError);
}

TEST_CASE("find_trivial_n0") {
  CHECK(LinearBound(1, 0).find_trivial_n0() == BigNat(0));
  CHECK(LinearBound(0, 5).find_trivial_n0() == BigNat(5));
  CHECK_FALSE(LinearBound(1, 1).find_trivial_n0());
  CHECK(TableBound::poly(1, 2, 0).find_trivial_n0() == BigNat(0));
  CHECK_FALSE(TableBound::poly(1, 2, 1).find_trivial_n0());
  TableBound t = TableBound::from_json({{"values", {1, 2, 1}}, {"tail", {{"kind", "poly"}}}});
  REQUIRE(t.find_trivial_n0());
  CHECK(*t.find_trivial_n0() == 2);
}

TEST_CASE("sequence_count_bound") {
  CHECK(sequence_count_bound(2, 1) == 3);
  CHECK(sequence_count_bound(3, 2) == 13);
  CHECK(sequence_count_bound(2, 0) == 1);
  CHECK(sequence_count_bound(2, 100) == (BigNat(1) << 101) - 1);
}

TEST_CASE("table bound documents") {
  TableBound t = TableBound::from_json({{"name", "t"}, {"values", {3, 4, 5}}, {"tail", {{"kind", "poly"}, {"a", 2}, {"e", 3}, {"b", 1}}}});
  CHECK(t.floor_eval(1) == 4);
  CHECK(t.floor_eval(3) == 2 * 27 + 1);
  TableBound again = TableBound::from_json(t.to_json());
  for (int n = 0; n < 20; ++n) CHECK(again.floor_eval(n) == t.floor_eval(n));
  CHECK_THROWS_AS(TableBound::from_json({{"tail", {{"kind", "exp"}}}}), PreconditionError);
  CHECK_THROWS_AS(TableBound::from_json({{"tail", {{"kind", "poly"}, {"e", 1}}}}), PreconditionError);
  CHECK_THROWS_AS(TableBound::from_json({{"values", {1}}}), PreconditionError);
  CHECK_THROWS_AS(TableBound::from_file("/nonexistent/bound.json"), PreconditionError);
  TableBound sq = TableBound::from_file(fixture_path("n_squared.json"));
  CHECK(sq.floor_eval(40) == 1600);
}

TEST_CASE("kobayashi constant satisfies the inequality") {
  KobayashiConstant k = kobayashi_constant(2, LinearBound(2, 2));
  CHECK(k.c >= 4);
  oracles::IneqOne ineq;
  for (std::uint64_t n = 2; n <= 200'000; ++n) REQUIRE(ineq.holds(2, k.c, n, 2.0 * n + 2));
}

TEST_CASE("kobayashi constant clamps to T(0) and T(1) and grows with q") {
  for (auto b : {LinearBound(1, 1), LinearBound(0, 9), LinearBound(3, 0)}) {
    std::uint64_t prev = 0;
    for (std::uint64_t q : {2, 3, 4}) {
      KobayashiConstant k = kobayashi_constant(q, b);
      CHECK(BigNat(k.c) >= b.floor_eval(1));
      CHECK(BigNat(k.c) >= b.floor_eval(0));
      CHECK(k.c >= prev);
      prev = k.c;
    }
  }
}

TEST_CASE("kobayashi constant reports infeasible bounds") {
  KobayashiLimits tight;
  tight.effort = 100;
  CHECK_THROWS_AS(kobayashi_constant(2, LinearBound(1, 1), tight), InfeasibleBound);
  CHECK_THROWS_AS(kobayashi_constant(2, LinearBound(1 << 22, 1 << 22)), InfeasibleBound);
  CHECK_THROWS_AS(kobayashi_constant(1, LinearBound(1, 1)), PreconditionError);
}
