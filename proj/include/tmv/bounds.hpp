#pragma once

// Time bounds T(n). LinearBound covers T(n) = C*n + D; TableBound is the
// extension format (explicit prefix values plus a closed-form tail).
//
// Every bound models the TimeBound concept:
//   floor_eval(n)                    floor(T(n))
//   decide_linear_inequality(A, B)   does some x in N^k satisfy
//                                    T(A0 + sum x_i A_i) < B0 + sum x_i B_i ?
//   convergence_witness(K)           n_K with g(n) >= K for all n >= n_K,
//                                    g(n) = n log n / T(n) (n >= 2), g(0) = g(1) = 1
//   find_trivial_n0()                some n0 with T(n0) < n0 + 1, if one exists
//   nondecreasing_from()             T is nondecreasing on [value, infinity)

#include <algorithm>
#include <cmath>
#include <limits>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "tmv/error.hpp"

namespace tmv {

using BigNat = boost::multiprecision::cpp_int;

inline std::string to_string(const BigNat& n) { return n.str(); }

inline BigNat pow2(const BigNat& e) {
  if (e > 1u << 26) throw InfeasibleBound("exponent too large: 2^" + e.str());
  BigNat r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

inline BigNat ceil_div(const BigNat& a, const BigNat& b) { return (a + b - 1) / b; }

// floor(log2 n) for n >= 1.
inline std::size_t floor_log2(const BigNat& n) {
  return n <= 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(n));
}

inline std::uint64_t isqrt(std::uint64_t v) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline std::uint64_t clamp_u64(const BigNat& n) {
  static const BigNat max = std::numeric_limits<std::uint64_t>::max();
  return n >= max ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(n);
}

template <typename B>
concept TimeBound = requires(const B& b, const BigNat& n, const std::vector<BigNat>& v) {
  { b.floor_eval(n) } -> std::convertible_to<BigNat>;
  { b.decide_linear_inequality(v, v) } -> std::same_as<bool>;
  { b.convergence_witness(n) } -> std::convertible_to<BigNat>;
  { b.find_trivial_n0() } -> std::same_as<std::optional<BigNat>>;
  { b.nondecreasing_from() } -> std::convertible_to<BigNat>;
  { b.describe() } -> std::convertible_to<std::string>;
};

namespace detail {
inline void check_inequality_shape(const std::vector<BigNat>& A, const std::vector<BigNat>& B) {
  if (A.empty()) throw PreconditionError("inequality needs A_0");
  if (A.size() != B.size()) throw PreconditionError("A and B must have the same dimension");
  for (const auto& a : A)
    if (a < 1) throw PreconditionError("every A_i must be at least 1");
  for (const auto& b : B)
    if (b < 0) throw PreconditionError("every B_i must be non-negative");
}
}  // namespace detail

class LinearBound {
 public:
  LinearBound() = default;
  LinearBound(BigNat c, BigNat d) : c_(std::move(c)), d_(std::move(d)) {
    if (c_ < 0 || d_ < 0) throw PreconditionError("C and D must be non-negative");
  }

  // Parses "C,D".
  static LinearBound parse(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw PreconditionError("bound must be given as C,D");
    try {
      std::string cs = text.substr(0, comma), ds = text.substr(comma + 1);
      auto ok = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
      };
      if (!ok(cs) || !ok(ds)) throw PreconditionError("bound must be given as C,D with natural numbers");
      return LinearBound(BigNat(cs), BigNat(ds));
    } catch (const std::runtime_error& e) {
      throw PreconditionError(std::string("bad bound '") + text + "': " + e.what());
    }
  }

  const BigNat& C() const { return c_; }
  const BigNat& D() const { return d_; }

  BigNat floor_eval(const BigNat& n) const { return c_ * n + d_; }

  // T(A0 + sum x_i A_i) - (B0 + sum x_i B_i) is affine in x with slope
  // C*A_i - B_i per coordinate: some x makes it negative iff it is already
  // negative at x = 0 or some slope is negative.
  bool decide_linear_inequality(const std::vector<BigNat>& A, const std::vector<BigNat>& B) const {
    detail::check_inequality_shape(A, B);
    if (c_ * A[0] + d_ < B[0]) return true;
    for (std::size_t i = 1; i < A.size(); ++i)
      if (B[i] > c_ * A[i]) return true;
    return false;
  }

  // T(n) <= (C + D) n for n >= 1, so g(n) >= log n / (C + D).
  BigNat convergence_witness(const BigNat& K) const {
    if (c_ + d_ == 0) throw PreconditionError("T(n) = 0 cannot certify convergence");
    BigNat n = pow2(K * (c_ + d_));
    return std::max(n, BigNat(2));
  }

  std::optional<BigNat> find_trivial_n0() const {
    if (d_ == 0) return BigNat(0);
    if (c_ == 0) return d_;
    return std::nullopt;
  }

  BigNat nondecreasing_from() const { return 0; }

  std::string describe() const { return c_.str() + "n+" + d_.str(); }

  friend bool operator==(const LinearBound&, const LinearBound&) = default;

 private:
  BigNat c_ = 0;
  BigNat d_ = 0;
};

// Table-backed bound: floor(T(n)) = values[n] for n < values.size(), and a
// closed-form tail a * f(n) + b beyond, where f is one of
//   "poly"      n^e            (e >= 2)
//   "nlog"      n * floor(log2 n)
//   "nsqrtlog"  n * floor(sqrt(floor(log2 n)))
// with f(0) = 0 and a >= 1, b >= 0. Document format:
//   {"name": "...", "values": [..], "tail": {"kind": "poly", "a": 1, "e": 2, "b": 0}}
// Every tail has f(n)/n nondecreasing; that monotonicity is the witness used
// for manageability (f(n)/n -> infinity) and, for "nsqrtlog", for computable
// convergence of n log n / T(n).
class TableBound {
 public:
  enum class Tail { Poly, NLog, NSqrtLog };

  static TableBound from_json(const nlohmann::json& doc) {
    TableBound t;
    try {
      t.name_ = doc.value("name", std::string("table"));
      if (doc.contains("values"))
        for (const auto& v : doc.at("values")) {
          BigNat x = v.is_string() ? BigNat(v.get<std::string>()) : BigNat(v.get<std::uint64_t>());
          t.values_.push_back(x);
        }
      const auto& tail = doc.at("tail");
      std::string kind = tail.at("kind").get<std::string>();
      if (kind == "poly") t.kind_ = Tail::Poly;
      else if (kind == "nlog") t.kind_ = Tail::NLog;
      else if (kind == "nsqrtlog") t.kind_ = Tail::NSqrtLog;
      else throw PreconditionError("unknown tail kind '" + kind + "'");
      t.a_ = tail.value("a", std::uint64_t{1});
      t.b_ = tail.value("b", std::uint64_t{0});
      t.e_ = tail.value("e", 2u);
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError(std::string("malformed bound table: ") + e.what());
    }
    if (t.a_ < 1) throw PreconditionError("tail coefficient a must be at least 1");
    if (t.kind_ == Tail::Poly && t.e_ < 2) throw PreconditionError("poly tail needs exponent e >= 2");
    t.compute_monotone_start();
    return t;
  }

  static TableBound from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read bound table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return from_json(nlohmann::json::parse(ss.str()));
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError(std::string("malformed bound table: ") + e.what());
    }
  }

  static TableBound poly(std::uint64_t a, unsigned e, std::uint64_t b) {
    return from_json({{"name", "poly"}, {"tail", {{"kind", "poly"}, {"a", a}, {"e", e}, {"b", b}}}});
  }

  nlohmann::json to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : values_) v.push_back(x.str());
    const char* k = kind_ == Tail::Poly ? "poly" : kind_ == Tail::NLog ? "nlog" : "nsqrtlog";
    return {{"name", name_}, {"values", v}, {"tail", {{"kind", k}, {"a", a_}, {"e", e_}, {"b", b_}}}};
  }

  Tail tail_kind() const { return kind_; }
  std::uint64_t tail_a() const { return a_; }
  std::uint64_t tail_b() const { return b_; }
  unsigned tail_e() const { return e_; }
  std::size_t prefix_size() const { return values_.size(); }

  // f(n) of the tail.
  BigNat tail_f(const BigNat& n) const {
    if (n <= 0) return 0;
    switch (kind_) {
      case Tail::Poly: return boost::multiprecision::pow(n, e_);
      case Tail::NLog: return n * floor_log2(n);
      default: return n * isqrt(floor_log2(n));
    }
  }

  BigNat floor_eval(const BigNat& n) const {
    if (n < static_cast<std::uint64_t>(values_.size())) return values_[static_cast<std::size_t>(n)];
    return BigNat(a_) * tail_f(n) + b_;
  }

  // The manageability algorithm for T(n)/n -> infinity: choose C0 with
  // C0*A_i >= B_i for every i; past n_C (T(n) >= C0*n) no x can satisfy the
  // strict inequality, so only arguments below n_C need to be enumerated.
  bool decide_linear_inequality(const std::vector<BigNat>& A, const std::vector<BigNat>& B,
                                std::uint64_t effort = 50'000'000) const {
    detail::check_inequality_shape(A, B);
    BigNat c0 = 0;
    for (std::size_t i = 0; i < A.size(); ++i) c0 = std::max(c0, ceil_div(B[i], A[i]));
    BigNat n_c = linear_dominance_start(c0);
    std::uint64_t visited = 0;
    // Depth-first over x with A0 + sum x_i A_i < n_c.
    auto rec = [&](auto&& self, std::size_t i, const BigNat& arg, const BigNat& rhs) -> bool {
      if (++visited > effort) throw EffortExceeded("manageability enumeration");
      if (i == A.size()) return floor_eval(arg) < rhs;
      for (BigNat xi = 0;; ++xi) {
        BigNat a = arg + xi * A[i];
        if (a >= n_c) break;
        if (self(self, i + 1, a, rhs + xi * B[i])) return true;
      }
      return false;
    };
    if (A[0] >= n_c) return false;
    return rec(rec, 1, A[0], B[0]);
  }

  BigNat convergence_witness(const BigNat& K) const {
    if (kind_ != Tail::NSqrtLog)
      throw PreconditionError("bound '" + name_ + "' cannot certify convergence of n log n / T(n)");
    // T(n) <= (a + b) n sqrt(log n) for n >= 2 past the prefix, hence
    // g(n) >= sqrt(log n) / (a + b).
    BigNat ab = BigNat(a_) + b_;
    BigNat n = pow2(K * K * ab * ab);
    return std::max({n, BigNat(2), BigNat(values_.size())});
  }

  // Past max(prefix, 16) every tail satisfies f(n) >= 2n, so T(n) >= n + 1.
  std::optional<BigNat> find_trivial_n0() const {
    std::size_t horizon = std::max<std::size_t>(values_.size(), 16);
    for (std::size_t n = 0; n <= horizon; ++n)
      if (floor_eval(n) < n + 1) return BigNat(n);
    return std::nullopt;
  }

  BigNat nondecreasing_from() const { return monotone_start_; }

  std::string describe() const { return name_; }

  // Some n such that T(m) >= c0 * m for every m >= n. Past the prefix,
  // T(m) >= a*f(m) and a*f(m)/m is nondecreasing, so the first tail point
  // with a*f(m) >= c0*m works.
  BigNat linear_dominance_start(const BigNat& c0) const {
    auto dominated = [&](const BigNat& m) { return BigNat(a_) * tail_f(m) >= c0 * m; };
    BigNat lo = std::max<BigNat>(values_.size(), 1);
    if (dominated(lo)) return lo;
    BigNat hi = lo * 2;
    while (!dominated(hi)) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 1) {
      BigNat mid = (lo + hi) / 2;
      if (dominated(mid)) hi = mid;
      else lo = mid;
    }
    return hi;
  }

 private:
  void compute_monotone_start() {
    // Tails are nondecreasing; scan the prefix and the junction backwards.
    std::size_t n = values_.size();
    BigNat next = floor_eval(n);
    std::size_t start = n;
    while (start > 0 && values_[start - 1] <= next) {
      next = values_[start - 1];
      --start;
    }
    monotone_start_ = start;
  }

  std::string name_;
  std::vector<BigNat> values_;
  Tail kind_ = Tail::Poly;
  std::uint64_t a_ = 1, b_ = 0;
  unsigned e_ = 2;
  BigNat monotone_start_ = 0;
};

static_assert(TimeBound<LinearBound>);
static_assert(TimeBound<TableBound>);

template <TimeBound B>
BigNat floor_eval(const B& bound, const BigNat& n) {
  return bound.floor_eval(n);
}

template <TimeBound B>
bool decide_linear_inequality(const B& bound, const std::vector<BigNat>& A, const std::vector<BigNat>& B_) {
  return bound.decide_linear_inequality(A, B_);
}

template <TimeBound B>
BigNat convergence_witness(const B& bound, const BigNat& K) {
  return bound.convergence_witness(K);
}

template <TimeBound B>
std::optional<BigNat> find_trivial_n0(const B& bound) {
  return bound.find_trivial_n0();
}

// Upper bound on the number of distinct crossing sequences of length <= c
// over q states: (q^(c+1) - 1) / (q - 1).
inline BigNat sequence_count_bound(std::uint64_t q, std::uint64_t c) {
  if (q < 2) throw PreconditionError("sequence_count_bound needs q >= 2");
  BigNat p = boost::multiprecision::pow(BigNat(q), static_cast<unsigned>(c + 1));
  return (p - 1) / (q - 1);
}

}  // namespace tmv
