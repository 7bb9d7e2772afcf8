#pragma once

// Upper bound c on crossing-sequence length for q-state one-tape machines
// running in time T(n) = o(n log n). c must satisfy c >= max(T(0), T(1)) and,
// for every n >= 2,
//
//   3 (q n^{log q / sqrt g(n)} - 1) / (q - 1)
//       <= n - 3 - n / sqrt g(n) + c sqrt g(n) / log n,     g(n) = n log n / T(n).
//
// Past the threshold N where g(n) >= max(16, 4 log^2 q) and n >= 144 the
// inequality holds for every c >= 0, so only [2, N) is examined. Small n are
// checked one by one; larger n are covered by intervals [lo, hi] on which T is
// nondecreasing, using g(n) >= lo log lo / T(hi). Every real quantity is
// rounded in the direction that can only increase the resulting c.

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tmv/bounds.hpp"

namespace tmv {

// RAII handle for an MPFR number.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  operator mpfr_ptr() { return v_; }
  operator mpfr_srcptr() const { return v_; }

  void set(const BigNat& n, mpfr_rnd_t rnd) { mpfr_set_str(v_, n.str().c_str(), 10, rnd); }

 private:
  mpfr_t v_;
};

struct KobayashiLimits {
  std::uint64_t effort = 5'000'000;          // inequality evaluations before giving up
  std::uint64_t pointwise_until = 1u << 16;  // n below this are checked individually
  unsigned interval_shift = 6;               // interval width lo / 2^shift
  mpfr_prec_t precision = 256;
};

struct KobayashiConstant {
  std::uint64_t c = 0;
  std::uint64_t q = 0;
  std::string bound;
  BigNat threshold;  // N: the inequality holds for all n >= N regardless of c
  std::uint64_t evaluations = 0;
};

namespace detail {

class KobayashiScan {
 public:
  KobayashiScan(std::uint64_t q, mpfr_prec_t prec)
      : q_(q), log_q_up_(prec), tmp_{Mpfr(prec), Mpfr(prec), Mpfr(prec), Mpfr(prec), Mpfr(prec),
                                                   Mpfr(prec), Mpfr(prec), Mpfr(prec)} {
    mpfr_set_ui(log_q_up_, static_cast<unsigned long>(q), MPFR_RNDU);
    mpfr_log2(log_q_up_, log_q_up_, MPFR_RNDU);
  }

  // Smallest natural c that makes the inequality hold at every n in [lo, hi],
  // given T(hi) and T nondecreasing on the interval (conservative).
  BigNat needed(const BigNat& lo, const BigNat& hi, const BigNat& t_hi) {
    if (t_hi <= 0) throw PreconditionError("T(n) must be positive for n >= 2");
    auto& [lo_d, hi_u, sg, l_hi, lhs, base, t, den] = tmp_;
    lo_d.set(lo, MPFR_RNDD);
    hi_u.set(hi, MPFR_RNDU);
    den.set(t_hi, MPFR_RNDU);

    // sg <= sqrt(g(n)) on the interval.
    mpfr_log2(sg, lo_d, MPFR_RNDD);
    mpfr_mul(sg, sg, lo_d, MPFR_RNDD);
    mpfr_div(sg, sg, den, MPFR_RNDD);
    mpfr_sqrt(sg, sg, MPFR_RNDD);

    // l_hi >= log n.
    mpfr_log2(l_hi, hi_u, MPFR_RNDU);

    // lhs >= 3 (q 2^{log q log n / sqrt g} - 1) / (q - 1).
    mpfr_mul(lhs, log_q_up_, l_hi, MPFR_RNDU);
    mpfr_div(lhs, lhs, sg, MPFR_RNDU);
    mpfr_exp2(lhs, lhs, MPFR_RNDU);
    mpfr_mul_ui(lhs, lhs, static_cast<unsigned long>(q_), MPFR_RNDU);
    mpfr_sub_ui(lhs, lhs, 1, MPFR_RNDU);
    mpfr_mul_ui(lhs, lhs, 3, MPFR_RNDU);
    mpfr_div_ui(lhs, lhs, static_cast<unsigned long>(q_ - 1), MPFR_RNDU);

    // base <= n - 3 - n / sqrt g.
    mpfr_div(t, hi_u, sg, MPFR_RNDU);
    mpfr_sub_ui(base, lo_d, 3, MPFR_RNDD);
    mpfr_sub(base, base, t, MPFR_RNDD);

    mpfr_sub(t, lhs, base, MPFR_RNDU);
    if (mpfr_sgn(t.get()) <= 0) return 0;
    // c >= (lhs - base) * log n / sqrt g.
    mpfr_mul(t, t, l_hi, MPFR_RNDU);
    mpfr_div(t, t, sg, MPFR_RNDU);
    mpfr_ceil(t, t);
    if (!mpfr_number_p(t.get())) throw InfeasibleBound("crossing bound evaluation overflowed");
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, 0, t, MPFR_RNDU);
    std::string digits(s);
    mpfr_free_str(s);
    // digits is a mantissa d1 d2 ... with value 0.d1d2... * 10^e.
    if (e <= 0) return 1;
    std::string integral = digits.substr(0, std::min<std::size_t>(digits.size(), static_cast<std::size_t>(e)));
    while (integral.size() < static_cast<std::size_t>(e)) integral += '0';
    return BigNat(integral);
  }

 private:
  std::uint64_t q_;
  Mpfr log_q_up_;
  Mpfr tmp_[8];
};

// Upper bound of max(16, 4 log^2 q), rounded up to a natural number.
inline BigNat kobayashi_g_target(std::uint64_t q) {
  Mpfr x(128);
  mpfr_set_ui(x, static_cast<unsigned long>(q), MPFR_RNDU);
  mpfr_log2(x, x, MPFR_RNDU);
  mpfr_sqr(x, x, MPFR_RNDU);
  mpfr_mul_ui(x, x, 4, MPFR_RNDU);
  mpfr_ceil(x, x);
  unsigned long v = mpfr_get_ui(x, MPFR_RNDU);
  return std::max<unsigned long>(v, 16);
}

}  // namespace detail

template <TimeBound B>
KobayashiConstant kobayashi_constant(std::uint64_t q, const B& bound, const KobayashiLimits& limits = {}) {
  if (q < 2) throw PreconditionError("kobayashi_constant needs q >= 2");
  KobayashiConstant out;
  out.q = q;
  out.bound = bound.describe();

  BigNat witness = bound.convergence_witness(detail::kobayashi_g_target(q));
  out.threshold = std::max(witness, BigNat(144));
  const BigNat& N = out.threshold;

  detail::KobayashiScan scan(q, limits.precision);
  BigNat c = 0;
  auto charge = [&] {
    if (++out.evaluations > limits.effort)
      throw InfeasibleBound("bound computation infeasible: crossing-length scan for q=" + std::to_string(q) +
                            " and T(n)=" + bound.describe() + " exceeds effort limit " +
                            std::to_string(limits.effort) + " (threshold N=" + N.str() + ")");
  };

  // Individually checked prefix; it also covers any region where T is not
  // known to be nondecreasing.
  BigNat pointwise_end = std::min(N, std::max<BigNat>(BigNat(limits.pointwise_until), bound.nondecreasing_from()));
  for (BigNat n = 2; n < pointwise_end; ++n) {
    charge();
    c = std::max(c, scan.needed(n, n, bound.floor_eval(n)));
  }

  // Interval cover of [pointwise_end, N).
  struct Span {
    BigNat lo, hi;
  };
  std::vector<Span> work;
  for (BigNat lo = std::max(pointwise_end, BigNat(2)); lo < N;) {
    BigNat width = std::max(BigNat(1), BigNat(lo >> limits.interval_shift));
    BigNat hi = std::min(BigNat(N - 1), BigNat(lo + width - 1));
    work.push_back({lo, hi});
    lo = hi + 1;
  }
  std::reverse(work.begin(), work.end());
  while (!work.empty()) {
    Span s = work.back();
    work.pop_back();
    charge();
    BigNat need = scan.needed(s.lo, s.hi, bound.floor_eval(s.hi));
    if (need <= c) continue;
    if (s.hi - s.lo < 16) {
      for (BigNat n = s.lo; n <= s.hi; ++n) {
        charge();
        c = std::max(c, scan.needed(n, n, bound.floor_eval(n)));
      }
      continue;
    }
    BigNat mid = (s.lo + s.hi) / 2;
    work.push_back({mid + 1, s.hi});
    work.push_back({s.lo, mid});
  }

  // Integral-valued bounds: floor(T) = T at 0 and 1.
  c = std::max({c, bound.floor_eval(0), bound.floor_eval(1)});
  if (c > BigNat(std::numeric_limits<std::uint64_t>::max() / 2))
    throw InfeasibleBound("crossing-length bound does not fit in 64 bits");
  out.c = static_cast<std::uint64_t>(c);
  return out;
}

}  // namespace tmv
