#include "specprice/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "specprice/error.hpp"

namespace specprice {

namespace {

void check_mn(int m, int n, double x) {
  if (!(m > 0 && m < n)) fail(ErrorCode::Domain, "need 0 < m < n");
  if (!(x >= 0 && x <= 1)) fail(ErrorCode::Domain, "probability argument outside [0,1]");
}

}  // namespace

double w_mn(int m, int n, double x) {
  check_mn(m, n, x);
  const int k = n - 1;
  // long double keeps the result within an ulp of the exact sum for n <= 64
  long double sum = 0, binom = 1;  // C(k, 0)
  const long double lx = x, ly = 1.0L - lx;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    if (i >= m) sum += binom * std::pow(lx, i) * std::pow(ly, k - i);
  }
  sum = std::clamp(sum, 0.0L, 1.0L);
  return static_cast<double>(sum);
}

double W_mn(int m, int n, double x) {
  check_mn(m, n, x);
  // complement summed directly so small W is not lost to cancellation
  const int k = n - 1;
  long double sum = 0, binom = 1;
  const long double lx = x, ly = 1.0L - lx;
  for (int i = 0; i < m; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    sum += binom * std::pow(lx, i) * std::pow(ly, k - i);
  }
  return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

NPrimaryReport n_primary_payoff_checks(double v, double c, double q, double s, int n, int m) {
  if (!(v > c && c >= 0)) fail(ErrorCode::Range, "need v > c >= 0");
  if (!(q > 0 && q < 1)) fail(ErrorCode::Range, "q must lie in (0,1)");
  if (!(s >= 0)) fail(ErrorCode::Range, "s must be >= 0");
  check_mn(m, n, q);
  NPrimaryReport r;
  double W = W_mn(m, n, q);
  r.symmetric_constant = (v - c) * W;
  r.all_acquire_payoff = r.symmetric_constant - s;
  // pricing v blind sells exactly when fewer than m rivals are up, as with Y
  r.deviation_payoff = r.symmetric_constant;
  r.gap = r.deviation_payoff - r.all_acquire_payoff;
  return r;
}

Estimate simulate_all_acquire(double v, double c, double q, double s, int n, int m,
                              std::uint64_t rounds, std::uint64_t seed) {
  check_mn(m, n, q);
  if (rounds < 2) fail(ErrorCode::Domain, "rounds must be >= 2");
  std::mt19937_64 rng(derive_seed(seed, 0xa11, 0));
  std::uint64_t cnt = 0;
  double sum = 0, sumsq = 0;
  for (std::uint64_t r = 0; r < rounds; ++r) {
    bool focal = uniform01(rng) < q;
    int up = focal ? 1 : 0;
    for (int i = 1; i < n; ++i) up += uniform01(rng) < q ? 1 : 0;
    if (!focal) continue;
    // with at most m sellers every channel goes at v; otherwise all post c
    double pay = (up <= m ? v - c : 0.0) - s;
    ++cnt;
    sum += pay;
    sumsq += pay * pay;
  }
  Estimate e;
  e.count = cnt;
  if (cnt < 2) return e;
  e.mean = sum / cnt;
  double var = std::max(0.0, (sumsq - cnt * e.mean * e.mean) / (cnt - 1));
  e.std_error = std::sqrt(var / cnt);
  return e;
}

MultiStatePayoffs multistate_payoffs(const MultiStateParams& p) {
  if (!(p.v > p.c && p.c >= 0)) fail(ErrorCode::Domain, "need v > c >= 0");
  if (!(p.q_state1 > 0 && p.q_state2 > 0 && p.q_state1 + p.q_state2 < 1))
    fail(ErrorCode::Domain, "state probabilities must be positive with q1 + q2 < 1");
  if (!(p.h2 > p.h1)) fail(ErrorCode::Domain, "quality offsets must be strictly increasing");
  const double q1 = p.q_state1, q2 = p.q_state2, vc = p.v - p.c;
  MultiStatePayoffs r;
  r.payoff_state2 = vc * (1 - q1 - q2) + p.h2 * (1 - q2) - p.h1 * q1;
  r.payoff_state1 = (vc + p.h1) * (1 - q1 - q2);
  r.L = p.c - p.h1 + (vc + p.h1) * (1 - q1 - q2) / (1 - q2);
  double lhs = (r.L - p.c + p.h2) * (1 - q2);
  if (std::fabs(lhs - r.payoff_state2) > 1e-12 * std::max(1.0, std::fabs(r.payoff_state2))) {
    std::ostringstream os;
    os.precision(17);
    os << "payoff identity off: " << lhs << " vs " << r.payoff_state2;
    fail(ErrorCode::Internal, os.str());
  }
  return r;
}

}  // namespace specprice
