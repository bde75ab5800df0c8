#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace specprice {

inline constexpr double kCdfTol = 1e-9;

// On [lo, hi] the CDF is A - B/(x - c). Stored by its values at the two
// ends, which stay well conditioned when A and B are huge (mixing
// probabilities near 0 or 1); A and B are recovered on demand.
struct HyperbolicSegment {
  double lo = 0, hi = 0;
  double flo = 0, fhi = 0;

  // from the A, B form; only for well-conditioned coefficients
  static HyperbolicSegment from_ab(double c, double lo, double hi, double A, double B);
  double B(double c) const;
  double A(double c) const;
};

// Piecewise-hyperbolic CDF with an optional atom. The atom normally sits
// at v; the only other use is the Bertrand point mass at c.
struct PriceCdf {
  double c_ref = 0;
  double v = 1;
  std::vector<HyperbolicSegment> segments;
  double jump = 0;        // mass of the atom
  double jump_at = 1;     // where the atom sits, normally v

  static PriceCdf point_mass(double c, double v, double at);
  static PriceCdf from_segments(double c, double v, std::vector<HyperbolicSegment> segs);

  double seg_value(const HyperbolicSegment& s, double x) const;
  double support_lo() const;
  double support_hi() const;
};

double cdf_eval(const PriceCdf& d, double x);
// P(X < x)
double cdf_below(const PriceCdf& d, double x);
// P(X = x)
double atom_mass(const PriceCdf& d, double x);
double quantile(const PriceCdf& d, double u);

// Uniform on [0,1) from the top 53 bits, so streams are portable across
// standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
double sample(const PriceCdf& d, std::mt19937_64& rng);

struct Moments {
  double mean = 0;
  double variance = 0;
};
Moments moments(const PriceCdf& d);

struct Violation {
  std::string kind;    // monotonicity, contiguity, continuity, range, mass, jump
  std::string detail;
};
std::vector<Violation> validate_cdf(const PriceCdf& d);

// Mixture of CDFs sharing c and v, weights summing to 1.
Moments mixture_moments(const std::vector<std::pair<double, const PriceCdf*>>& parts);

}  // namespace specprice
