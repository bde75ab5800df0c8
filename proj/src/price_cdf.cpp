#include "specprice/price_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specprice/error.hpp"

namespace specprice {

HyperbolicSegment HyperbolicSegment::from_ab(double c, double lo, double hi, double A, double B) {
  return {lo, hi, A - B / (lo - c), A - B / (hi - c)};
}

double HyperbolicSegment::B(double c) const {
  if (hi <= lo) return 0.0;
  return (fhi - flo) * (lo - c) * (hi - c) / (hi - lo);
}

double HyperbolicSegment::A(double c) const { return flo + B(c) / (lo - c); }

// F(x) = flo + (fhi - flo) * (yhi / y) * (x - lo) / (hi - lo), exact at both ends
double PriceCdf::seg_value(const HyperbolicSegment& s, double x) const {
  if (x <= s.lo) return s.flo;
  if (x >= s.hi) return s.fhi;
  return s.flo + (s.fhi - s.flo) * ((s.hi - c_ref) / (x - c_ref)) * ((x - s.lo) / (s.hi - s.lo));
}

PriceCdf PriceCdf::point_mass(double c, double v, double at) {
  PriceCdf d;
  d.c_ref = c;
  d.v = v;
  d.jump = 1.0;
  d.jump_at = at;
  return d;
}

PriceCdf PriceCdf::from_segments(double c, double v, std::vector<HyperbolicSegment> segs) {
  PriceCdf d;
  d.c_ref = c;
  d.v = v;
  d.jump_at = v;
  d.segments = std::move(segs);
  if (!d.segments.empty()) {
    const auto& last = d.segments.back();
    d.jump = std::max(0.0, 1.0 - last.fhi);
    if (d.jump < 1e-15) d.jump = 0;
  } else {
    d.jump = 1.0;
  }
  return d;
}

double PriceCdf::support_lo() const {
  if (segments.empty()) return jump_at;
  return std::min(segments.front().lo, jump > 0 ? jump_at : segments.front().lo);
}

double PriceCdf::support_hi() const {
  if (segments.empty()) return jump_at;
  return jump > 0 ? std::max(jump_at, segments.back().hi) : segments.back().hi;
}

namespace {

// Continuous part only (no atom).
double continuous_part(const PriceCdf& d, double x) {
  if (d.segments.empty() || x < d.segments.front().lo) return 0.0;
  // rightmost segment with lo <= x, so a knot uses the right-hand piece
  auto it = std::upper_bound(d.segments.begin(), d.segments.end(), x,
                             [](double val, const HyperbolicSegment& s) { return val < s.lo; });
  const HyperbolicSegment& s = *std::prev(it);
  double xe = std::min(x, s.hi);
  return d.seg_value(s, xe);
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double cdf_eval(const PriceCdf& d, double x) {
  if (x >= d.v) return 1.0;
  double f = continuous_part(d, x);
  if (d.jump > 0 && x >= d.jump_at) f += d.jump;
  return clamp01(f);
}

double cdf_below(const PriceCdf& d, double x) {
  if (x > d.v) return 1.0;
  double f = continuous_part(d, x);
  if (d.jump > 0 && x > d.jump_at) f += d.jump;
  return clamp01(f);
}

double atom_mass(const PriceCdf& d, double x) {
  return (d.jump > 0 && x == d.jump_at) ? d.jump : 0.0;
}

double quantile(const PriceCdf& d, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream os;
    os << "quantile level must lie in [0,1], got " << u;
    fail(ErrorCode::Domain, os.str());
  }
  if (d.segments.empty()) return d.jump_at;
  if (d.jump > 0 && d.jump_at < d.segments.front().lo && u <= d.jump) return d.jump_at;
  const auto& first = d.segments.front();
  if (u <= first.flo) return first.lo;
  for (const auto& s : d.segments) {
    if (u <= s.fhi) {
      if (!(s.fhi > s.flo) || u <= s.flo) return s.lo;
      if (u == s.fhi) return s.hi;
      // invert with r the fraction of the segment's mass below x
      const double r = (u - s.flo) / (s.fhi - s.flo);
      const double ylo = s.lo - d.c_ref, yhi = s.hi - d.c_ref;
      double x = d.c_ref + yhi * ylo / (yhi - r * (s.hi - s.lo));
      return std::clamp(x, s.lo, s.hi);
    }
  }
  return d.jump_at;
}

double sample(const PriceCdf& d, std::mt19937_64& rng) { return quantile(d, uniform01(rng)); }

namespace {

// E[Y] and E[Y^2] with Y = X - c; the density on a segment is B/y^2.
void raw_moments(const PriceCdf& d, double& m1, double& m2) {
  const double c = d.c_ref;
  m1 = m2 = 0;
  double prev_f = 0;
  double prev_hi = 0;
  bool first = true;
  for (const auto& s : d.segments) {
    double flo = s.flo;
    double atom = first ? flo : flo - prev_f;
    if (atom > 0) {
      double y = (first ? s.lo : prev_hi) - c;
      m1 += atom * y;
      m2 += atom * y * y;
    }
    // density B/y^2 with B = dF ylo yhi / w
    double ylo = s.lo - c, yhi = s.hi - c, w = s.hi - s.lo, dF = s.fhi - s.flo;
    if (w > 0) {
      m1 += dF * yhi * (ylo / w) * std::log1p(w / ylo);
      m2 += dF * ylo * yhi;
    } else {
      m1 += dF * ylo;
      m2 += dF * ylo * ylo;
    }
    prev_f = s.fhi;
    prev_hi = s.hi;
    first = false;
  }
  if (d.jump > 0) {
    double y = d.jump_at - c;
    m1 += d.jump * y;
    m2 += d.jump * y * y;
  }
}

}  // namespace

Moments moments(const PriceCdf& d) {
  double m1, m2;
  raw_moments(d, m1, m2);
  return {d.c_ref + m1, std::max(0.0, m2 - m1 * m1)};
}

Moments mixture_moments(const std::vector<std::pair<double, const PriceCdf*>>& parts) {
  double m1 = 0, m2 = 0, c = 0;
  for (const auto& [w, d] : parts) {
    if (w == 0) continue;
    double a, b;
    raw_moments(*d, a, b);
    c = d->c_ref;
    m1 += w * a;
    m2 += w * b;
  }
  return {c + m1, std::max(0.0, m2 - m1 * m1)};
}

std::vector<Violation> validate_cdf(const PriceCdf& d) {
  std::vector<Violation> out;
  auto add = [&](const char* kind, const std::string& msg) { out.push_back({kind, msg}); };
  auto num = [](double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
  };
  const double xtol = kCdfTol * std::max(1.0, std::fabs(d.v));

  if (d.jump < -kCdfTol || d.jump > 1 + kCdfTol) add("range", "atom mass " + num(d.jump));
  if (d.jump > kCdfTol && d.jump_at < d.v - xtol)
    add("jump", "atom of mass " + num(d.jump) + " below v at " + num(d.jump_at));

  for (size_t k = 0; k < d.segments.size(); ++k) {
    const auto& s = d.segments[k];
    std::string where = "segment " + std::to_string(k);
    if (!(s.lo < s.hi)) add("segment", where + " has lo >= hi");
    if (s.fhi < s.flo) add("monotonicity", where + " decreases");
    if (s.lo <= d.c_ref) add("range", where + " starts at or below c");
    if (s.hi > d.v + xtol) add("range", where + " extends above v");
    double flo = s.flo, fhi = s.fhi;
    if (flo < -kCdfTol || fhi > 1 + kCdfTol)
      add("range", where + " values [" + num(flo) + ", " + num(fhi) + "] leave [0,1]");
    if (k == 0 && flo > kCdfTol) add("jump", "mass " + num(flo) + " at lower endpoint " + num(s.lo));
    if (k + 1 < d.segments.size()) {
      const auto& t = d.segments[k + 1];
      if (std::fabs(s.hi - t.lo) > xtol)
        add("contiguity", "gap between " + num(s.hi) + " and " + num(t.lo));
      double gap = t.flo - fhi;
      if (std::fabs(gap) > kCdfTol) add("continuity", "jump " + num(gap) + " at knot " + num(s.hi));
    }
  }
  double top = d.segments.empty() ? 0.0 : d.segments.back().fhi;
  double total = top + d.jump;
  if (std::fabs(total - 1) > kCdfTol) add("mass", "total mass " + num(total));
  if (!d.segments.empty() && d.jump > kCdfTol && d.segments.back().hi < d.jump_at - xtol)
    add("contiguity", "gap between support end " + num(d.segments.back().hi) + " and atom");
  return out;
}

}  // namespace specprice
