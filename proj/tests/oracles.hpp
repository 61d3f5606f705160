#pragma once

// Reference computations written directly from the model equations. They do
// not call into the library's numeric code so the tests compare two
// independent evaluations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double beta_at(double carrier_hz) {
  const double x = 3.0e8 / (4.0 * kPi * carrier_hz);
  return x * x;
}

inline double noise_watts(double bandwidth, double nf_db) {
  const double dbm = -174.0 + 10.0 * std::log10(bandwidth) + nf_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

// Piecewise distance to the nearest RSU for a vehicle that has travelled d
// metres from the cell edge.
inline double horizontal(double d, double spacing) {
  const double half = spacing / 2.0;
  const auto k = static_cast<long long>(std::floor(d / half));
  const double m = std::fmod(d, half);
  return (k % 2 == 1) ? m : half - m;
}

inline double gain(double horizontal, double r, double h, double alpha, double beta) {
  return beta * std::pow(horizontal * horizontal + r * r + h * h, -alpha / 2.0);
}

inline double budget(double d, double spacing, double speed) {
  return (spacing - std::fmod(d, spacing)) / speed;
}

inline double rate(double bandwidth, double p, double g, double noise_plus_interference) {
  return bandwidth * std::log2(1.0 + p * g / noise_plus_interference);
}

// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, depth - 1) +
           rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, depth - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, 60);
}

// integral_a^H (x^2 + c^2)^(-alpha/2) dx via u = a/x, so infinite H is fine.
inline double tail_integral(double a, double c, double alpha, double H = INFINITY) {
  const double u_lo = std::isinf(H) ? 0.0 : a / H;
  auto f = [&](double u) {
    return a * std::pow(u, alpha - 2.0) * std::pow(a * a + c * c * u * u, -alpha / 2.0);
  };
  // Scale the tolerance to the size of the answer.
  const double rough = simpson(f, u_lo, 1.0, 1e-6);
  return simpson(f, u_lo, 1.0, 1e-14 * std::abs(rough));
}

struct UpsilonInputs {
  double spacing, r1, r2, h, alpha, beta, lambda1, lambda2;
};

inline double upsilon(const UpsilonInputs& g, double H = INFINITY) {
  const double a = g.spacing / 2.0;
  const double c1 = std::sqrt(g.r1 * g.r1 + g.h * g.h);
  const double c2 = std::sqrt(g.r2 * g.r2 + g.h * g.h);
  return 2.0 * g.beta *
         (g.lambda1 * tail_integral(a, c1, g.alpha, H) + g.lambda2 * tail_integral(a, c2, g.alpha, H));
}

// E[G] for one sectored pattern estimated from uniform angles on (-pi, pi].
struct Pattern {
  double main, side, beamwidth;  // beamwidth is the total main-lobe width
};

inline double xi1_monte_carlo(const Pattern& v, const Pattern& r, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gv = std::abs(angle(rng)) < v.beamwidth / 2.0 ? v.main : v.side;
    const double gr = std::abs(angle(rng)) < r.beamwidth / 2.0 ? r.main : r.side;
    sum += gv * gr;
  }
  return sum / static_cast<double>(n);
}

inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Smallest x in [lo, hi] with pred(x) true, for a predicate monotone in x.
inline double bisect_first(const std::function<bool(double)>& pred, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace oracle
