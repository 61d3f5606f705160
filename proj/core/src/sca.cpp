#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "v2xedge/control.hpp"
#include "v2xedge/errors.hpp"

namespace v2x {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// One transmit direction: time T(P) = load / (W log2(1 + a P)) on [0, hi].
struct Channel {
  double load = 0.0;  // bits
  double a = 0.0;     // SNR per watt
  double hi = 0.0;    // power upper bound
  double bandwidth = 1.0;

  bool active() const { return load > 0.0; }

  double time(double p) const {
    if (!active()) return 0.0;
    const double rate = bandwidth * std::log2(1.0 + a * p);
    return rate > 0.0 ? load / rate : std::numeric_limits<double>::infinity();
  }

  double time_derivative(double p) const {
    if (!active()) return 0.0;
    const double l = std::log1p(a * p);
    if (l <= 0.0) return -std::numeric_limits<double>::infinity();
    return -load * kLn2 * a / (bandwidth * (1.0 + a * p) * l * l);
  }

  double time_second_derivative(double p) const {
    if (!active()) return 0.0;
    const double l = std::log1p(a * p);
    if (l <= 0.0) return std::numeric_limits<double>::infinity();
    const double q = 1.0 + a * p;
    return load * kLn2 * a * a * (l + 2.0) / (bandwidth * q * q * l * l * l);
  }

  // d/dP [P * T(P)]
  double energy_derivative(double p) const { return time(p) + p * time_derivative(p); }
};

// Next trial point inside (lo, up): geometric midpoint, or a deep cut while
// the lower end is still zero. Roots can sit many decades below `up`.
double split(double lo, double up) { return lo > 0.0 ? std::sqrt(lo * up) : up * 1e-3; }

// Root of an increasing function d on (0, hi] (argmin of the convex function
// whose derivative is d), or hi when d(hi) <= 0. Newton steps are kept
// inside the shrinking bracket.
template <class D, class DD>
double minimize_1d(D&& d, DD&& dd, double hi, double guess) {
  if (d(hi) <= 0.0) return hi;
  double lo = 0.0;
  double up = hi;
  double x = guess > 0.0 && guess < hi ? guess : 0.5 * hi;
  for (int i = 0; i < 400; ++i) {
    const double f = d(x);
    if (f == 0.0) return x;
    if (f > 0.0) {
      up = x;
    } else {
      lo = x;
    }
    if (up - lo <= 4.0 * std::numeric_limits<double>::epsilon() * up) break;
    const double step = f / dd(x);
    const double next = x - step;
    if (std::isfinite(next) && next > lo && next < up) {
      if (std::abs(step) <= 2.0 * std::numeric_limits<double>::epsilon() * x) return next;
      x = next;
    } else {
      x = split(lo, up);
    }
  }
  return up;
}

// Minimise sum_i f_i(x_i) subject to sum_i T_i(x_i) <= budget and the boxes.
// `argmin(i, mu)` returns the minimiser of f_i + mu * T_i. The returned point
// is primal feasible (taken from the upper multiplier bracket).
template <class Argmin>
std::array<double, 2> solve_dual(const std::array<Channel, 2>& ch, double budget, Argmin&& argmin,
                                 double mu_scale) {
  auto point = [&](double mu) {
    return std::array<double, 2>{ch[0].active() ? argmin(0, mu) : 0.0,
                                 ch[1].active() ? argmin(1, mu) : 0.0};
  };
  auto excess = [&](const std::array<double, 2>& x) {
    return ch[0].time(x[0]) + ch[1].time(x[1]) - budget;
  };

  std::array<double, 2> x = point(0.0);
  if (excess(x) <= 0.0) return x;

  double mu_lo = 0.0;
  double mu_hi = std::max(mu_scale, std::numeric_limits<double>::min());
  std::array<double, 2> x_hi = point(mu_hi);
  int grow = 0;
  while (excess(x_hi) > 0.0) {
    if (++grow > 400) {
      // Constraint is (numerically) tight at the box corner.
      return {ch[0].active() ? ch[0].hi : 0.0, ch[1].active() ? ch[1].hi : 0.0};
    }
    mu_lo = mu_hi;
    mu_hi *= 4.0;
    x_hi = point(mu_hi);
  }
  if (mu_lo == 0.0) {
    // Push the lower end off zero so the root finder works on a finite bracket.
    double probe = mu_hi;
    for (int i = 0; i < 64; ++i) {
      probe *= 1e-3;
      const std::array<double, 2> x_probe = point(probe);
      if (excess(x_probe) > 0.0) {
        mu_lo = probe;
        break;
      }
      mu_hi = probe;
      x_hi = x_probe;
    }
    if (mu_lo == 0.0) return x_hi;
  }
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      [&](double mu) { return excess(point(mu)); }, mu_lo, mu_hi,
      boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), max_iter);
  if (bracket.second < mu_hi) {
    const std::array<double, 2> x_b = point(bracket.second);
    if (excess(x_b) <= 0.0) x_hi = x_b;
  }
  return x_hi;
}

struct ScaProblem {
  std::array<Channel, 2> ch;  // 0: uplink (vehicle), 1: downlink (RSU)
  double budget = 0.0;        // dwell budget minus processing time

  double objective(const std::array<double, 2>& y) const {
    return y[0] * ch[0].time(y[0]) + y[1] * ch[1].time(y[1]);
  }

  bool feasible(const std::array<double, 2>& y, double rel_slack = 1e-12) const {
    for (int i = 0; i < 2; ++i) {
      if (y[i] < 0.0 || y[i] > ch[i].hi * (1.0 + 1e-15)) return false;
    }
    return ch[0].time(y[0]) + ch[1].time(y[1]) <= budget * (1.0 + rel_slack);
  }

  std::array<double, 2> corner() const {
    return {ch[0].active() ? ch[0].hi : 0.0, ch[1].active() ? ch[1].hi : 0.0};
  }

  double corner_slack() const {
    const auto c = corner();
    return budget - ch[0].time(c[0]) - ch[1].time(c[1]);
  }
};

ScaProblem make_problem(double c_in_bits, const SlotState& state, const SlotContext& ctx) {
  const double gain = ctx.channel_gain * ctx.geom.serving_gain_product();
  ScaProblem pb;
  pb.ch[0] = Channel{c_in_bits, gain / (ctx.radio.interference_temperature + ctx.radio.noise_power),
                     ctx.power_cap, ctx.radio.bandwidth};
  pb.ch[1] = Channel{state.output_bits, gain / ctx.radio.noise_power,
                     ctx.radio.p_r_max, ctx.radio.bandwidth};
  pb.budget = ctx.budget - ctx.compute.compute_time_per_bit() * c_in_bits;
  return pb;
}

// Coordinates u_i = y_i / s_i with s_i the current power (floored at a tiny
// fraction of the box), so the residual is relative in each power. Gradient
// scaled by 1 / u_scale.
double stationarity(const ScaProblem& pb, const std::array<double, 2>& y, double u_scale) {
  std::array<double, 2> s{};
  std::array<double, 2> z{};
  std::array<Channel, 2> scaled = pb.ch;
  for (int i = 0; i < 2; ++i) {
    if (!pb.ch[i].active()) continue;
    s[i] = std::max(y[i], 1e-12 * pb.ch[i].hi);
    z[i] = y[i] / s[i] - pb.ch[i].energy_derivative(y[i]) * s[i] / u_scale;
    scaled[i].a *= s[i];
    scaled[i].hi /= s[i];
  }
  // Euclidean projection of z onto {u in box : sum T_i(s_i u_i) <= budget}.
  auto argmin = [&](int i, double mu) {
    const Channel& c = scaled[i];
    return minimize_1d([&](double u) { return 2.0 * (u - z[i]) + mu * c.time_derivative(u); },
                       [&](double u) { return 2.0 + mu * c.time_second_derivative(u); }, c.hi,
                       std::clamp(z[i], 0.0, c.hi));
  };
  const auto proj = solve_dual(scaled, pb.budget, argmin, 1.0);
  double r2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (!pb.ch[i].active()) continue;
    const double m = y[i] / s[i] - proj[i];
    r2 += m * m;
  }
  return r2;
}

}  // namespace

double transmission_energy(double c_in_bits, double p_v, double p_r, const SlotState& state,
                           const SlotContext& ctx) {
  const ScaProblem pb = make_problem(c_in_bits, state, ctx);
  return pb.objective({p_v, p_r});
}

double sca_stationarity(double c_in_bits, PowerPair y, const SlotState& state,
                        const SlotContext& ctx) {
  const ScaProblem pb = make_problem(c_in_bits, state, ctx);
  const std::array<double, 2> yy{y.p_v, y.p_r};
  const double scale = std::max(pb.objective(yy), std::numeric_limits<double>::min());
  return stationarity(pb, yy, scale);
}

ScaResult sca_power_allocation(double c_in_bits, const SlotState& state, const SlotContext& ctx,
                               const ControlConfig& cfg, std::optional<PowerPair> start) {
  if (c_in_bits < 0.0) throw std::invalid_argument("c_in_bits must be non-negative");
  const ScaProblem pb = make_problem(c_in_bits, state, ctx);
  ScaResult res;

  if (!pb.ch[0].active() && !pb.ch[1].active()) {
    res.objective_trace.push_back(0.0);
    res.residual_trace.push_back(0.0);
    return res;
  }

  const auto corner = pb.corner();
  if (!pb.feasible(corner)) {
    throw InfeasibleSlotError("latency budget cannot be met even at maximum power (C_in = " +
                              std::to_string(c_in_bits) + " bits)");
  }

  std::array<double, 2> y = corner;
  if (start) {
    y = {pb.ch[0].active() ? start->p_v : 0.0, pb.ch[1].active() ? start->p_r : 0.0};
    if (!pb.feasible(y)) throw std::invalid_argument("SCA start point is infeasible");
  }

  // The corner is the only feasible point when C2 is tight there.
  if (pb.corner_slack() <= 1e-12 * std::max(pb.budget, 0.0)) {
    res.p_v = corner[0];
    res.p_r = corner[1];
    res.objective_trace.push_back(pb.objective(corner));
    res.residual_trace.push_back(0.0);
    return res;
  }

  const double u_scale = std::max(pb.objective(y), std::numeric_limits<double>::min());
  std::array<double, 2> prox{};
  for (int i = 0; i < 2; ++i) {
    if (pb.ch[i].active()) prox[i] = cfg.prox_weight * u_scale / (pb.ch[i].hi * pb.ch[i].hi);
  }

  double step = cfg.initial_step;
  for (int k = 0;; ++k) {
    const double r2 =
        stationarity(pb, y, std::max(pb.objective(y), std::numeric_limits<double>::min()));
    res.objective_trace.push_back(pb.objective(y));
    res.residual_trace.push_back(r2);
    if (r2 <= cfg.sca_tolerance) {
      res.p_v = y[0];
      res.p_r = y[1];
      res.iterations = k;
      res.residual_sq = r2;
      return res;
    }
    if (k >= cfg.max_sca_iters) {
      throw ConvergenceError("SCA power allocation did not converge in " +
                             std::to_string(cfg.max_sca_iters) + " iterations (residual " +
                             std::to_string(r2) + ")");
    }

    // Surrogate: y_k T(P) + P T(y_k) + prox (P - y_k)^2 per channel, exact C2.
    const std::array<double, 2> anchor = y;
    std::array<double, 2> t_anchor{};
    for (int i = 0; i < 2; ++i) t_anchor[i] = pb.ch[i].time(anchor[i]);
    auto argmin = [&](int i, double mu) {
      const Channel& c = pb.ch[i];
      return minimize_1d(
          [&](double p) {
            return (anchor[i] + mu) * c.time_derivative(p) + t_anchor[i] +
                   2.0 * prox[i] * (p - anchor[i]);
          },
          [&](double p) { return (anchor[i] + mu) * c.time_second_derivative(p) + 2.0 * prox[i]; },
          c.hi, anchor[i]);
    };
    const double mu_scale = u_scale / std::max(pb.budget, 1e-300);
    const auto y_hat = solve_dual(pb.ch, pb.budget, argmin, mu_scale);

    for (int i = 0; i < 2; ++i) y[i] += step * (y_hat[i] - y[i]);
    step *= (1.0 - cfg.step_decay * step);
  }
}

}  // namespace v2x
