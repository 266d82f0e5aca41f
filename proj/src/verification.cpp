#include "lxwdg/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lxwdg/basis.hpp"

namespace lxwdg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 100;

// Root of a monotone increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
// Newton steps that leave the bracket fall back to bisection.
template <class F, class DF>
double safeguarded_root(F f, DF df, double lo, double hi, double x0, double tol) {
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    const double d = df(x);
    double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol * std::max(1.0, std::abs(x)) || hi - lo <= tol) return next;
    x = next;
  }
  return x;
}

struct Bracket {
  double lo;
  double hi;
};

// Newton iteration at the module tolerance; bisection on the bracket if
// Newton stalls. Throws DomainError if neither converges.
template <class F, class DF>
double star_root(F f, DF df, double guess, Bracket bracket, const char* what) {
  double x = guess;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const double d = df(x);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    double next = x - f(x) / d;
    if (next <= 0.0) next = 0.5 * x;
    if (2.0 * std::abs(next - x) <= kNewtonTol * (next + x)) return next;
    x = next;
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  for (int grow = 0; grow < 60 && f(hi) < 0.0; ++grow) hi *= 2.0;
  if (!(f(lo) <= 0.0 && f(hi) >= 0.0)) {
    throw DomainError(std::string(what) + ": star-state iteration did not converge");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
    if (hi - lo <= kNewtonTol * hi) return 0.5 * (lo + hi);
  }
  throw DomainError(std::string(what) + ": star-state iteration did not converge");
}

}  // namespace

BurgersData burgers_sine() {
  BurgersData d;
  d.q0 = [](double x) { return std::sin(2.0 * kPi * x); };
  d.dq0 = [](double x) { return 2.0 * kPi * std::cos(2.0 * kPi * x); };
  d.x_low = 0.0;
  d.x_high = 1.0;
  return d;
}

double burgers_shock_time(const BurgersData& data) {
  constexpr int samples = 4096;
  const double len = data.x_high - data.x_low;
  const double h = len / samples;
  int best = 0;
  double best_val = -data.dq0(data.x_low);
  for (int j = 1; j < samples; ++j) {
    const double v = -data.dq0(data.x_low + j * h);
    if (v > best_val) {
      best_val = v;
      best = j;
    }
  }
  double a = data.x_low + (best - 1) * h;
  double b = data.x_low + (best + 1) * h;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  while (b - a > 1e-13 * len) {
    if (-data.dq0(c) > -data.dq0(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - ratio * (b - a);
    d = a + ratio * (b - a);
  }
  const double peak = std::max(best_val, -data.dq0(0.5 * (a + b)));
  if (!(peak > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / peak;
}

double burgers_exact(const BurgersData& data, double t, double x) {
  if (t == 0.0) return data.q0(x);
  const double t_shock = burgers_shock_time(data);
  if (!(t < t_shock)) {
    std::ostringstream os;
    os.precision(17);
    os << "burgers_exact: t = " << t << " is not before the shock time " << t_shock;
    throw DomainError(os.str());
  }
  double qmax = 0.0;
  const double len = data.x_high - data.x_low;
  for (int j = 0; j < 1024; ++j) qmax = std::max(qmax, std::abs(data.q0(data.x_low + j * len / 1024)));
  const double reach = 1.05 * t * qmax + 1e-12;
  auto g = [&](double xi) { return xi + t * data.q0(xi) - x; };
  auto dg = [&](double xi) { return 1.0 + t * data.dq0(xi); };
  const double xi = safeguarded_root(g, dg, x - reach, x + reach, x - t * data.q0(x), 1e-15);
  return data.q0(xi);
}

RiemannSolution RiemannSolution::shallow_water(const PrimitiveVector& left,
                                               const PrimitiveVector& right, double g) {
  RiemannSolution rs(System::shallow_water(g));
  rs.left_ = left;
  rs.right_ = right;
  const double hl = left(0), ul = left(1), hr = right(0), ur = right(1);
  if (!(hl > 0.0 && hr > 0.0)) throw DomainError("shallow water Riemann: depths must be positive");
  const double cl = std::sqrt(g * hl);
  const double cr = std::sqrt(g * hr);

  if (2.0 * (cl + cr) <= ur - ul) {
    rs.vacuum_ = true;
    rs.star_ = 0.0;
    rs.u_star_ = 0.0;
    rs.left_speeds_ = {ul - cl, ul + 2.0 * cl};
    rs.right_speeds_ = {ur + cr, ur - 2.0 * cr};
    return rs;
  }

  auto side = [g](double h, double hk) {
    if (h <= hk) return 2.0 * (std::sqrt(g * h) - std::sqrt(g * hk));
    return (h - hk) * std::sqrt(0.5 * g * (h + hk) / (h * hk));
  };
  auto dside = [g](double h, double hk) {
    if (h <= hk) return std::sqrt(g / h);
    const double phi = std::sqrt(0.5 * g * (h + hk) / (h * hk));
    return phi - (h - hk) * g / (4.0 * phi * h * h);
  };
  auto f = [&](double h) { return side(h, hl) + side(h, hr) + ur - ul; };
  auto df = [&](double h) { return dside(h, hl) + dside(h, hr); };
  const double c0 = 0.5 * (cl + cr) - 0.25 * (ur - ul);
  const double guess = std::max(c0 * c0 / g, 1e-8 * std::min(hl, hr));
  const double hs = star_root(f, df, guess, {1e-14, 10.0 * std::max(hl, hr)}, "shallow water Riemann");
  rs.star_ = hs;
  rs.u_star_ = 0.5 * (ul + ur) + 0.5 * (side(hs, hr) - side(hs, hl));
  const double cs = std::sqrt(g * hs);
  if (hs > hl) {
    rs.left_kind_ = WaveKind::shock;
    const double s = ul - std::sqrt(0.5 * g * (hs + hl) * hs / hl);
    rs.left_speeds_ = {s, s};
  } else {
    rs.left_speeds_ = {ul - cl, rs.u_star_ - cs};
  }
  if (hs > hr) {
    rs.right_kind_ = WaveKind::shock;
    const double s = ur + std::sqrt(0.5 * g * (hs + hr) * hs / hr);
    rs.right_speeds_ = {s, s};
  } else {
    rs.right_speeds_ = {ur + cr, rs.u_star_ + cs};
  }
  return rs;
}

PrimitiveVector RiemannSolution::sample_shallow_water(double s) const {
  const double g = sys_.g();
  const double hl = left_(0), ul = left_(1), hr = right_(0), ur = right_(1);
  const double cl = std::sqrt(g * hl);
  const double cr = std::sqrt(g * hr);
  PrimitiveVector out(2);

  auto left_fan = [&](double x) {
    const double c = (ul + 2.0 * cl - x) / 3.0;
    out << c * c / g, (ul + 2.0 * cl + 2.0 * x) / 3.0;
    return out;
  };
  auto right_fan = [&](double x) {
    const double c = (-ur + 2.0 * cr + x) / 3.0;
    out << c * c / g, (ur - 2.0 * cr + 2.0 * x) / 3.0;
    return out;
  };

  if (vacuum_) {
    if (s <= left_speeds_.first) return left_;
    if (s >= right_speeds_.first) return right_;
    if (s < left_speeds_.second) return left_fan(s);
    if (s > right_speeds_.second) return right_fan(s);
    out << 0.0, 0.0;
    return out;
  }
  if (s <= u_star_) {
    if (left_kind_ == WaveKind::shock) {
      if (s < left_speeds_.first) return left_;
    } else {
      if (s <= left_speeds_.first) return left_;
      if (s < left_speeds_.second) return left_fan(s);
    }
  } else {
    if (right_kind_ == WaveKind::shock) {
      if (s > right_speeds_.first) return right_;
    } else {
      if (s >= right_speeds_.first) return right_;
      if (s > right_speeds_.second) return right_fan(s);
    }
  }
  out << star_, u_star_;
  return out;
}

RiemannSolution RiemannSolution::euler(const PrimitiveVector& left, const PrimitiveVector& right,
                                       double gamma) {
  RiemannSolution rs(System::euler(gamma));
  rs.left_ = left;
  rs.right_ = right;
  const double rl = left(0), ul = left(1), pl = left(2);
  const double rr = right(0), ur = right(1), pr = right(2);
  if (!(rl > 0.0 && rr > 0.0 && pl > 0.0 && pr > 0.0)) {
    throw DomainError("Euler Riemann: density and pressure must be positive");
  }
  const double gm = gamma;
  const double cl = std::sqrt(gm * pl / rl);
  const double cr = std::sqrt(gm * pr / rr);
  const double du = ur - ul;

  // Two rarefactions reaching zero pressure: the critical value of du.
  const double du_vacuum = 2.0 * (cl + cr) / (gm - 1.0);
  if (du >= du_vacuum * (1.0 - 1e-14)) {
    rs.vacuum_ = true;
    rs.left_speeds_ = {ul - cl, ul + 2.0 * cl / (gm - 1.0)};
    rs.right_speeds_ = {ur + cr, ur - 2.0 * cr / (gm - 1.0)};
    return rs;
  }

  auto side = [gm](double p, double rk, double pk, double ck) {
    if (p > pk) {
      const double a = 2.0 / ((gm + 1.0) * rk);
      const double b = (gm - 1.0) / (gm + 1.0) * pk;
      return (p - pk) * std::sqrt(a / (p + b));
    }
    return 2.0 * ck / (gm - 1.0) * (std::pow(p / pk, (gm - 1.0) / (2.0 * gm)) - 1.0);
  };
  auto dside = [gm](double p, double rk, double pk, double ck) {
    if (p > pk) {
      const double a = 2.0 / ((gm + 1.0) * rk);
      const double b = (gm - 1.0) / (gm + 1.0) * pk;
      return std::sqrt(a / (b + p)) * (1.0 - 0.5 * (p - pk) / (b + p));
    }
    return std::pow(p / pk, -(gm + 1.0) / (2.0 * gm)) / (rk * ck);
  };
  auto f = [&](double p) { return side(p, rl, pl, cl) + side(p, rr, pr, cr) + du; };
  auto df = [&](double p) { return dside(p, rl, pl, cl) + dside(p, rr, pr, cr); };

  const double pvrs = 0.5 * (pl + pr) - 0.125 * du * (rl + rr) * (cl + cr);
  const double guess = std::max(pvrs, 1e-6 * std::min(pl, pr));
  const double ps = star_root(f, df, guess, {1e-14, 10.0 * std::max(pl, pr)}, "Euler Riemann");
  rs.star_ = ps;
  rs.u_star_ = 0.5 * (ul + ur) + 0.5 * (side(ps, rr, pr, cr) - side(ps, rl, pl, cl));

  const double g6 = (gm - 1.0) / (gm + 1.0);
  if (ps > pl) {
    rs.left_kind_ = WaveKind::shock;
    rs.rho_star_left_ = rl * (ps / pl + g6) / (g6 * ps / pl + 1.0);
    const double s = ul - cl * std::sqrt((gm + 1.0) / (2.0 * gm) * ps / pl + (gm - 1.0) / (2.0 * gm));
    rs.left_speeds_ = {s, s};
  } else {
    rs.rho_star_left_ = rl * std::pow(ps / pl, 1.0 / gm);
    const double cs = cl * std::pow(ps / pl, (gm - 1.0) / (2.0 * gm));
    rs.left_speeds_ = {ul - cl, rs.u_star_ - cs};
  }
  if (ps > pr) {
    rs.right_kind_ = WaveKind::shock;
    rs.rho_star_right_ = rr * (ps / pr + g6) / (g6 * ps / pr + 1.0);
    const double s = ur + cr * std::sqrt((gm + 1.0) / (2.0 * gm) * ps / pr + (gm - 1.0) / (2.0 * gm));
    rs.right_speeds_ = {s, s};
  } else {
    rs.rho_star_right_ = rr * std::pow(ps / pr, 1.0 / gm);
    const double cs = cr * std::pow(ps / pr, (gm - 1.0) / (2.0 * gm));
    rs.right_speeds_ = {ur + cr, rs.u_star_ + cs};
  }
  return rs;
}

PrimitiveVector RiemannSolution::sample_euler(double s) const {
  const double gm = sys_.gamma();
  const double rl = left_(0), ul = left_(1), pl = left_(2);
  const double rr = right_(0), ur = right_(1), pr = right_(2);
  const double cl = std::sqrt(gm * pl / rl);
  const double cr = std::sqrt(gm * pr / rr);
  PrimitiveVector out(3);

  auto left_fan = [&](double x) {
    const double c = 2.0 / (gm + 1.0) * (cl + 0.5 * (gm - 1.0) * (ul - x));
    const double ratio = c / cl;
    out << rl * std::pow(ratio, 2.0 / (gm - 1.0)), 2.0 / (gm + 1.0) * (cl + 0.5 * (gm - 1.0) * ul + x),
        pl * std::pow(ratio, 2.0 * gm / (gm - 1.0));
    return out;
  };
  auto right_fan = [&](double x) {
    const double c = 2.0 / (gm + 1.0) * (cr - 0.5 * (gm - 1.0) * (ur - x));
    const double ratio = c / cr;
    out << rr * std::pow(ratio, 2.0 / (gm - 1.0)), 2.0 / (gm + 1.0) * (-cr + 0.5 * (gm - 1.0) * ur + x),
        pr * std::pow(ratio, 2.0 * gm / (gm - 1.0));
    return out;
  };

  if (vacuum_) {
    if (s <= left_speeds_.first) return left_;
    if (s >= right_speeds_.first) return right_;
    if (s < left_speeds_.second) return left_fan(s);
    if (s > right_speeds_.second) return right_fan(s);
    out << 0.0, 0.0, 0.0;
    return out;
  }
  if (s <= u_star_) {
    if (left_kind_ == WaveKind::shock) {
      if (s < left_speeds_.first) return left_;
    } else {
      if (s <= left_speeds_.first) return left_;
      if (s < left_speeds_.second) return left_fan(s);
    }
    out << rho_star_left_, u_star_, star_;
    return out;
  }
  if (right_kind_ == WaveKind::shock) {
    if (s > right_speeds_.first) return right_;
  } else {
    if (s >= right_speeds_.first) return right_;
    if (s > right_speeds_.second) return right_fan(s);
  }
  out << rho_star_right_, u_star_, star_;
  return out;
}

PrimitiveVector RiemannSolution::sample_primitive(double s) const {
  if (sys_.equation() == Equation::shallow_water) return sample_shallow_water(s);
  return sample_euler(s);
}

double ManufacturedShallowWater::height(double t, double x) const {
  return 1.0 + 0.5 * std::sin(kPi * (x - t));
}

double ManufacturedShallowWater::velocity(double t, double x) const {
  return std::cos(2.0 * kPi * (x - 2.0 * t));
}

StateVector ManufacturedShallowWater::conservative(double t, double x) const {
  const double h = height(t, x);
  StateVector q(2);
  q << h, h * velocity(t, x);
  return q;
}

StateVector ManufacturedShallowWater::source(double t, double x) const {
  const double h = height(t, x);
  const double u = velocity(t, x);
  const double h_x = 0.5 * kPi * std::cos(kPi * (x - t));
  const double h_t = -h_x;
  const double u_x = -2.0 * kPi * std::sin(2.0 * kPi * (x - 2.0 * t));
  const double u_t = -2.0 * u_x;
  StateVector s(2);
  s << h_t + h_x * u + h * u_x,
      h_t * u + h * u_t + h_x * u * u + 2.0 * h * u * u_x + g_ * h * h_x;
  return s;
}

StateVector euler_advection_exact(double t, double x, double gamma) {
  PrimitiveVector prim(3);
  prim << 1.0 + 0.5 * std::sin(3.0 * kPi * (x - 0.5 * t)), 0.5, 0.75;
  return prim_to_cons(System::euler(gamma), prim);
}

double l1_error_vs_riemann(const Solution& state, const RiemannSolution& rs, double t,
                           double x_origin) {
  if (!(t > 0.0)) throw std::invalid_argument("l1_error_vs_riemann requires t > 0");
  const auto rule = gauss_legendre(state.order());
  const Mesh& mesh = state.mesh();
  double total = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    for (int a = 0; a < rule.size(); ++a) {
      const double x = mesh.to_physical(i, rule.nodes[a]);
      const StateVector diff = state.evaluate(i, rule.nodes[a]) - rs.sample((x - x_origin) / t);
      total += 0.5 * mesh.dx() * rule.weights[a] * diff.cwiseAbs().sum();
    }
  }
  return total;
}

}  // namespace lxwdg
