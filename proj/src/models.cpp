#include "lxwdg/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lxwdg {

namespace {

[[noreturn]] void domain_error(const char* what, const char* component, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": " << component << " = " << value;
  throw DomainError(os.str());
}

double checked_divisor(double value, const char* component) {
  if (!(value >= kDivisionFloor)) domain_error("nonpositive divisor", component, value);
  return value;
}

double checked_radicand(double value, const char* component) {
  if (!(value >= 0.0)) domain_error("negative radicand", component, value);
  return value;
}

double euler_pressure(double gamma, const StateVector& q) {
  const double rho = checked_divisor(q(0), "rho");
  return (gamma - 1.0) * (q(2) - 0.5 * q(1) * q(1) / rho);
}

StateVector make(double a) {
  StateVector v(1);
  v << a;
  return v;
}
StateVector make(double a, double b) {
  StateVector v(2);
  v << a, b;
  return v;
}
StateVector make(double a, double b, double c) {
  StateVector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

std::string_view to_string(Equation eq) {
  switch (eq) {
    case Equation::burgers: return "burgers";
    case Equation::shallow_water: return "shallow_water";
    case Equation::euler: return "euler";
  }
  return "?";
}

Equation parse_equation(std::string_view name) {
  if (name == "burgers") return Equation::burgers;
  if (name == "shallow_water") return Equation::shallow_water;
  if (name == "euler") return Equation::euler;
  throw ConfigError("unknown equation '" + std::string(name) + "'");
}

System::System(Equation eq, int m_eqn, double g, double gamma, std::vector<int> pos)
    : equation_(eq), m_eqn_(m_eqn), g_(g), gamma_(gamma), positivity_indices_(std::move(pos)) {}

System System::burgers() { return System(Equation::burgers, 1, 0.0, 0.0, {}); }
System System::shallow_water(double g) { return System(Equation::shallow_water, 2, g, 0.0, {0}); }
System System::euler(double gamma) { return System(Equation::euler, 3, 0.0, gamma, {0, 2}); }

std::string_view System::conservative_name(int k) const {
  switch (equation_) {
    case Equation::burgers: return "q";
    case Equation::shallow_water: return k == 0 ? "h" : "hu";
    case Equation::euler: return k == 0 ? "rho" : (k == 1 ? "rho*u" : "energy");
  }
  return "?";
}

std::string_view System::primitive_name(int k) const {
  switch (equation_) {
    case Equation::burgers: return "q";
    case Equation::shallow_water: return k == 0 ? "h" : "u";
    case Equation::euler: return k == 0 ? "rho" : (k == 1 ? "u" : "p");
  }
  return "?";
}

StateVector flux(const System& sys, const StateVector& q) {
  switch (sys.equation()) {
    case Equation::burgers:
      return make(0.5 * q(0) * q(0));
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      const double u = q(1) / h;
      return make(q(1), q(1) * u + 0.5 * sys.g() * h * h);
    }
    case Equation::euler: {
      const double p = euler_pressure(sys.gamma(), q);
      const double u = q(1) / q(0);
      return make(q(1), q(1) * u + p, u * (q(2) + p));
    }
  }
  return {};
}

StateVector flux_from_primitive(const System& sys, const PrimitiveVector& a) {
  switch (sys.equation()) {
    case Equation::burgers:
      return make(0.5 * a(0) * a(0));
    case Equation::shallow_water: {
      const double hu = a(0) * a(1);
      return make(hu, hu * a(1) + 0.5 * sys.g() * a(0) * a(0));
    }
    case Equation::euler: {
      const double m = a(0) * a(1);
      const double energy = a(2) / (sys.gamma() - 1.0) + 0.5 * m * a(1);
      return make(m, m * a(1) + a(2), a(1) * (energy + a(2)));
    }
  }
  return {};
}

double spectral_radius(const System& sys, const StateVector& q) {
  switch (sys.equation()) {
    case Equation::burgers:
      return std::abs(q(0));
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      return std::abs(q(1) / h) + std::sqrt(checked_radicand(sys.g() * h, "g*h"));
    }
    case Equation::euler: {
      const double p = euler_pressure(sys.gamma(), q);
      return std::abs(q(1) / q(0)) + std::sqrt(checked_radicand(sys.gamma() * p / q(0), "p"));
    }
  }
  return 0.0;
}

double spectral_radius_primitive(const System& sys, const PrimitiveVector& a) {
  switch (sys.equation()) {
    case Equation::burgers:
      return std::abs(a(0));
    case Equation::shallow_water:
      return std::abs(a(1)) + std::sqrt(checked_radicand(sys.g() * a(0), "h"));
    case Equation::euler: {
      const double rho = checked_divisor(a(0), "rho");
      return std::abs(a(1)) + std::sqrt(checked_radicand(sys.gamma() * a(2) / rho, "p"));
    }
  }
  return 0.0;
}

PrimitiveVector cons_to_prim(const System& sys, const StateVector& q) {
  switch (sys.equation()) {
    case Equation::burgers:
      return q;
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      return make(h, q(1) / h);
    }
    case Equation::euler: {
      const double p = euler_pressure(sys.gamma(), q);
      return make(q(0), q(1) / q(0), p);
    }
  }
  return {};
}

PrimitiveVector cons_to_prim_bounded(const System& sys, const StateVector& q, double floor) {
  if (sys.equation() == Equation::burgers) return q;
  const double d = checked_divisor(q(0), sys.equation() == Equation::euler ? "rho" : "h");
  if (d >= floor) return cons_to_prim(sys, q);
  const double u = 2.0 * d * q(1) / (d * d + floor * floor);
  if (sys.equation() == Equation::shallow_water) return make(d, u);
  return make(d, u, euler_pressure(sys.gamma(), q));
}

StateVector prim_to_cons(const System& sys, const PrimitiveVector& a) {
  switch (sys.equation()) {
    case Equation::burgers:
      return a;
    case Equation::shallow_water:
      return make(a(0), a(0) * a(1));
    case Equation::euler: {
      const double m = a(0) * a(1);
      return make(a(0), m, a(2) / (sys.gamma() - 1.0) + 0.5 * m * a(1));
    }
  }
  return {};
}

SmallMatrix primitive_matrix(const System& sys, const PrimitiveVector& a) {
  SmallMatrix b = SmallMatrix::Zero(sys.m_eqn(), sys.m_eqn());
  switch (sys.equation()) {
    case Equation::burgers:
      b(0, 0) = a(0);
      break;
    case Equation::shallow_water:
      b << a(1), a(0),
           sys.g(), a(1);
      break;
    case Equation::euler: {
      const double rho = checked_divisor(a(0), "rho");
      b << a(1), rho, 0.0,
           0.0, a(1), 1.0 / rho,
           0.0, sys.gamma() * a(2), a(1);
      break;
    }
  }
  return b;
}

SmallMatrix flux_jacobian(const System& sys, const StateVector& q) {
  SmallMatrix a = SmallMatrix::Zero(sys.m_eqn(), sys.m_eqn());
  switch (sys.equation()) {
    case Equation::burgers:
      a(0, 0) = q(0);
      break;
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      const double u = q(1) / h;
      a << 0.0, 1.0,
           sys.g() * h - u * u, 2.0 * u;
      break;
    }
    case Equation::euler: {
      const double gm = sys.gamma();
      const double p = euler_pressure(gm, q);
      const double rho = q(0);
      const double u = q(1) / rho;
      a << 0.0, 1.0, 0.0,
           0.5 * (gm - 3.0) * u * u, (3.0 - gm) * u, gm - 1.0,
           0.5 * u * u * u * (gm - 2.0) + gm * p * u / ((1.0 - gm) * rho),
           0.5 * u * u * (3.0 - 2.0 * gm) - gm * p / ((1.0 - gm) * rho), gm * u;
      break;
    }
  }
  return a;
}

PrimitiveVector primitive_rate(const System& sys, const PrimitiveVector& a,
                               const StateVector& s) {
  switch (sys.equation()) {
    case Equation::burgers:
      return s;
    case Equation::shallow_water: {
      const double h = checked_divisor(a(0), "h");
      return make(s(0), (s(1) - a(1) * s(0)) / h);
    }
    case Equation::euler: {
      const double rho = checked_divisor(a(0), "rho");
      const double u = a(1);
      const double du = (s(1) - u * s(0)) / rho;
      const double dp = (sys.gamma() - 1.0) * (s(2) - 0.5 * u * u * s(0) - rho * u * du);
      return make(s(0), du, dp);
    }
  }
  return {};
}

SmallMatrix right_eigenvectors(const System& sys, const StateVector& q) {
  SmallMatrix r(sys.m_eqn(), sys.m_eqn());
  switch (sys.equation()) {
    case Equation::burgers:
      r(0, 0) = 1.0;
      break;
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      const double u = q(1) / h;
      const double c = std::sqrt(sys.g() * h);
      r << 1.0, 1.0,
           u - c, u + c;
      break;
    }
    case Equation::euler: {
      const double gm = sys.gamma();
      const double p = euler_pressure(gm, q);
      if (!(p > 0.0)) domain_error("nonpositive pressure", "p", p);
      const double rho = q(0);
      const double u = q(1) / rho;
      const double c = std::sqrt(gm * p / rho);
      const double h0 = p * gm / ((gm - 1.0) * rho);
      r << 1.0, 1.0, 1.0,
           u - c, u, u + c,
           h0 + 0.5 * u * (u - 2.0 * c), 0.5 * u * u, h0 + 0.5 * u * (u + 2.0 * c);
      break;
    }
  }
  return r;
}

SmallMatrix left_eigenvectors(const System& sys, const StateVector& q) {
  SmallMatrix l(sys.m_eqn(), sys.m_eqn());
  switch (sys.equation()) {
    case Equation::burgers:
      l(0, 0) = 1.0;
      break;
    case Equation::shallow_water: {
      const double h = checked_divisor(q(0), "h");
      const double u = q(1) / h;
      const double c = std::sqrt(sys.g() * h);
      l << c + u, -1.0,
           c - u, 1.0;
      l /= 2.0 * c;
      break;
    }
    case Equation::euler: {
      const double gm = sys.gamma();
      const double p = euler_pressure(gm, q);
      if (!(p > 0.0)) domain_error("nonpositive pressure", "p", p);
      const double rho = q(0);
      const double u = q(1) / rho;
      const double c = std::sqrt(gm * p / rho);
      l << c * rho * u * u * (gm - 1.0) + 2.0 * gm * p * u,
           2.0 * c * rho * u * (1.0 - gm) - 2.0 * gm * p,
           2.0 * c * rho * (gm - 1.0),
           2.0 * c * ((1.0 - gm) * rho * u * u + 2.0 * gm * p),
           4.0 * c * rho * u * (gm - 1.0),
           4.0 * c * rho * (1.0 - gm),
           c * rho * u * u * (gm - 1.0) - 2.0 * p * u * gm,
           2.0 * p * gm + 2.0 * c * rho * u * (1.0 - gm),
           2.0 * c * rho * (gm - 1.0);
      l /= 4.0 * c * gm * p;
      break;
    }
  }
  return l;
}

StateVector pointwise_positivity_values(const System& sys, const StateVector& q) {
  switch (sys.equation()) {
    case Equation::burgers:
      return StateVector(0);
    case Equation::shallow_water:
      return make(q(0));
    case Equation::euler: {
      if (!(q(0) > 0.0)) return make(q(0), -std::numeric_limits<double>::infinity());
      return make(q(0), (sys.gamma() - 1.0) * (q(2) - 0.5 * q(1) * q(1) / q(0)));
    }
  }
  return {};
}

}  // namespace lxwdg
