#include "lxwdg/mesh_state.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lxwdg/basis.hpp"

namespace lxwdg {

Mesh::Mesh(double lo, double hi, int n) : x_low(lo), x_high(hi), m_elem(n) {
  if (!(hi > lo)) throw std::invalid_argument("mesh requires x_high > x_low");
  if (n < 1) throw std::invalid_argument("mesh requires at least one element");
}

std::string_view to_string(BoundaryKind bc) {
  return bc == BoundaryKind::periodic ? "periodic" : "outflow";
}

BoundaryKind parse_boundary(std::string_view name) {
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "outflow") return BoundaryKind::outflow;
  throw ConfigError("unknown boundary condition '" + std::string(name) + "'");
}

double default_cfl(int order) {
  static constexpr double table[] = {0.90, 0.30, 0.14, 0.10, 0.06};
  if (order < 1 || order > kMaxOrder) throw std::invalid_argument("order must lie in 1..5");
  return table[order - 1];
}

Solution::Solution(Mesh mesh, int order, int m_eqn, double t)
    : mesh_(mesh), order_(order), m_eqn_(m_eqn), t_(t),
      blocks_(mesh.m_elem, CoeffBlock::Zero(order, m_eqn)) {}

StateVector Solution::evaluate(int i, double xi) const {
  const auto phi = legendre_phi(xi, order_);
  StateVector q = StateVector::Zero(m_eqn_);
  for (int k = 0; k < order_; ++k) q += phi[k] * blocks_[i].row(k).transpose();
  return q;
}

StateVector Solution::totals() const {
  StateVector sum = StateVector::Zero(m_eqn_);
  for (const auto& b : blocks_) sum += b.row(0).transpose();
  return sum * mesh_.dx();
}

Solution l2_project(const PointFunction& fn, const Mesh& mesh, int order, int m_eqn) {
  const auto rule = gauss_legendre(order);
  Solution sol(mesh, order, m_eqn);
  for (int i = 0; i < mesh.m_elem; ++i) {
    CoeffBlock block = CoeffBlock::Zero(order, m_eqn);
    for (int a = 0; a < rule.size(); ++a) {
      const auto phi = legendre_phi(rule.nodes[a], order);
      const StateVector q = fn(mesh.to_physical(i, rule.nodes[a]));
      for (int k = 0; k < order; ++k) block.row(k) += 0.5 * rule.weights[a] * phi[k] * q.transpose();
    }
    sol[i] = block;
  }
  return sol;
}

TimeStepContext compute_dt(const System& sys, const Solution& state, double cfl,
                           double t_remaining) {
  double max_speed = 0.0;
  const auto points = positivity_points(state.order()).spatial;
  for (int i = 0; i < state.size(); ++i) {
    const StateVector mean = state.mean(i);
    max_speed = std::max(max_speed, spectral_radius(sys, mean));
    const double floor = kVelocityFloorRatio * mean(0);
    for (double xi : points) {
      const StateVector q = state.evaluate(i, xi);
      const StateVector pos = pointwise_positivity_values(sys, q);
      if (pos.size() > 0 && !(pos.minCoeff() > 0.0)) continue;
      max_speed = std::max(max_speed, spectral_radius_primitive(sys, cons_to_prim_bounded(sys, q, floor)));
    }
  }
  TimeStepContext ctx;
  ctx.max_speed = max_speed;
  const double dx = state.mesh().dx();
  ctx.dt = max_speed > 0.0 ? std::min(cfl * dx / max_speed, t_remaining) : t_remaining;
  ctx.nu = ctx.dt / dx;
  ctx.cfl = ctx.nu * max_speed;
  return ctx;
}

std::pair<CoeffBlock, CoeffBlock> ghost_coefficients(const Solution& state, BoundaryKind bc) {
  const int last = state.size() - 1;
  if (bc == BoundaryKind::periodic) return {state[last], state[0]};
  return {state[0], state[last]};
}

double relative_l2_error(const Solution& state, const PointFunction& exact) {
  const int mc = state.mc();
  const int m_eqn = state.m_eqn();
  const auto rule = gauss_legendre(state.order() + 1);
  const Mesh& mesh = state.mesh();

  Vector num = Vector::Zero(m_eqn);
  Vector den = Vector::Zero(m_eqn);
  for (int i = 0; i < mesh.m_elem; ++i) {
    Eigen::MatrixXd exact_coeffs = Eigen::MatrixXd::Zero(mc + 1, m_eqn);
    for (int a = 0; a < rule.size(); ++a) {
      const auto phi = legendre_phi(rule.nodes[a], mc + 1);
      const StateVector q = exact(mesh.to_physical(i, rule.nodes[a]));
      for (int k = 0; k <= mc; ++k) {
        exact_coeffs.row(k) += 0.5 * rule.weights[a] * phi[k] * q.transpose();
      }
    }
    for (int l = 0; l < m_eqn; ++l) {
      for (int k = 0; k < mc; ++k) {
        const double d = state[i](k, l) - exact_coeffs(k, l);
        num(l) += d * d;
      }
      num(l) += exact_coeffs(mc, l) * exact_coeffs(mc, l);
      den(l) += exact_coeffs.col(l).squaredNorm();
    }
  }
  double err = 0.0;
  for (int l = 0; l < m_eqn; ++l) {
    if (den(l) == 0.0) {
      throw std::domain_error("relative error undefined: exact solution component " +
                              std::to_string(l + 1) + " has zero norm");
    }
    err += std::sqrt(num(l) / den(l));
  }
  return err;
}

SampleTable sample_solution(const Solution& state, int points_per_element) {
  if (points_per_element < 1) throw std::invalid_argument("points_per_element must be >= 1");
  SampleTable table;
  const int n = state.size() * points_per_element;
  table.x.reserve(n);
  table.q.reserve(n);
  for (int i = 0; i < state.size(); ++i) {
    for (int j = 1; j <= points_per_element; ++j) {
      const double xi = -1.0 + (2.0 * j - 1.0) / points_per_element;
      table.x.push_back(state.mesh().to_physical(i, xi));
      table.q.push_back(state.evaluate(i, xi));
    }
  }
  return table;
}

void write_sample_csv(std::ostream& os, const SampleTable& table) {
  const int m = table.q.empty() ? 0 : static_cast<int>(table.q.front().size());
  os << "x";
  for (int k = 1; k <= m; ++k) os << ",q" << k;
  os << '\n';
  os.precision(17);
  for (std::size_t r = 0; r < table.x.size(); ++r) {
    os << table.x[r];
    for (int k = 0; k < m; ++k) os << ',' << table.q[r](k);
    os << '\n';
  }
}

}  // namespace lxwdg
