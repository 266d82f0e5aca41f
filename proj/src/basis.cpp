#include "lxwdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lxwdg {

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("order must lie in 1..5, got " + std::to_string(order));
  }
}

// Classical Legendre P_n and P_n' by the three-term recurrence.
std::pair<double, double> classical_legendre(int n, double x) {
  double p_prev = 1.0;
  double p = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  // Valid away from the end points, which is all Newton ever visits.
  const double dp = n * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("gauss_legendre supports 1..8 points, got " + std::to_string(n));
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = classical_legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [p, dp] = classical_legendre(n, x);
    (void)p;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Newton runs from the right end; store ascending and symmetrize.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<double> legendre_phi(double xi, int count) {
  std::vector<double> phi(count);
  phi[0] = 1.0;
  if (count > 1) phi[1] = std::sqrt(3.0) * xi;
  for (int k = 3; k <= count; ++k) {
    const double a = std::sqrt((2.0 * k - 3.0) * (2.0 * k - 1.0)) / (k - 1.0);
    const double b = (k - 2.0) * std::sqrt(2.0 * k - 1.0) / ((k - 1.0) * std::sqrt(2.0 * k - 5.0));
    phi[k - 1] = a * xi * phi[k - 2] - b * phi[k - 3];
  }
  return phi;
}

std::vector<double> legendre_phi_deriv(double xi, int count) {
  const auto phi = legendre_phi(xi, count);
  std::vector<double> dphi(count, 0.0);
  if (count > 1) dphi[1] = std::sqrt(3.0);
  for (int k = 3; k <= count; ++k) {
    const double a = std::sqrt((2.0 * k - 3.0) * (2.0 * k - 1.0)) / (k - 1.0);
    const double b = (k - 2.0) * std::sqrt(2.0 * k - 1.0) / ((k - 1.0) * std::sqrt(2.0 * k - 5.0));
    dphi[k - 1] = a * (phi[k - 2] + xi * dphi[k - 2]) - b * dphi[k - 3];
  }
  return dphi;
}

std::vector<std::pair<int, int>> spacetime_index_map(int mc) {
  std::vector<std::pair<int, int>> map;
  map.reserve(spacetime_size(mc));
  for (int degree = 0; degree < mc; ++degree) {
    for (int lt = 1; lt <= degree + 1; ++lt) map.emplace_back(lt, degree + 2 - lt);
  }
  return map;
}

namespace {

enum class PsiKind { value, dtau, dxi };

std::vector<double> psi_impl(double tau, double xi, int order, PsiKind kind) {
  check_order(order);
  const auto pt = kind == PsiKind::dtau ? legendre_phi_deriv(tau, order) : legendre_phi(tau, order);
  const auto px = kind == PsiKind::dxi ? legendre_phi_deriv(xi, order) : legendre_phi(xi, order);
  const auto map = spacetime_index_map(order);
  std::vector<double> psi(map.size());
  for (std::size_t l = 0; l < map.size(); ++l) {
    psi[l] = pt[map[l].first - 1] * px[map[l].second - 1];
  }
  return psi;
}

}  // namespace

std::vector<double> spacetime_psi(double tau, double xi, int order) {
  return psi_impl(tau, xi, order, PsiKind::value);
}

std::vector<double> spacetime_psi_dtau(double tau, double xi, int order) {
  return psi_impl(tau, xi, order, PsiKind::dtau);
}

std::vector<double> spacetime_psi_dxi(double tau, double xi, int order) {
  return psi_impl(tau, xi, order, PsiKind::dxi);
}

PositivityPointSet positivity_points(int order) {
  check_order(order);
  PositivityPointSet set;
  const auto rule = gauss_legendre(order);
  set.spatial.push_back(-1.0);
  set.spatial.insert(set.spatial.end(), rule.nodes.begin(), rule.nodes.end());
  set.spatial.push_back(1.0);
  for (double tau : set.spatial) {
    for (double xi : set.spatial) set.spacetime.emplace_back(tau, xi);
  }
  return set;
}

namespace {

void fill_row(Matrix& m, int row, const std::vector<double>& values) {
  for (std::size_t j = 0; j < values.size(); ++j) m(row, static_cast<int>(j)) = values[j];
}

}  // namespace

BasisTables::BasisTables(int order)
    : order_(order), rule_(gauss_legendre(order)), points_(positivity_points(order)) {
  const int mo = order;
  const int mc = order;
  const int mp = spacetime_size(mc);
  const int npos = static_cast<int>(points_.spatial.size());

  phi_nodes_.resize(mo, mc);
  dphi_nodes_.resize(mo, mc);
  for (int a = 0; a < mo; ++a) {
    fill_row(phi_nodes_, a, legendre_phi(rule_.nodes[a], mc));
    fill_row(dphi_nodes_, a, legendre_phi_deriv(rule_.nodes[a], mc));
  }
  phi_pos_.resize(npos, mc);
  for (int p = 0; p < npos; ++p) fill_row(phi_pos_, p, legendre_phi(points_.spatial[p], mc));

  const auto left = legendre_phi(-1.0, mc);
  const auto right = legendre_phi(1.0, mc);
  phi_left_ = Eigen::Map<const Vector>(left.data(), mc);
  phi_right_ = Eigen::Map<const Vector>(right.data(), mc);

  psi_nodes_.resize(mo * mo, mp);
  psi_dxi_nodes_.resize(mo * mo, mp);
  for (int a = 0; a < mo; ++a) {
    for (int b = 0; b < mo; ++b) {
      fill_row(psi_nodes_, a * mo + b, spacetime_psi(rule_.nodes[a], rule_.nodes[b], order));
      fill_row(psi_dxi_nodes_, a * mo + b, spacetime_psi_dxi(rule_.nodes[a], rule_.nodes[b], order));
    }
  }
  psi_trace_left_.resize(mo, mp);
  psi_trace_right_.resize(mo, mp);
  for (int a = 0; a < mo; ++a) {
    fill_row(psi_trace_left_, a, spacetime_psi(rule_.nodes[a], -1.0, order));
    fill_row(psi_trace_right_, a, spacetime_psi(rule_.nodes[a], 1.0, order));
  }
  psi_pos_.resize(static_cast<int>(points_.spacetime.size()), mp);
  for (std::size_t p = 0; p < points_.spacetime.size(); ++p) {
    const auto [tau, xi] = points_.spacetime[p];
    fill_row(psi_pos_, static_cast<int>(p), spacetime_psi(tau, xi, order));
  }
}

}  // namespace lxwdg
