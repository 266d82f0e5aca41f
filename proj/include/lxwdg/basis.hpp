#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lxwdg/types.hpp"

namespace lxwdg {

inline constexpr int kMaxOrder = 5;

/// Number of space-time modes for a correction basis of size `mc`.
constexpr int spacetime_size(int mc) { return mc * (mc + 1) / 2; }

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule with `n` points on [-1,1], 1 <= n <= 8.
QuadratureRule gauss_legendre(int n);

/// Orthonormal Legendre values (Phi_1..Phi_count)(xi), normalized so that
/// (1/2) * integral of Phi_i Phi_j over [-1,1] is the Kronecker delta.
std::vector<double> legendre_phi(double xi, int count);
std::vector<double> legendre_phi_deriv(double xi, int count);

/// (l_tau, l_xi) pairs, 1-based, ordered by total degree and then by
/// increasing temporal index.
std::vector<std::pair<int, int>> spacetime_index_map(int mc);

/// Psi_l(tau, xi) = Phi_{l_tau}(tau) * Phi_{l_xi}(xi) for l = 1..MP.
std::vector<double> spacetime_psi(double tau, double xi, int order);
std::vector<double> spacetime_psi_dtau(double tau, double xi, int order);
std::vector<double> spacetime_psi_dxi(double tau, double xi, int order);

struct PositivityPointSet {
  std::vector<double> spatial;                          // ascending
  std::vector<std::pair<double, double>> spacetime;     // (tau, xi)
};

/// Gauss-Legendre nodes of `order` augmented with both end points.
PositivityPointSet positivity_points(int order);

/// Dense basis tables for one order. Row-major: table[point][mode].
/// Immutable after construction.
class BasisTables {
 public:
  explicit BasisTables(int order);

  int order() const { return order_; }
  int mc() const { return order_; }
  int mp() const { return spacetime_size(order_); }

  const QuadratureRule& rule() const { return rule_; }
  const PositivityPointSet& points() const { return points_; }

  // Spatial basis at the MO Gauss nodes.
  const Matrix& phi_at_nodes() const { return phi_nodes_; }         // MO x MC
  const Matrix& dphi_at_nodes() const { return dphi_nodes_; }       // MO x MC
  // Spatial basis at the positivity points (end points included).
  const Matrix& phi_at_positivity() const { return phi_pos_; }      // (MO+2) x MC
  const Vector& phi_left() const { return phi_left_; }              // Phi(-1)
  const Vector& phi_right() const { return phi_right_; }            // Phi(+1)

  // Space-time basis at interior nodes; row index = a_tau * MO + b_xi.
  const Matrix& psi_at_nodes() const { return psi_nodes_; }         // MO^2 x MP
  const Matrix& psi_dxi_at_nodes() const { return psi_dxi_nodes_; } // MO^2 x MP
  // Traces at the temporal nodes: xi = -1 and xi = +1.
  const Matrix& psi_trace_left() const { return psi_trace_left_; }   // MO x MP
  const Matrix& psi_trace_right() const { return psi_trace_right_; } // MO x MP
  // Space-time basis at the (MO+2)^2 positivity points.
  const Matrix& psi_at_positivity() const { return psi_pos_; }

 private:
  int order_;
  QuadratureRule rule_;
  PositivityPointSet points_;
  Matrix phi_nodes_, dphi_nodes_, phi_pos_;
  Vector phi_left_, phi_right_;
  Matrix psi_nodes_, psi_dxi_nodes_, psi_trace_left_, psi_trace_right_, psi_pos_;
};

}  // namespace lxwdg
