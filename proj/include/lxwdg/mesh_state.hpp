#pragma once

#include <functional>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "lxwdg/models.hpp"
#include "lxwdg/types.hpp"

namespace lxwdg {

/// Uniform mesh on [x_low, x_high]. Elements are 0-based in code.
struct Mesh {
  double x_low = 0.0;
  double x_high = 1.0;
  int m_elem = 1;

  Mesh() = default;
  Mesh(double lo, double hi, int n);

  double dx() const { return (x_high - x_low) / m_elem; }
  double center(int i) const { return x_low + (i + 0.5) * dx(); }
  double to_physical(int i, double xi) const { return center(i) + 0.5 * dx() * xi; }
};

enum class BoundaryKind { periodic, outflow };

std::string_view to_string(BoundaryKind bc);
BoundaryKind parse_boundary(std::string_view name);

/// Default CFL numbers by order (1..5).
double default_cfl(int order);

/// Conservative DG solution: one MC x M_eqn coefficient block per element.
class Solution {
 public:
  Solution(Mesh mesh, int order, int m_eqn, double t = 0.0);

  const Mesh& mesh() const { return mesh_; }
  int order() const { return order_; }
  int mc() const { return order_; }
  int m_eqn() const { return m_eqn_; }
  int size() const { return mesh_.m_elem; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  CoeffBlock& operator[](int i) { return blocks_[i]; }
  const CoeffBlock& operator[](int i) const { return blocks_[i]; }

  StateVector mean(int i) const { return blocks_[i].row(0).transpose(); }
  /// q^h at canonical coordinate xi of element i.
  StateVector evaluate(int i, double xi) const;

  /// Sum over elements of dx * mean; the conserved totals.
  StateVector totals() const;

 private:
  Mesh mesh_;
  int order_;
  int m_eqn_;
  double t_;
  std::vector<CoeffBlock> blocks_;
};

using PointFunction = std::function<StateVector(double x)>;

/// L2 projection with the order-point Gauss rule.
Solution l2_project(const PointFunction& fn, const Mesh& mesh, int order, int m_eqn);

struct TimeStepContext {
  double dt = 0.0;
  double nu = 0.0;
  double cfl = 0.0;
  double max_speed = 0.0;
};

/// dt = min(cfl * dx / max|lambda|, t_remaining), speeds taken at cell means and
/// at the positivity points of every element.
TimeStepContext compute_dt(const System& sys, const Solution& state, double cfl,
                           double t_remaining);

/// Coefficients of the two ghost elements (left of 0, right of M-1).
std::pair<CoeffBlock, CoeffBlock> ghost_coefficients(const Solution& state, BoundaryKind bc);

/// Approximate relative L2 error summed over equations; the exact solution
/// is projected onto MC+1 modes with the (MO+1)-point rule.
double relative_l2_error(const Solution& state, const PointFunction& exact);

struct SampleTable {
  std::vector<double> x;
  std::vector<StateVector> q;
};

/// Samples at xi_j = -1 + (2j-1)/ppe, j = 1..ppe, in every element.
SampleTable sample_solution(const Solution& state, int points_per_element);

/// Writes `x,q1,...` (plus optional extra columns) with 17 significant digits.
void write_sample_csv(std::ostream& os, const SampleTable& table);

}  // namespace lxwdg
