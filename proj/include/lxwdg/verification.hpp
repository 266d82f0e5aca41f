#pragma once

#include <functional>

#include "lxwdg/mesh_state.hpp"
#include "lxwdg/models.hpp"
#include "lxwdg/types.hpp"

namespace lxwdg {

/// Smooth periodic Burgers data q0 with derivative, on [x_low, x_high).
struct BurgersData {
  std::function<double(double)> q0;
  std::function<double(double)> dq0;
  double x_low = 0.0;
  double x_high = 1.0;
};

BurgersData burgers_sine();

/// 1 / max(-q0'), located by sampling and golden-section refinement.
double burgers_shock_time(const BurgersData& data);

/// Characteristic solution q0(xi) with x = xi + t q0(xi); valid before the
/// shock time only (DomainError otherwise).
double burgers_exact(const BurgersData& data, double t, double x);

enum class WaveKind { shock, rarefaction };

/// Self-similar exact Riemann solution. Primitive states are (h, u) or
/// (rho, u, p); `sample` returns conservative variables at x/t.
class RiemannSolution {
 public:
  static RiemannSolution shallow_water(const PrimitiveVector& left, const PrimitiveVector& right,
                                       double g = 1.0);
  static RiemannSolution euler(const PrimitiveVector& left, const PrimitiveVector& right,
                               double gamma = 1.4);

  const System& system() const { return sys_; }
  const PrimitiveVector& left() const { return left_; }
  const PrimitiveVector& right() const { return right_; }

  /// Star depth (shallow water) or star pressure (Euler); 0 when the waves
  /// open a vacuum.
  double star_depth_or_pressure() const { return star_; }
  double star_velocity() const { return u_star_; }
  /// Euler only: density on each side of the contact.
  double star_density_left() const { return rho_star_left_; }
  double star_density_right() const { return rho_star_right_; }
  bool vacuum() const { return vacuum_; }
  WaveKind left_wave() const { return left_kind_; }
  WaveKind right_wave() const { return right_kind_; }

  /// Extreme speeds of each wave: {head, tail} for rarefactions, {s, s} for shocks.
  std::pair<double, double> left_wave_speeds() const { return left_speeds_; }
  std::pair<double, double> right_wave_speeds() const { return right_speeds_; }

  PrimitiveVector sample_primitive(double s) const;
  StateVector sample(double s) const { return prim_to_cons(sys_, sample_primitive(s)); }

 private:
  explicit RiemannSolution(System sys) : sys_(sys) {}

  PrimitiveVector sample_shallow_water(double s) const;
  PrimitiveVector sample_euler(double s) const;

  System sys_;
  PrimitiveVector left_, right_;
  double star_ = 0.0;
  double u_star_ = 0.0;
  double rho_star_left_ = 0.0;
  double rho_star_right_ = 0.0;
  bool vacuum_ = false;
  WaveKind left_kind_ = WaveKind::rarefaction;
  WaveKind right_kind_ = WaveKind::rarefaction;
  std::pair<double, double> left_speeds_{0.0, 0.0};
  std::pair<double, double> right_speeds_{0.0, 0.0};
};

/// Manufactured shallow water solution h = 1 + sin(pi(x-t))/2,
/// u = cos(2 pi (x - 2t)) and the source that makes it exact.
class ManufacturedShallowWater {
 public:
  explicit ManufacturedShallowWater(double g = 1.0) : g_(g) {}

  double g() const { return g_; }
  double height(double t, double x) const;
  double velocity(double t, double x) const;
  StateVector conservative(double t, double x) const;
  StateVector source(double t, double x) const;

 private:
  double g_;
};

/// Euler density wave rho = 1 + sin(3 pi (x - t/2))/2, u = 1/2, p = 3/4.
StateVector euler_advection_exact(double t, double x, double gamma = 1.4);

/// sum over elements and equations of (dx/2) sum_a w_a |q_h - q_exact(x_a/t)|
/// with the MO-point rule. Requires t > 0.
double l1_error_vs_riemann(const Solution& state, const RiemannSolution& rs, double t,
                           double x_origin = 0.0);

}  // namespace lxwdg
