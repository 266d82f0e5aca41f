#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lxwdg/types.hpp"

namespace lxwdg {

enum class Equation { burgers, shallow_water, euler };

std::string_view to_string(Equation eq);
Equation parse_equation(std::string_view name);

/// Divisions by h or rho below this value raise DomainError.
inline constexpr double kDivisionFloor = 1e-100;

/// Point values whose h or rho is below this fraction of the element mean
/// get a bounded velocity (see cons_to_prim_bounded).
inline constexpr double kVelocityFloorRatio = 1e-3;

/// An equation system and its constants. Immutable value type.
class System {
 public:
  static System burgers();
  static System shallow_water(double g = 1.0);
  static System euler(double gamma = 1.4);

  Equation equation() const { return equation_; }
  int m_eqn() const { return m_eqn_; }
  double g() const { return g_; }
  double gamma() const { return gamma_; }

  /// 0-based primitive indices that must stay positive (empty for Burgers).
  const std::vector<int>& positivity_indices() const { return positivity_indices_; }

  /// Human-readable names used in error provenance and CSV metadata.
  std::string_view conservative_name(int k) const;
  std::string_view primitive_name(int k) const;

 private:
  System(Equation eq, int m_eqn, double g, double gamma, std::vector<int> pos);

  Equation equation_;
  int m_eqn_;
  double g_;
  double gamma_;
  std::vector<int> positivity_indices_;
};

StateVector flux(const System& sys, const StateVector& q);
/// f(prim_to_cons(alpha)) without the round trip.
StateVector flux_from_primitive(const System& sys, const PrimitiveVector& alpha);

double spectral_radius(const System& sys, const StateVector& q);
double spectral_radius_primitive(const System& sys, const PrimitiveVector& alpha);

PrimitiveVector cons_to_prim(const System& sys, const StateVector& q);
/// cons_to_prim with the velocity 2 d m / (d^2 + max(d^2, floor^2)), where d
/// is h or rho; identical to cons_to_prim wherever d >= floor.
PrimitiveVector cons_to_prim_bounded(const System& sys, const StateVector& q, double floor);
StateVector prim_to_cons(const System& sys, const PrimitiveVector& alpha);

/// Matrix B(alpha) of the quasilinear primitive system alpha_t + B alpha_x = 0.
SmallMatrix primitive_matrix(const System& sys, const PrimitiveVector& alpha);
/// Flux Jacobian A(q) = df/dq.
SmallMatrix flux_jacobian(const System& sys, const StateVector& q);

/// Solves (dq/dalpha) * rate = source for the primitive rate of change.
PrimitiveVector primitive_rate(const System& sys, const PrimitiveVector& alpha,
                               const StateVector& source);

SmallMatrix right_eigenvectors(const System& sys, const StateVector& q);
SmallMatrix left_eigenvectors(const System& sys, const StateVector& q);

/// Values that must stay positive: [] (Burgers), [h] (shallow water) or
/// [rho, p] (Euler). Total: nonpositive density yields p = -inf, not an error.
StateVector pointwise_positivity_values(const System& sys, const StateVector& q);

}  // namespace lxwdg
