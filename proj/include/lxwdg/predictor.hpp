#pragma once

#include <functional>
#include <vector>

#include "lxwdg/basis.hpp"
#include "lxwdg/mesh_state.hpp"
#include "lxwdg/models.hpp"
#include "lxwdg/types.hpp"

namespace lxwdg {

/// Manufactured source s(t, x) in conservative variables.
using SourceFunction = std::function<StateVector(double t, double x)>;

/// Where an element's space-time slab sits; only needed when a source is registered.
struct SlabGeometry {
  double t0 = 0.0;
  double dt = 0.0;
  double x_center = 0.0;
  double dx = 1.0;
};

/// Order-dependent, solution-independent pieces of the Picard iteration.
class PicardOperator {
 public:
  explicit PicardOperator(int order);

  int order() const { return tables_.order(); }
  const BasisTables& tables() const { return tables_; }

  /// L = (1/4) int int Psi Psi_tau^T + (1/4) int Psi(-1,xi) Psi(-1,xi)^T.
  const Matrix& l_matrix() const { return l_; }
  const Matrix& l_inverse() const { return l_inv_; }

  /// MP x MO^2; column r holds (w_a w_b / 4) L^{-1} Psi(tau_a, xi_b).
  const Matrix& weighted_hat_psi() const { return hat_psi_weighted_; }
  /// MP x MC; (1/4) sum_b w_b L^{-1} Psi(-1, xi_b) Phi(xi_b)^T.
  const Matrix& initial_transfer() const { return initial_transfer_; }
  /// MP x MC; (1/4) sum_a sum_b w_a w_b Psi(tau_a, xi_b) Phi(xi_b)^T.
  const Matrix& constant_extension() const { return constant_extension_; }

 private:
  BasisTables tables_;
  Matrix l_, l_inv_, hat_psi_weighted_, initial_transfer_, constant_extension_;
};

/// Projection of the primitive variables of Q_i with the MO-point rule.
CoeffBlock primitive_initial_coefficients(const PicardOperator& op, const System& sys,
                                          const CoeffBlock& q);

/// Space-time coefficients constant in time with spatial profile A.
SpaceTimeBlock initial_guess(const PicardOperator& op, const CoeffBlock& a);

/// One Picard sweep. `source` may be null.
SpaceTimeBlock picard_iterate(const PicardOperator& op, const System& sys,
                              const SpaceTimeBlock& w, const CoeffBlock& a, double nu,
                              const SourceFunction* source = nullptr,
                              const SlabGeometry& slab = {});

/// Scales all non-constant space-time modes so every positivity component is
/// >= eps at the space-time positivity points. Returns the damping factor.
double limit_prediction(const PicardOperator& op, const System& sys, SpaceTimeBlock& w,
                        double eps);

/// Evaluates the predicted primitive state at (tau, xi).
PrimitiveVector evaluate_prediction(const SpaceTimeBlock& w, int order, double tau, double xi);

struct PredictionStats {
  int elements_limited = 0;  // elements where the limiter engaged after any sweep
};

/// Element-local prediction for every element: projection, constant-in-time
/// guess, then MO Picard sweeps, each followed by the prediction limiter.
std::vector<SpaceTimeBlock> predict(const PicardOperator& op, const System& sys,
                                    const Solution& state, double dt, double eps,
                                    bool limit, PredictionStats* stats = nullptr,
                                    const SourceFunction* source = nullptr);

}  // namespace lxwdg
