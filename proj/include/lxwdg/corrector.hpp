#pragma once

#include <vector>

#include "lxwdg/mesh_state.hpp"
#include "lxwdg/models.hpp"
#include "lxwdg/predictor.hpp"
#include "lxwdg/types.hpp"

namespace lxwdg {

/// Face f sits between elements f-1 and f (f = 0..M); faces 0 and M are boundaries.
struct FaceFluxSet {
  std::vector<StateVector> high;   // time-averaged Rusanov flux of the prediction
  std::vector<StateVector> lxf;    // Lax-Friedrichs flux of the cell means
  std::vector<StateVector> diff;   // high - lxf
  std::vector<double> theta;       // blending factor in [0,1]

  int size() const { return static_cast<int>(high.size()); }
};

struct LimiterToggles {
  bool prediction = true;
  bool mean_flux = true;
  bool pointwise = true;
  bool oscillation = true;

  static LimiterToggles none() { return {false, false, false, false}; }
};

/// Per-step limiter activity.
struct LimiterCounters {
  int prediction = 0;          // elements damped by the prediction limiter
  int faces_blended = 0;       // faces with theta < 1
  int pointwise_primary = 0;   // elements damped for height/density
  int pointwise_pressure = 0;  // elements damped for pressure
  int oscillation = 0;         // elements whose coefficients the oscillation limiter changed

  LimiterCounters& operator+=(const LimiterCounters& o);
};

/// Time-averaged Rusanov flux between the traces of two predicted elements.
StateVector time_averaged_flux(const PicardOperator& op, const System& sys,
                               const SpaceTimeBlock& w_left, const SpaceTimeBlock& w_right);

/// Local Lax-Friedrichs flux between two conservative states.
StateVector lxf_flux(const System& sys, const StateVector& q_left, const StateVector& q_right);

/// Flux-blending factors keeping the updated means admissible. Needs
/// faces.diff filled; returns one theta per face.
std::vector<double> blend_thetas(const System& sys, const std::vector<StateVector>& q_lxf,
                                 const FaceFluxSet& faces, double nu, double eps);

/// Q_lxf_i - nu (theta_{i+1} dF_{i+1} - theta_i dF_i).
std::vector<StateVector> update_means(const std::vector<StateVector>& q_lxf,
                                      const FaceFluxSet& faces, double nu);

/// Rows 2..MC of the corrected block (row 1 copied from q_old). Always uses
/// the unblended high-order face fluxes.
CoeffBlock update_high_modes(const PicardOperator& op, const System& sys, const CoeffBlock& q_old,
                             const SpaceTimeBlock& w, const StateVector& flux_left,
                             const StateVector& flux_right, double nu);

/// Space-time quadrature of a conservative source against Phi_k over one
/// element and one step: (dt/4) sum_a sum_b w_a w_b Phi_k(xi_b) s(t_a, x_b).
CoeffBlock source_increment(const PicardOperator& op, int m_eqn, const SourceFunction& source,
                            const SlabGeometry& slab);

struct PointwiseLimitResult {
  double theta_primary = 1.0;
  double theta_pressure = 1.0;
};

/// Scales high modes so height/density (and Euler pressure) are >= eps at the
/// spatial positivity points. Throws LimiterFailure on an inadmissible mean.
PointwiseLimitResult zhang_shu_limit(const BasisTables& tables, const System& sys,
                                     CoeffBlock& q, double eps);

double minmod3(double a, double b, double c);

/// Hierarchical characteristic-variable limiter on all elements. Cell means
/// are never touched. Returns the number of elements modified.
int krivodonova_limit(const System& sys, Solution& state, BoundaryKind bc, double osc_eps);

struct StepOptions {
  double cfl = 0.1;
  double eps = 1e-14;
  double osc_eps = 1e-14;
  LimiterToggles limiters{};
  const SourceFunction* source = nullptr;
};

struct StepReport {
  TimeStepContext ctx;
  LimiterCounters counters;
  FaceFluxSet faces;
};

/// One full step from state.time() towards t_final (the step is clipped to
/// land on t_final). Throws DomainError or LimiterFailure with provenance.
StepReport step(const PicardOperator& op, const System& sys, Solution& state, BoundaryKind bc,
                double t_final, const StepOptions& options);

/// Smallest mean and smallest point value (over the spatial positivity
/// points) of every positivity quantity; empty for Burgers.
struct PositivityMonitor {
  StateVector min_mean;
  StateVector min_pointwise;
};
PositivityMonitor positivity_monitor(const BasisTables& tables, const System& sys,
                                     const Solution& state);

}  // namespace lxwdg
