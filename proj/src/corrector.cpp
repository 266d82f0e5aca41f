#include "lxwdg/corrector.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace lxwdg {

namespace {

// Floors are raised by a few ulps of the magnitudes involved so that the
// re-evaluated quantity does not land a rounding error below eps.
double rounded_floor(double eps, double magnitude) {
  return eps + 16.0 * DBL_EPSILON * std::abs(magnitude);
}

double euler_pressure_total(double gamma, const StateVector& q) {
  if (!(q(0) > 0.0)) return -std::numeric_limits<double>::infinity();
  return (gamma - 1.0) * (q(2) - 0.5 * q(1) * q(1) / q(0));
}

std::string with_index(const char* where, int index, const char* what) {
  std::ostringstream os;
  os << where << ' ' << index << ": " << what;
  return os.str();
}

}  // namespace

LimiterCounters& LimiterCounters::operator+=(const LimiterCounters& o) {
  prediction += o.prediction;
  faces_blended += o.faces_blended;
  pointwise_primary += o.pointwise_primary;
  pointwise_pressure += o.pointwise_pressure;
  oscillation += o.oscillation;
  return *this;
}

StateVector time_averaged_flux(const PicardOperator& op, const System& sys,
                               const SpaceTimeBlock& w_left, const SpaceTimeBlock& w_right) {
  const auto& t = op.tables();
  const auto& rule = t.rule();
  StateVector total = StateVector::Zero(sys.m_eqn());
  for (int a = 0; a < rule.size(); ++a) {
    const PrimitiveVector al = (t.psi_trace_right().row(a) * w_left).transpose();
    const PrimitiveVector ar = (t.psi_trace_left().row(a) * w_right).transpose();
    const double speed =
        std::max(spectral_radius_primitive(sys, al), spectral_radius_primitive(sys, ar));
    const StateVector f = 0.5 * (flux_from_primitive(sys, ar) + flux_from_primitive(sys, al)) -
                          0.5 * speed * (prim_to_cons(sys, ar) - prim_to_cons(sys, al));
    total += 0.5 * rule.weights[a] * f;
  }
  return total;
}

StateVector lxf_flux(const System& sys, const StateVector& q_left, const StateVector& q_right) {
  const double speed = std::max(spectral_radius(sys, q_left), spectral_radius(sys, q_right));
  return 0.5 * (flux(sys, q_right) + flux(sys, q_left)) - 0.5 * speed * (q_right - q_left);
}

std::vector<double> blend_thetas(const System& sys, const std::vector<StateVector>& q_lxf,
                                 const FaceFluxSet& faces, double nu, double eps) {
  const int m_elem = static_cast<int>(q_lxf.size());
  std::vector<double> theta(m_elem + 1, 1.0);
  if (sys.positivity_indices().empty()) return theta;
  const bool euler = sys.equation() == Equation::euler;

  for (int i = 0; i < m_elem; ++i) {
    const StateVector& qlxf = q_lxf[i];
    const StateVector& df_left = faces.diff[i];
    const StateVector& df_right = faces.diff[i + 1];

    // Part I: height or density. A face drains the element when it
    // carries more mass out than the Lax-Friedrichs flux does.
    const double dl = df_left(0);
    const double dr = df_right(0);
    const double floor1 = rounded_floor(eps, std::abs(qlxf(0)) + nu * (std::abs(dl) + std::abs(dr)));
    const double gamma_budget = (qlxf(0) - floor1) / nu;
    double lam_left = 1.0;
    double lam_right = 1.0;
    const bool drains_left = dl < 0.0;
    const bool drains_right = dr > 0.0;
    if (drains_left && drains_right) {
      lam_left = lam_right = std::min(1.0, gamma_budget / (std::abs(dl) + std::abs(dr)));
    } else if (drains_left) {
      lam_left = std::min(1.0, gamma_budget / std::abs(dl));
    } else if (drains_right) {
      lam_right = std::min(1.0, gamma_budget / std::abs(dr));
    }
    lam_left = std::max(0.0, lam_left);
    lam_right = std::max(0.0, lam_right);

    // Part II: pressure, from the three corner states of the blend.
    if (euler) {
      const double gm = sys.gamma();
      const double p_lxf = euler_pressure_total(gm, qlxf);
      const double magnitude =
          (gm - 1.0) * (std::abs(qlxf(2)) + nu * (df_left.cwiseAbs().sum() + df_right.cwiseAbs().sum()));
      const double floor_p = rounded_floor(eps, magnitude);
      auto corner_factor = [&](const StateVector& q_star) {
        const double p_star = euler_pressure_total(gm, q_star);
        if (p_star >= floor_p) return 1.0;
        if (!(p_lxf > floor_p)) return 0.0;
        return std::clamp((p_lxf - floor_p) / (p_lxf - p_star), 0.0, 1.0);
      };
      const StateVector both = qlxf - nu * (lam_right * df_right - lam_left * df_left);
      const StateVector left_only = qlxf + nu * lam_left * df_left;
      const StateVector right_only = qlxf - nu * lam_right * df_right;
      const double mu =
          std::min({corner_factor(both), corner_factor(left_only), corner_factor(right_only)});
      lam_left *= mu;
      lam_right *= mu;
    }

    theta[i] = std::min(theta[i], lam_left);
    theta[i + 1] = std::min(theta[i + 1], lam_right);
  }
  return theta;
}

std::vector<StateVector> update_means(const std::vector<StateVector>& q_lxf,
                                      const FaceFluxSet& faces, double nu) {
  std::vector<StateVector> out(q_lxf.size());
  for (std::size_t i = 0; i < q_lxf.size(); ++i) {
    out[i] = q_lxf[i] - nu * (faces.theta[i + 1] * faces.diff[i + 1] - faces.theta[i] * faces.diff[i]);
  }
  return out;
}

CoeffBlock update_high_modes(const PicardOperator& op, const System& sys, const CoeffBlock& q_old,
                             const SpaceTimeBlock& w, const StateVector& flux_left,
                             const StateVector& flux_right, double nu) {
  const auto& t = op.tables();
  const auto& rule = t.rule();
  const int mo = t.order();
  const int mc = t.mc();
  CoeffBlock q = q_old;
  if (mc == 1) return q;

  CoeffBlock volume = CoeffBlock::Zero(mc, sys.m_eqn());
  for (int a = 0; a < mo; ++a) {
    for (int b = 0; b < mo; ++b) {
      const int r = a * mo + b;
      const PrimitiveVector alpha = (t.psi_at_nodes().row(r) * w).transpose();
      const StateVector f = flux_from_primitive(sys, alpha);
      const double wgt = 0.5 * rule.weights[a] * rule.weights[b];
      for (int k = 1; k < mc; ++k) volume.row(k) += wgt * t.dphi_at_nodes()(b, k) * f.transpose();
    }
  }
  for (int k = 1; k < mc; ++k) {
    q.row(k) += nu * volume.row(k) -
                nu * (t.phi_right()(k) * flux_right.transpose() - t.phi_left()(k) * flux_left.transpose());
  }
  return q;
}

CoeffBlock source_increment(const PicardOperator& op, int m_eqn, const SourceFunction& source,
                            const SlabGeometry& slab) {
  const auto& t = op.tables();
  const auto& rule = t.rule();
  const int mo = t.order();
  CoeffBlock inc = CoeffBlock::Zero(t.mc(), m_eqn);
  for (int a = 0; a < mo; ++a) {
    const double time = slab.t0 + 0.5 * slab.dt * (1.0 + rule.nodes[a]);
    for (int b = 0; b < mo; ++b) {
      const double x = slab.x_center + 0.5 * slab.dx * rule.nodes[b];
      const StateVector s = source(time, x);
      const double wgt = 0.25 * slab.dt * rule.weights[a] * rule.weights[b];
      for (int k = 0; k < t.mc(); ++k) inc.row(k) += wgt * t.phi_at_nodes()(b, k) * s.transpose();
    }
  }
  return inc;
}

PointwiseLimitResult zhang_shu_limit(const BasisTables& tables, const System& sys,
                                     CoeffBlock& q, double eps) {
  PointwiseLimitResult result;
  if (sys.positivity_indices().empty() || q.rows() < 2) return result;
  const Matrix& phi = tables.phi_at_positivity();
  const int npts = static_cast<int>(phi.rows());

  // Part I: height or density.
  const double mean = q(0, 0);
  if (!(mean >= eps)) {
    std::ostringstream os;
    os.precision(17);
    os << "pointwise limiter: mean " << sys.conservative_name(0) << " = " << mean << " < eps";
    throw LimiterFailure(os.str());
  }
  double vmin = mean;
  double scale = std::abs(mean);
  for (int p = 0; p < npts; ++p) {
    const double v = phi.row(p).dot(q.col(0));
    vmin = std::min(vmin, v);
    scale = std::max(scale, std::abs(v));
  }
  if (vmin < eps && mean - vmin > 0.0) {
    const double target = rounded_floor(eps, scale);
    result.theta_primary = std::clamp((mean - target) / (mean - vmin), 0.0, 1.0);
    q.bottomRows(q.rows() - 1) *= result.theta_primary;
  }

  if (sys.equation() != Equation::euler) return result;

  // Part II: pressure, via the concavity bound between mean and point values.
  const double gm = sys.gamma();
  const StateVector qbar = q.row(0).transpose();
  const double pbar = euler_pressure_total(gm, qbar);
  if (!(pbar >= eps)) {
    std::ostringstream os;
    os.precision(17);
    os << "pointwise limiter: mean pressure = " << pbar << " < eps";
    throw LimiterFailure(os.str());
  }
  auto scan = [&](double& pmin, double& magnitude) {
    pmin = pbar;
    magnitude = std::abs(qbar(2));
    for (int p = 0; p < npts; ++p) {
      const StateVector v = (phi.row(p) * q).transpose();
      pmin = std::min(pmin, euler_pressure_total(gm, v));
      magnitude = std::max(magnitude, std::abs(v(2)) + 0.5 * v(1) * v(1) / std::max(v(0), eps));
    }
    magnitude *= (gm - 1.0);
  };
  double pmin = 0.0;
  double magnitude = 0.0;
  scan(pmin, magnitude);
  if (pmin < eps && pbar - pmin > 0.0) {
    const double target = rounded_floor(eps, magnitude);
    result.theta_pressure = std::clamp((pbar - target) / (pbar - pmin), 0.0, 1.0);
    q.bottomRows(q.rows() - 1) *= result.theta_pressure;
    scan(pmin, magnitude);
    if (pmin < eps) {
      // Only reachable through rounding; the cell mean itself is admissible.
      result.theta_pressure = 0.0;
      q.bottomRows(q.rows() - 1).setZero();
    }
  }
  return result;
}

double minmod3(double a, double b, double c) {
  if (std::min({a * b, b * c, a * c}) <= 0.0) return 0.0;
  return std::copysign(std::min({std::abs(a), std::abs(b), std::abs(c)}), a);
}

int krivodonova_limit(const System& sys, Solution& state, BoundaryKind bc, double osc_eps) {
  const int mc = state.mc();
  if (mc < 2) return 0;
  const int m_elem = state.size();
  const int m_eqn = state.m_eqn();

  // Snapshot with ghosts: index 0 and m_elem + 1 are the ghost elements.
  std::vector<CoeffBlock> q(m_elem + 2);
  for (int i = 0; i < m_elem; ++i) q[i + 1] = state[i];
  const auto [ghost_left, ghost_right] = ghost_coefficients(state, bc);
  q[0] = ghost_left;
  q[m_elem + 1] = ghost_right;

  int touched = 0;
  for (int i = 1; i <= m_elem; ++i) {
    const StateVector mean = q[i].row(0).transpose();
    SmallMatrix left, right;
    try {
      left = left_eigenvectors(sys, mean);
      right = right_eigenvectors(sys, mean);
    } catch (const DomainError& e) {
      throw DomainError(with_index("oscillation limiter, element", i - 1, e.what()));
    }
    // Row k-1 holds the characteristic coefficients of Legendre mode k+1.
    CoeffBlock c(mc - 1, m_eqn), dminus(mc - 1, m_eqn), dplus(mc - 1, m_eqn);
    for (int k = 1; k < mc; ++k) {
      c.row(k - 1) = (left * q[i].row(k).transpose()).transpose();
      dminus.row(k - 1) = (left * (q[i].row(k - 1) - q[i - 1].row(k - 1)).transpose()).transpose();
      dplus.row(k - 1) = (left * (q[i + 1].row(k - 1) - q[i].row(k - 1)).transpose()).transpose();
    }

    bool changed = false;
    for (int m = 0; m < m_eqn; ++m) {
      for (int k = mc - 1; k >= 1; --k) {
        const double a_k = std::sqrt((2.0 * k - 1.0) / (2.0 * k + 1.0));
        const double before = c(k - 1, m);
        const double after = minmod3(before, a_k * dplus(k - 1, m), a_k * dminus(k - 1, m));
        c(k - 1, m) = after;
        if (after != before) changed = true;
        const bool descend = k > 1 && (std::abs(after - before) > osc_eps || std::abs(after) <= osc_eps);
        if (!descend) break;
      }
    }
    if (!changed) continue;
    ++touched;
    for (int k = 1; k < mc; ++k) state[i - 1].row(k) = (right * c.row(k - 1).transpose()).transpose();
  }
  return touched;
}

PositivityMonitor positivity_monitor(const BasisTables& tables, const System& sys,
                                     const Solution& state) {
  const int npos = static_cast<int>(sys.positivity_indices().size());
  PositivityMonitor mon;
  mon.min_mean = StateVector::Constant(npos, std::numeric_limits<double>::infinity());
  mon.min_pointwise = mon.min_mean;
  if (npos == 0) return mon;
  const Matrix& phi = tables.phi_at_positivity();
  for (int i = 0; i < state.size(); ++i) {
    mon.min_mean = mon.min_mean.cwiseMin(pointwise_positivity_values(sys, state.mean(i)));
    for (int p = 0; p < phi.rows(); ++p) {
      const StateVector v = (phi.row(p) * state[i]).transpose();
      mon.min_pointwise = mon.min_pointwise.cwiseMin(pointwise_positivity_values(sys, v));
    }
  }
  return mon;
}

StepReport step(const PicardOperator& op, const System& sys, Solution& state, BoundaryKind bc,
                double t_final, const StepOptions& options) {
  StepReport report;
  const int m_elem = state.size();
  const Mesh& mesh = state.mesh();
  const auto& tables = op.tables();

  report.ctx = compute_dt(sys, state, options.cfl, t_final - state.time());
  const double dt = report.ctx.dt;
  const double nu = report.ctx.nu;

  // Prediction.
  PredictionStats pstats;
  const auto w = predict(op, sys, state, dt, options.eps, options.limiters.prediction, &pstats,
                         options.source);
  report.counters.prediction = pstats.elements_limited;

  // Face fluxes; ghost predictions are copies, matching the ghost coefficients.
  const bool periodic = bc == BoundaryKind::periodic;
  auto w_at = [&](int i) -> const SpaceTimeBlock& {
    if (i < 0) return periodic ? w[m_elem - 1] : w[0];
    if (i >= m_elem) return periodic ? w[0] : w[m_elem - 1];
    return w[i];
  };
  const auto [ghost_left, ghost_right] = ghost_coefficients(state, bc);
  auto mean_at = [&](int i) -> StateVector {
    if (i < 0) return ghost_left.row(0).transpose();
    if (i >= m_elem) return ghost_right.row(0).transpose();
    return state.mean(i);
  };

  FaceFluxSet& faces = report.faces;
  faces.high.resize(m_elem + 1);
  faces.lxf.resize(m_elem + 1);
  faces.diff.resize(m_elem + 1);
  for (int f = 0; f <= m_elem; ++f) {
    try {
      faces.high[f] = time_averaged_flux(op, sys, w_at(f - 1), w_at(f));
      faces.lxf[f] = lxf_flux(sys, mean_at(f - 1), mean_at(f));
    } catch (const DomainError& e) {
      throw DomainError(with_index("flux, face", f, e.what()));
    }
    faces.diff[f] = faces.high[f] - faces.lxf[f];
  }

  // Low-order provisional means, including the source's mean contribution.
  std::vector<CoeffBlock> sources;
  if (options.source != nullptr) {
    sources.resize(m_elem);
    for (int i = 0; i < m_elem; ++i) {
      sources[i] = source_increment(op, state.m_eqn(), *options.source,
                                    SlabGeometry{state.time(), dt, mesh.center(i), mesh.dx()});
    }
  }
  std::vector<StateVector> q_lxf(m_elem);
  for (int i = 0; i < m_elem; ++i) {
    q_lxf[i] = state.mean(i) - nu * (faces.lxf[i + 1] - faces.lxf[i]);
    if (!sources.empty()) q_lxf[i] += sources[i].row(0).transpose();
  }

  if (options.limiters.mean_flux) {
    faces.theta = blend_thetas(sys, q_lxf, faces, nu, options.eps);
    if (periodic) faces.theta[0] = faces.theta[m_elem] = std::min(faces.theta[0], faces.theta[m_elem]);
  } else {
    faces.theta.assign(m_elem + 1, 1.0);
  }
  for (int f = 0; f <= m_elem; ++f) {
    if (faces.theta[f] < 1.0 && !(periodic && f == m_elem)) ++report.counters.faces_blended;
  }

  // Correction.
  const auto new_means = update_means(q_lxf, faces, nu);
  Solution next(mesh, state.order(), state.m_eqn(), state.time() + dt);
  for (int i = 0; i < m_elem; ++i) {
    CoeffBlock q;
    try {
      q = update_high_modes(op, sys, state[i], w[i], faces.high[i], faces.high[i + 1], nu);
    } catch (const DomainError& e) {
      throw DomainError(with_index("correction, element", i, e.what()));
    }
    if (!sources.empty()) q.bottomRows(q.rows() - 1) += sources[i].bottomRows(q.rows() - 1);
    q.row(0) = new_means[i].transpose();
    if (!q.allFinite()) throw DomainError(with_index("correction, element", i, "non-finite coefficients"));
    next[i] = q;
  }
  if (t_final - next.time() <= 1e-14 * std::max(1.0, std::abs(t_final))) next.set_time(t_final);

  if (options.limiters.oscillation) {
    report.counters.oscillation = krivodonova_limit(sys, next, bc, options.osc_eps);
  }
  if (options.limiters.pointwise) {
    for (int i = 0; i < m_elem; ++i) {
      try {
        const auto r = zhang_shu_limit(tables, sys, next[i], options.eps);
        if (r.theta_primary < 1.0) ++report.counters.pointwise_primary;
        if (r.theta_pressure < 1.0) ++report.counters.pointwise_pressure;
      } catch (const LimiterFailure& e) {
        throw LimiterFailure(with_index("element", i, e.what()));
      }
    }
  }
  state = std::move(next);
  return report;
}

}  // namespace lxwdg
