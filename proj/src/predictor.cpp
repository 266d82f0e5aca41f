#include "lxwdg/predictor.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace lxwdg {

namespace {

using NodeValues =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 25, kMaxEqn>;

}  // namespace

PicardOperator::PicardOperator(int order) : tables_(order) {
  const int mo = order;
  const int mc = order;
  const int mp = spacetime_size(mc);
  const auto& rule = tables_.rule();

  l_ = Matrix::Zero(mp, mp);
  for (int a = 0; a < mo; ++a) {
    for (int b = 0; b < mo; ++b) {
      const auto psi = spacetime_psi(rule.nodes[a], rule.nodes[b], order);
      const auto psi_t = spacetime_psi_dtau(rule.nodes[a], rule.nodes[b], order);
      const double w = 0.25 * rule.weights[a] * rule.weights[b];
      for (int i = 0; i < mp; ++i) {
        for (int j = 0; j < mp; ++j) l_(i, j) += w * psi[i] * psi_t[j];
      }
    }
  }
  Matrix boundary_mass = Matrix::Zero(mp, mc);  // (1/4) sum_b w_b Psi(-1,xi_b) Phi(xi_b)^T
  for (int b = 0; b < mo; ++b) {
    const auto psi = spacetime_psi(-1.0, rule.nodes[b], order);
    const auto phi = legendre_phi(rule.nodes[b], mc);
    const double w = 0.25 * rule.weights[b];
    for (int i = 0; i < mp; ++i) {
      for (int j = 0; j < mp; ++j) l_(i, j) += w * psi[i] * psi[j];
      for (int j = 0; j < mc; ++j) boundary_mass(i, j) += w * psi[i] * phi[j];
    }
  }

  const Eigen::MatrixXd l_dense = l_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(l_dense);
  l_inv_ = lu.inverse();
  const double residual = (Eigen::MatrixXd(l_) * Eigen::MatrixXd(l_inv_) -
                           Eigen::MatrixXd::Identity(mp, mp))
                              .cwiseAbs()
                              .rowwise()
                              .sum()
                              .maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-10) {
    throw std::runtime_error("Picard matrix L is singular for order " + std::to_string(order));
  }

  hat_psi_weighted_.resize(mp, mo * mo);
  const Matrix& psi_nodes = tables_.psi_at_nodes();
  for (int a = 0; a < mo; ++a) {
    for (int b = 0; b < mo; ++b) {
      const int r = a * mo + b;
      const double w = 0.25 * rule.weights[a] * rule.weights[b];
      hat_psi_weighted_.col(r) = w * (l_inv_ * psi_nodes.row(r).transpose());
    }
  }
  initial_transfer_ = l_inv_ * boundary_mass;

  constant_extension_ = Matrix::Zero(mp, mc);
  for (int a = 0; a < mo; ++a) {
    for (int b = 0; b < mo; ++b) {
      const double w = 0.25 * rule.weights[a] * rule.weights[b];
      const auto phi = legendre_phi(rule.nodes[b], mc);
      for (int i = 0; i < mp; ++i) {
        for (int j = 0; j < mc; ++j) {
          constant_extension_(i, j) += w * psi_nodes(a * mo + b, i) * phi[j];
        }
      }
    }
  }
}

CoeffBlock primitive_initial_coefficients(const PicardOperator& op, const System& sys,
                                          const CoeffBlock& q) {
  const auto& t = op.tables();
  const auto& rule = t.rule();
  const int mc = t.mc();
  CoeffBlock a = CoeffBlock::Zero(mc, sys.m_eqn());
  const double floor = kVelocityFloorRatio * q(0, 0);
  for (int n = 0; n < rule.size(); ++n) {
    const StateVector qn = (t.phi_at_nodes().row(n) * q).transpose();
    const PrimitiveVector alpha = cons_to_prim_bounded(sys, qn, floor);
    for (int k = 0; k < mc; ++k) {
      a.row(k) += 0.5 * rule.weights[n] * t.phi_at_nodes()(n, k) * alpha.transpose();
    }
  }
  return a;
}

SpaceTimeBlock initial_guess(const PicardOperator& op, const CoeffBlock& a) {
  SpaceTimeBlock w;
  w.noalias() = op.constant_extension() * a;
  return w;
}

SpaceTimeBlock picard_iterate(const PicardOperator& op, const System& sys,
                              const SpaceTimeBlock& w, const CoeffBlock& a, double nu,
                              const SourceFunction* source, const SlabGeometry& slab) {
  const auto& t = op.tables();
  const int mo = t.order();
  const int m_eqn = sys.m_eqn();
  const auto& nodes = t.rule().nodes;

  NodeValues alpha, alpha_xi;
  alpha.noalias() = t.psi_at_nodes() * w;
  alpha_xi.noalias() = t.psi_dxi_at_nodes() * w;

  NodeValues theta(mo * mo, m_eqn);
  for (int r = 0; r < mo * mo; ++r) {
    const PrimitiveVector al = alpha.row(r).transpose();
    const SmallMatrix b = primitive_matrix(sys, al);
    StateVector th = -nu * (b * alpha_xi.row(r).transpose());
    if (source != nullptr) {
      const int at = r / mo;
      const int bx = r % mo;
      const double time = slab.t0 + 0.5 * slab.dt * (1.0 + nodes[at]);
      const double x = slab.x_center + 0.5 * slab.dx * nodes[bx];
      th += 0.5 * slab.dt * primitive_rate(sys, al, (*source)(time, x));
    }
    theta.row(r) = th.transpose();
  }

  SpaceTimeBlock out;
  out.noalias() = op.weighted_hat_psi() * theta;
  out.noalias() += op.initial_transfer() * a;
  return out;
}

double limit_prediction(const PicardOperator& op, const System& sys, SpaceTimeBlock& w,
                        double eps) {
  const auto& indices = sys.positivity_indices();
  if (indices.empty()) return 1.0;
  const Matrix& psi = op.tables().psi_at_positivity();

  double theta = 1.0;
  for (int k : indices) {
    const double mean = w(0, k);
    if (!(mean >= eps)) {
      std::ostringstream os;
      os.precision(17);
      os << "prediction limiter: space-time mean of " << sys.primitive_name(k) << " is " << mean
         << " < eps";
      throw LimiterFailure(os.str());
    }
    double vmin = mean;
    double scale = std::abs(mean);
    for (int p = 0; p < psi.rows(); ++p) {
      const double v = psi.row(p).dot(w.col(k));
      vmin = std::min(vmin, v);
      scale = std::max(scale, std::abs(v));
    }
    if (vmin >= eps || mean - vmin <= 0.0) continue;
    // Aim a few ulps above eps so that re-evaluated point values stay >= eps.
    const double target = eps + 16.0 * DBL_EPSILON * scale;
    theta = std::min(theta, std::max(0.0, (mean - target) / (mean - vmin)));
  }
  if (theta < 1.0) w.bottomRows(w.rows() - 1) *= theta;
  return theta;
}

PrimitiveVector evaluate_prediction(const SpaceTimeBlock& w, int order, double tau, double xi) {
  const auto psi = spacetime_psi(tau, xi, order);
  PrimitiveVector v = PrimitiveVector::Zero(w.cols());
  for (int l = 0; l < w.rows(); ++l) v += psi[l] * w.row(l).transpose();
  return v;
}

std::vector<SpaceTimeBlock> predict(const PicardOperator& op, const System& sys,
                                    const Solution& state, double dt, double eps, bool limit,
                                    PredictionStats* stats, const SourceFunction* source) {
  const Mesh& mesh = state.mesh();
  const double nu = dt / mesh.dx();
  std::vector<SpaceTimeBlock> result(state.size());
  for (int i = 0; i < state.size(); ++i) {
    try {
      const CoeffBlock a = primitive_initial_coefficients(op, sys, state[i]);
      SpaceTimeBlock w = initial_guess(op, a);
      const SlabGeometry slab{state.time(), dt, mesh.center(i), mesh.dx()};
      bool limited = false;
      for (int sweep = 0; sweep < op.order(); ++sweep) {
        w = picard_iterate(op, sys, w, a, nu, source, slab);
        if (limit && limit_prediction(op, sys, w, eps) < 1.0) limited = true;
      }
      if (limited && stats != nullptr) ++stats->elements_limited;
      result[i] = w;
    } catch (const DomainError& e) {
      throw DomainError("predictor, element " + std::to_string(i) + ": " + e.what());
    } catch (const LimiterFailure& e) {
      throw LimiterFailure("predictor, element " + std::to_string(i) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace lxwdg
