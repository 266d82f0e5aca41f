#include <cmath>
#include <random>

#include "doctest.h"
#include "lxwdg/corrector.hpp"

using namespace lxwdg;

namespace {

const double kEps = 1e-14;

StateVector vec(std::initializer_list<double> v) {
  StateVector s(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) s(i++) = x;
  return s;
}

SpaceTimeBlock constant_prediction(int order, const PrimitiveVector& alpha) {
  SpaceTimeBlock w = SpaceTimeBlock::Zero(spacetime_size(order), alpha.size());
  w.row(0) = alpha.transpose();
  return w;
}

FaceFluxSet faces_from_diff(std::vector<StateVector> diff) {
  FaceFluxSet faces;
  faces.diff = std::move(diff);
  return faces;
}

double pressure(const StateVector& q) { return 0.4 * (q(2) - 0.5 * q(1) * q(1) / q(0)); }

StateVector sample_state(const System& sys, double x) {
  switch (sys.equation()) {
    case Equation::burgers: return vec({0.5 + 0.3 * std::sin(2 * M_PI * x)});
    case Equation::shallow_water: return vec({1.0 + 0.4 * std::sin(2 * M_PI * x), 0.3 * std::cos(2 * M_PI * x)});
    case Equation::euler:
      return prim_to_cons(sys, vec({1.0 + 0.5 * std::sin(2 * M_PI * x), 0.4, 1.0 + 0.2 * std::cos(2 * M_PI * x)}));
  }
  return {};
}

StateVector constant_state(const System& sys) {
  switch (sys.equation()) {
    case Equation::burgers: return vec({0.7});
    case Equation::shallow_water: return vec({1.3, -0.6});
    case Equation::euler: return vec({0.8, 0.4, 2.2});
  }
  return {};
}

std::vector<LimiterToggles> all_toggles() {
  std::vector<LimiterToggles> out;
  for (int bits = 0; bits < 16; ++bits) {
    out.push_back({(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0});
  }
  return out;
}

}  // namespace

TEST_CASE("minmod truth table") {
  CHECK(minmod3(1, 2, 3) == 1);
  CHECK(minmod3(1, -2, 3) == 0);
  CHECK(minmod3(-2, -1, -3) == -1);
  CHECK(minmod3(0, 1, 2) == 0);
  CHECK(minmod3(3, 2, 1) == 1);
  CHECK(minmod3(-1, -2, 3) == 0);
  CHECK(minmod3(2, 2, 2) == 2);
  CHECK(minmod3(-0.5, -4, -0.25) == -0.25);
}

TEST_CASE("time-averaged flux of equal constant traces is the physical flux") {
  PicardOperator op(3);
  const auto sys = System::euler();
  const auto alpha = vec({1.2, 0.3, 0.9});
  const auto w = constant_prediction(3, alpha);
  const auto f = time_averaged_flux(op, sys, w, w);
  CHECK((f - flux(sys, prim_to_cons(sys, alpha))).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("time-averaged Burgers flux between constant traces") {
  PicardOperator op(2);
  const auto f = time_averaged_flux(op, System::burgers(), constant_prediction(2, vec({1.0})),
                                    constant_prediction(2, vec({0.0})));
  CHECK(f(0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("time-averaged flux matches fine quadrature for time-linear traces") {
  const int order = 2;
  PicardOperator op(order);
  const auto sys = System::burgers();
  SpaceTimeBlock wl = SpaceTimeBlock::Zero(3, 1), wr = SpaceTimeBlock::Zero(3, 1);
  wl(0, 0) = 1.0;
  wl(2, 0) = 0.2;  // temporal slope
  wr(0, 0) = 0.4;
  wr(2, 0) = -0.1;
  const auto fine = gauss_legendre(8);
  double oracle = 0.0;
  for (int a = 0; a < fine.size(); ++a) {
    const double ql = evaluate_prediction(wl, order, fine.nodes[a], 1.0)(0);
    const double qr = evaluate_prediction(wr, order, fine.nodes[a], -1.0)(0);
    const double s = std::max(std::abs(ql), std::abs(qr));
    oracle += 0.5 * fine.weights[a] * (0.25 * (ql * ql + qr * qr) - 0.5 * s * (qr - ql));
  }
  CHECK(time_averaged_flux(op, sys, wl, wr)(0) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("local Lax-Friedrichs flux") {
  const auto sw = System::shallow_water(1.0);
  const auto q = vec({0.7, 0.2});
  CHECK((lxf_flux(sw, q, q) - flux(sw, q)).cwiseAbs().maxCoeff() == 0.0);
  const auto f = lxf_flux(sw, vec({1.0, 0.0}), vec({0.1, 0.0}));
  CHECK(f(0) == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(f(1) == doctest::Approx(0.2525).epsilon(1e-15));
}

TEST_CASE("Lax-Friedrichs flux is mirror symmetric") {
  const auto sw = System::shallow_water(1.0);
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> h(0.1, 2.0), u(-1.5, 1.5);
  auto mirror = [](const StateVector& q) { return vec({q(0), -q(1)}); };
  for (int trial = 0; trial < 20; ++trial) {
    const auto ql = vec({h(rng), u(rng)});
    const auto qr = vec({h(rng), u(rng)});
    const auto f = lxf_flux(sw, ql, qr);
    const auto g = lxf_flux(sw, mirror(qr), mirror(ql));
    CHECK(f(0) == doctest::Approx(-g(0)).epsilon(1e-14));
    CHECK(f(1) == doctest::Approx(g(1)).epsilon(1e-14));
  }
}

TEST_CASE("flux blending keeps full fluxes when no face drains the element") {
  const auto sys = System::shallow_water();
  const std::vector<StateVector> q_lxf{vec({1e-3, 0.0})};
  const auto faces = faces_from_diff({vec({0.7, 0.1}), vec({-0.2, 0.3})});
  const auto theta = blend_thetas(sys, q_lxf, faces, 0.1, kEps);
  CHECK(theta[0] == 1.0);
  CHECK(theta[1] == 1.0);
}

TEST_CASE("flux blending with outflow through one face") {
  // A negative flux difference on the left face moves mass out through it.
  const auto sys = System::shallow_water();
  const double nu = 0.1;
  const std::vector<StateVector> q_lxf{vec({kEps + nu * 0.5, 0.0})};
  auto theta = blend_thetas(sys, q_lxf, faces_from_diff({vec({-1.0, 0.0}), vec({0.0, 0.0})}), nu, kEps);
  CHECK(theta[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(theta[1] == 1.0);
  theta = blend_thetas(sys, q_lxf, faces_from_diff({vec({0.0, 0.0}), vec({2.0, 0.0})}), nu, kEps);
  CHECK(theta[0] == 1.0);
  CHECK(theta[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("flux blending with outflow through both faces") {
  const auto sys = System::shallow_water();
  const double nu = 0.2;
  const std::vector<StateVector> q_lxf{vec({kEps + nu * 0.3, 0.0})};
  const auto theta =
      blend_thetas(sys, q_lxf, faces_from_diff({vec({-0.5, 0.0}), vec({1.0, 0.0})}), nu, kEps);
  CHECK(theta[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(theta[1] == doctest::Approx(0.2).epsilon(1e-12));
  FaceFluxSet faces = faces_from_diff({vec({-0.5, 0.0}), vec({1.0, 0.0})});
  faces.theta = theta;
  CHECK(update_means(q_lxf, faces, nu)[0](0) >= kEps * (1 - 1e-12));
}

TEST_CASE("shared faces take the smaller factor of their two elements") {
  const auto sys = System::shallow_water();
  const double nu = 0.1;
  const std::vector<StateVector> q_lxf{vec({1.0, 0.0}), vec({kEps + nu * 0.1, 0.0})};
  // Face 1 drains element 1 (negative difference on its left face).
  const auto theta = blend_thetas(
      sys, q_lxf, faces_from_diff({vec({0.0, 0.0}), vec({-1.0, 0.0}), vec({0.0, 0.0})}), nu, kEps);
  CHECK(theta[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(theta[0] == 1.0);
  CHECK(theta[2] == 1.0);
}

TEST_CASE("flux blending protects Euler pressure") {
  const auto sys = System::euler();
  const double nu = 0.1;
  // Admissible low-order state with little internal energy.
  const std::vector<StateVector> q_lxf{prim_to_cons(sys, vec({1.0, 0.0, 1e-3}))};
  const auto faces0 = faces_from_diff({vec({0.0, 0.0, 0.5}), vec({0.0, 0.0, 0.5})});
  const auto theta = blend_thetas(sys, q_lxf, faces0, nu, kEps);
  CHECK(theta[1] < 1.0);
  FaceFluxSet faces = faces0;
  faces.theta = theta;
  CHECK(pressure(update_means(q_lxf, faces, nu)[0]) >= kEps * (1 - 1e-12));
}

TEST_CASE("flux blending keeps random updates admissible") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> small(1e-14, 1e-2), big(-2.0, 2.0), unit(0.0, 1.0);
  for (const auto& sys : {System::shallow_water(), System::euler()}) {
    const int m = sys.m_eqn();
    for (int trial = 0; trial < 2000; ++trial) {
      const int n = 6;
      std::vector<StateVector> q_lxf(n);
      for (auto& q : q_lxf) {
        StateVector alpha(m);
        alpha(0) = unit(rng) < 0.5 ? small(rng) : 1.0 + big(rng) * 0.4;
        alpha(1) = big(rng);
        if (m == 3) alpha(2) = unit(rng) < 0.5 ? small(rng) : 1.0 + big(rng) * 0.4;
        q = prim_to_cons(sys, alpha);
      }
      std::vector<StateVector> diff(n + 1);
      for (auto& d : diff) {
        d.resize(m);
        for (int k = 0; k < m; ++k) d(k) = big(rng);
      }
      FaceFluxSet faces = faces_from_diff(diff);
      const double nu = 0.05 + 0.1 * unit(rng);
      faces.theta = blend_thetas(sys, q_lxf, faces, nu, kEps);
      const auto means = update_means(q_lxf, faces, nu);
      for (int i = 0; i < n; ++i) {
        const auto pv = pointwise_positivity_values(sys, means[i]);
        for (int k = 0; k < pv.size(); ++k) CHECK(pv(k) >= kEps * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("zero blending reproduces the Lax-Friedrichs update bitwise") {
  const auto sys = System::shallow_water();
  const auto state = l2_project([&](double x) { return sample_state(sys, x); }, Mesh(0.0, 1.0, 8), 3, 2);
  PicardOperator op(3);
  const double nu = 0.05;
  const auto w = predict(op, sys, state, nu * state.mesh().dx(), kEps, true);
  FaceFluxSet faces;
  std::vector<StateVector> q_lxf(8);
  for (int f = 0; f <= 8; ++f) {
    const int l = (f + 7) % 8, r = f % 8;
    faces.high.push_back(time_averaged_flux(op, sys, w[l], w[r]));
    faces.lxf.push_back(lxf_flux(sys, state.mean(l), state.mean(r)));
    faces.diff.push_back(faces.high.back() - faces.lxf.back());
  }
  for (int i = 0; i < 8; ++i) q_lxf[i] = state.mean(i) - nu * (faces.lxf[i + 1] - faces.lxf[i]);
  faces.theta.assign(9, 0.0);
  const auto zero = update_means(q_lxf, faces, nu);
  faces.theta.assign(9, 1.0);
  const auto full = update_means(q_lxf, faces, nu);
  for (int i = 0; i < 8; ++i) {
    CHECK(zero[i] == q_lxf[i]);
    const StateVector high = state.mean(i) - nu * (faces.high[i + 1] - faces.high[i]);
    CHECK((full[i] - high).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("high-mode update of a constant state is a no-op") {
  for (int order = 1; order <= 5; ++order) {
    PicardOperator op(order);
    const auto sys = System::euler();
    const auto q = vec({1.1, -0.3, 2.4});
    CoeffBlock block = CoeffBlock::Zero(order, 3);
    block.row(0) = q.transpose();
    const auto w = constant_prediction(order, cons_to_prim(sys, q));
    const auto f = flux(sys, q);
    const auto out = update_high_modes(op, sys, block, w, f, f, 0.07);
    CHECK((out - block).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("high-mode update matches an independent assembly") {
  const int order = 4;
  PicardOperator op(order);
  const auto sys = System::burgers();
  const auto state = l2_project([](double x) { return vec({0.6 + 0.4 * std::sin(x)}); },
                                Mesh(-1.0, 1.0, 1), order, 1);
  const double nu = 0.08;
  const auto w = predict(op, sys, state, nu * 2.0, kEps, false)[0];
  const auto fl = vec({0.31});
  const auto fr = vec({0.27});
  const auto out = update_high_modes(op, sys, state[0], w, fl, fr, nu);
  const auto r = gauss_legendre(order);
  for (int k = 1; k < order; ++k) {
    double volume = 0.0;
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        const double q = evaluate_prediction(w, order, r.nodes[a], r.nodes[b])(0);
        volume += 0.5 * r.weights[a] * r.weights[b] * legendre_phi_deriv(r.nodes[b], order)[k] * 0.5 * q * q;
      }
    }
    const double expect = state[0](k, 0) + nu * volume -
                          nu * (legendre_phi(1.0, order)[k] * fr(0) - legendre_phi(-1.0, order)[k] * fl(0));
    CHECK(out(k, 0) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(out(0, 0) == state[0](0, 0));
}

TEST_CASE("source increment of a constant source") {
  PicardOperator op(3);
  const SourceFunction s = [](double, double) { return vec({2.0, -1.0}); };
  const auto inc = source_increment(op, 2, s, SlabGeometry{0.0, 0.01, 0.5, 0.1});
  CHECK(inc(0, 0) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(inc(0, 1) == doctest::Approx(-0.01).epsilon(1e-14));
  CHECK(inc.bottomRows(2).cwiseAbs().maxCoeff() <= 1e-16);
}

TEST_CASE("pointwise limiter leaves admissible elements alone") {
  const BasisTables t(3);
  CoeffBlock q(3, 2);
  q << 1.0, 0.2, 0.1, 0.0, 0.05, 0.1;
  const CoeffBlock before = q;
  const auto r = zhang_shu_limit(t, System::shallow_water(), q, kEps);
  CHECK(r.theta_primary == 1.0);
  CHECK(q == before);
}

TEST_CASE("pointwise limiter lifts height to the floor") {
  const BasisTables t(2);
  CoeffBlock q(2, 2);
  q << 1.0, 0.3, 1.0, -0.2;  // h = 1 + sqrt(3) xi
  const auto r = zhang_shu_limit(t, System::shallow_water(), q, kEps);
  CHECK(r.theta_primary == doctest::Approx((1.0 - kEps) / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(q(0, 0) == 1.0);
  CHECK(q(0, 1) == 0.3);
  double h_min = 1e300;
  for (int p = 0; p < t.phi_at_positivity().rows(); ++p) h_min = std::min(h_min, t.phi_at_positivity().row(p).dot(q.col(0)));
  CHECK(h_min >= kEps * (1 - 1e-12));
  CHECK(h_min <= 3 * kEps);
}

TEST_CASE("pointwise limiter restores Euler pressure") {
  const auto sys = System::euler();
  const BasisTables t(4);
  CoeffBlock q = CoeffBlock::Zero(4, 3);
  q.row(0) << 1.0, 0.0, 0.05;
  q(1, 1) = 0.4;  // kinetic energy makes end-point pressures negative
  q(2, 2) = -0.02;
  const auto r = zhang_shu_limit(t, sys, q, kEps);
  CHECK(r.theta_pressure < 1.0);
  for (int p = 0; p < t.phi_at_positivity().rows(); ++p) {
    const StateVector v = (t.phi_at_positivity().row(p) * q).transpose();
    CHECK(v(0) >= kEps * (1 - 1e-12));
    CHECK(pressure(v) >= kEps * (1 - 1e-12));
  }
}

TEST_CASE("pointwise limiter rejects inadmissible means") {
  const BasisTables t(2);
  CoeffBlock q(2, 2);
  q << -1e-3, 0.0, 0.1, 0.0;
  CHECK_THROWS_AS(zhang_shu_limit(t, System::shallow_water(), q, kEps), LimiterFailure);
  CoeffBlock e(2, 3);
  e << 1.0, 2.0, 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(zhang_shu_limit(t, System::euler(), e, kEps), LimiterFailure);
}

TEST_CASE("oscillation limiter keeps consistent slopes and clips inconsistent ones") {
  const double a1 = std::sqrt(1.0 / 3.0);
  Solution s(Mesh(0.0, 3.0, 3), 2, 1);
  s[0](0, 0) = -0.4 / a1;
  s[1](0, 0) = 0.0;
  s[1](1, 0) = 0.1;
  s[2](0, 0) = 0.5 / a1;
  Solution kept = s;
  CHECK(krivodonova_limit(System::burgers(), kept, BoundaryKind::outflow, kEps) == 0);
  CHECK(kept[1](1, 0) == 0.1);

  s[0](0, 0) = 0.4 / a1;
  const auto before = s;
  krivodonova_limit(System::burgers(), s, BoundaryKind::outflow, kEps);
  CHECK(s[1](1, 0) == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(s[i](0, 0) == before[i](0, 0));
}

TEST_CASE("oscillation limiter stops descending at an unchanged mode") {
  auto make = [](double top) {
    Solution s(Mesh(0.0, 3.0, 3), 3, 1);
    s[0].col(0) << 0.5, 0.0, 0.0;
    s[1].col(0) << 0.0, 1.0, top;
    s[2].col(0) << 0.5, 2.0, 0.0;
    return s;
  };
  auto calm = make(0.01);
  krivodonova_limit(System::burgers(), calm, BoundaryKind::outflow, kEps);
  CHECK(calm[1](2, 0) == 0.01);
  CHECK(calm[1](1, 0) == 1.0);

  auto steep = make(5.0);
  krivodonova_limit(System::burgers(), steep, BoundaryKind::outflow, kEps);
  CHECK(steep[1](2, 0) == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK(steep[1](1, 0) == 0.0);
}

TEST_CASE("oscillation limiter is local") {
  const auto sys = System::euler();
  auto base = l2_project([&](double x) { return sample_state(sys, x); }, Mesh(0.0, 1.0, 12), 4, 3);
  auto moved = base;
  moved[6](2, 0) += 0.3;
  moved[6](1, 2) -= 0.2;
  krivodonova_limit(sys, base, BoundaryKind::periodic, kEps);
  krivodonova_limit(sys, moved, BoundaryKind::periodic, kEps);
  for (int i = 0; i < 12; ++i) {
    if (i >= 5 && i <= 7) continue;
    CHECK(base[i] == moved[i]);
  }
}

TEST_CASE("free-stream preservation for every system, order and limiter toggle") {
  for (const auto& sys : {System::burgers(), System::shallow_water(), System::euler()}) {
    const auto q = constant_state(sys);
    for (int order = 1; order <= 5; ++order) {
      PicardOperator op(order);
      for (const auto bc : {BoundaryKind::periodic, BoundaryKind::outflow}) {
        for (const auto& toggles : all_toggles()) {
          auto state = l2_project([&](double) { return q; }, Mesh(0.0, 1.0, 7), order, sys.m_eqn());
          StepOptions opt;
          opt.cfl = default_cfl(order);
          opt.limiters = toggles;
          step(op, sys, state, bc, 1.0, opt);
          double worst = 0.0;
          for (int i = 0; i < state.size(); ++i) {
            CoeffBlock expect = CoeffBlock::Zero(order, sys.m_eqn());
            expect.row(0) = q.transpose();
            worst = std::max(worst, (state[i] - expect).cwiseAbs().maxCoeff());
          }
          CHECK(worst <= 1e-13);
        }
      }
    }
  }
}

TEST_CASE("means are conserved under periodic boundaries") {
  for (const auto& sys : {System::burgers(), System::shallow_water(), System::euler()}) {
    for (int order : {1, 3, 5}) {
      PicardOperator op(order);
      for (const auto& toggles : all_toggles()) {
        auto state = l2_project([&](double x) { return sample_state(sys, x); }, Mesh(0.0, 1.0, 10), order,
                                sys.m_eqn());
        StepOptions opt;
        opt.cfl = default_cfl(order);
        opt.limiters = toggles;
        for (int n = 0; n < 3; ++n) {
          const StateVector before = state.totals();
          step(op, sys, state, BoundaryKind::periodic, 1.0, opt);
          const StateVector after = state.totals();
          for (int k = 0; k < sys.m_eqn(); ++k) {
            CHECK(std::abs(after(k) - before(k)) <= 1e-12 * std::max(1.0, std::abs(before(k))));
          }
        }
      }
    }
  }
}

TEST_CASE("a step lands exactly on the final time") {
  const auto sys = System::shallow_water();
  PicardOperator op(3);
  auto state = l2_project([&](double x) { return sample_state(sys, x); }, Mesh(0.0, 1.0, 10), 3, 2);
  StepOptions opt;
  opt.cfl = default_cfl(3);
  const auto report = step(op, sys, state, BoundaryKind::periodic, 1e-5, opt);
  CHECK(report.ctx.dt == doctest::Approx(1e-5));
  CHECK(state.time() == 1e-5);
}

TEST_CASE("one step of the double rarefaction keeps positivity") {
  const auto sys = System::shallow_water();
  PicardOperator op(4);
  auto state = l2_project([](double x) { return x < 0 ? vec({1.0, -2.0}) : vec({1.0, 2.0}); },
                          Mesh(-1.0, 1.0, 200), 4, 2);
  StepOptions opt;
  opt.cfl = default_cfl(4);
  for (int n = 0; n < 5; ++n) step(op, sys, state, BoundaryKind::outflow, 0.25, opt);
  const auto mon = positivity_monitor(op.tables(), sys, state);
  CHECK(mon.min_mean(0) >= kEps);
  CHECK(mon.min_pointwise(0) >= kEps * (1 - 1e-12));
}

TEST_CASE("positivity monitor") {
  const auto sys = System::euler();
  const BasisTables t(2);
  Solution s(Mesh(0.0, 1.0, 2), 2, 3);
  s[0].row(0) << 1.0, 0.0, 2.5;
  s[1].row(0) << 0.5, 0.0, 0.25;
  s[1](1, 0) = 0.1;
  const auto mon = positivity_monitor(t, sys, s);
  CHECK(mon.min_mean(0) == 0.5);
  CHECK(mon.min_mean(1) == doctest::Approx(0.1));
  CHECK(mon.min_pointwise(0) == doctest::Approx(0.5 - 0.1 * std::sqrt(3.0)));
  CHECK(positivity_monitor(t, System::burgers(), Solution(Mesh(0, 1, 2), 2, 1)).min_mean.size() == 0);
}
