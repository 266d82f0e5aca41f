#include "lxwdg/harness.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "lxwdg/basis.hpp"

namespace lxwdg {

namespace {

struct IcInfo {
  InitialCondition ic;
  std::string_view name;
  Equation equation;
  double x_low;
  double x_high;
  BoundaryKind bc;
};

constexpr IcInfo kInitialConditions[] = {
    {InitialCondition::burgers_sine, "burgers_sine", Equation::burgers, 0.0, 1.0, BoundaryKind::periodic},
    {InitialCondition::sw_gaussian, "sw_gaussian", Equation::shallow_water, -1.0, 1.0, BoundaryKind::outflow},
    {InitialCondition::sw_dambreak, "sw_dambreak", Equation::shallow_water, -1.0, 1.0, BoundaryKind::outflow},
    {InitialCondition::sw_double_rarefaction, "sw_double_rarefaction", Equation::shallow_water, -1.0, 1.0,
     BoundaryKind::outflow},
    {InitialCondition::forced_shallow_water, "forced_shallow_water", Equation::shallow_water, -1.0, 1.0,
     BoundaryKind::periodic},
    {InitialCondition::euler_advection, "euler_advection", Equation::euler, -1.0, 1.0, BoundaryKind::periodic},
    {InitialCondition::euler_sod, "euler_sod", Equation::euler, -1.0, 1.0, BoundaryKind::outflow},
    {InitialCondition::euler_double_rarefaction, "euler_double_rarefaction", Equation::euler, -1.0, 1.0,
     BoundaryKind::outflow},
    {InitialCondition::euler_sedov, "euler_sedov", Equation::euler, -1.0, 1.0, BoundaryKind::outflow},
};

const IcInfo& info(InitialCondition ic) {
  for (const auto& i : kInitialConditions) {
    if (i.ic == ic) return i;
  }
  throw ConfigError("unknown initial condition");
}

PrimitiveVector prim2(double a, double b) {
  PrimitiveVector v(2);
  v << a, b;
  return v;
}

PrimitiveVector prim3(double a, double b, double c) {
  PrimitiveVector v(3);
  v << a, b, c;
  return v;
}

std::optional<std::pair<PrimitiveVector, PrimitiveVector>> riemann_states(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::sw_dambreak: return std::pair{prim2(1.0, 0.0), prim2(0.1, 0.0)};
    case InitialCondition::sw_double_rarefaction: return std::pair{prim2(1.0, -2.0), prim2(1.0, 2.0)};
    case InitialCondition::euler_sod: return std::pair{prim3(1.0, 0.0, 1.0), prim3(0.125, 0.0, 0.1)};
    case InitialCondition::euler_double_rarefaction:
      return std::pair{prim3(7.0, -1.0, 0.2), prim3(7.0, 1.0, 0.2)};
    default: return std::nullopt;
  }
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

LimiterToggles parse_limiters(const std::string& value) {
  const auto parts = split_list(value);
  if (parts.size() == 1 && parts[0] == "all") return {};
  LimiterToggles t = LimiterToggles::none();
  if (parts.size() == 1 && parts[0] == "none") return t;
  for (const auto& p : parts) {
    if (p == "prediction") t.prediction = true;
    else if (p == "mean_flux") t.mean_flux = true;
    else if (p == "pointwise") t.pointwise = true;
    else if (p == "oscillation") t.oscillation = true;
    else throw ConfigError("limiters: unknown limiter '" + p + "'");
  }
  return t;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected on/off, got '" + value + "'");
}

void update_extremes(PositivityMonitor& acc, const PositivityMonitor& now) {
  if (acc.min_mean.size() == 0) {
    acc = now;
    return;
  }
  acc.min_mean = acc.min_mean.cwiseMin(now.min_mean);
  acc.min_pointwise = acc.min_pointwise.cwiseMin(now.min_pointwise);
}

nlohmann::json vector_json(const StateVector& v) {
  auto arr = nlohmann::json::array();
  for (int k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

}  // namespace

std::string_view to_string(InitialCondition ic) { return info(ic).name; }

InitialCondition parse_initial_condition(std::string_view name) {
  for (const auto& i : kInitialConditions) {
    if (i.name == name) return i.ic;
  }
  throw ConfigError("ic: unknown initial condition '" + std::string(name) + "'");
}

Equation RunConfig::resolved_equation() const { return equation.value_or(info(ic).equation); }
double RunConfig::resolved_x_low() const { return x_low.value_or(info(ic).x_low); }
double RunConfig::resolved_x_high() const { return x_high.value_or(info(ic).x_high); }
BoundaryKind RunConfig::resolved_bc() const { return bc.value_or(info(ic).bc); }
double RunConfig::resolved_cfl() const { return cfl.value_or(default_cfl(order)); }

System RunConfig::system() const {
  switch (resolved_equation()) {
    case Equation::burgers: return System::burgers();
    case Equation::shallow_water: return System::shallow_water(g);
    case Equation::euler: return System::euler(gamma);
  }
  throw ConfigError("equation: unsupported");
}

Mesh RunConfig::mesh() const { return Mesh(resolved_x_low(), resolved_x_high(), m_elem); }

void RunConfig::validate() const {
  if (order < 1 || order > kMaxOrder) throw ConfigError("order: must lie in 1..5");
  if (m_elem < 1) throw ConfigError("m_elem: must be positive");
  if (!(resolved_x_high() > resolved_x_low())) throw ConfigError("x_high: must exceed x_low");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final: must be finite and >= 0");
  if (cfl && !(*cfl > 0.0)) throw ConfigError("cfl: must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps: must be positive");
  if (osc_eps && !(*osc_eps >= 0.0)) throw ConfigError("osc_eps: must be >= 0");
  if (!(g > 0.0)) throw ConfigError("g: must be positive");
  if (!(gamma > 1.0)) throw ConfigError("gamma: must exceed 1");
  if (points_per_element < 1) throw ConfigError("points_per_element: must be positive");
  if (equation && *equation != info(ic).equation) {
    throw ConfigError("equation: '" + std::string(to_string(*equation)) + "' does not match ic '" +
                      std::string(info(ic).name) + "'");
  }
  if (ic == InitialCondition::euler_sedov && m_elem % 2 == 0) {
    throw ConfigError("m_elem: euler_sedov needs an odd number of elements");
  }
  for (int o : orders) {
    if (o < 1 || o > kMaxOrder) throw ConfigError("orders: each order must lie in 1..5");
  }
  for (int n : n_list) {
    if (n < 1) throw ConfigError("n_list: element counts must be positive");
  }
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "ic") c.ic = parse_initial_condition(value);
  else if (key == "equation") c.equation = parse_equation(value);
  else if (key == "order") c.order = parse_int(key, value);
  else if (key == "m_elem") c.m_elem = parse_int(key, value);
  else if (key == "x_low") c.x_low = parse_double(key, value);
  else if (key == "x_high") c.x_high = parse_double(key, value);
  else if (key == "bc") c.bc = parse_boundary(value);
  else if (key == "t_final") c.t_final = parse_double(key, value);
  else if (key == "cfl") c.cfl = parse_double(key, value);
  else if (key == "eps") c.eps = parse_double(key, value);
  else if (key == "osc_eps") c.osc_eps = parse_double(key, value);
  else if (key == "limiters") c.limiters = parse_limiters(value);
  else if (key == "limit_prediction") c.limiters.prediction = parse_bool(key, value);
  else if (key == "limit_mean_flux") c.limiters.mean_flux = parse_bool(key, value);
  else if (key == "limit_pointwise") c.limiters.pointwise = parse_bool(key, value);
  else if (key == "limit_oscillation") c.limiters.oscillation = parse_bool(key, value);
  else if (key == "g") c.g = parse_double(key, value);
  else if (key == "gamma") c.gamma = parse_double(key, value);
  else if (key == "output_path") c.output_path = value;
  else if (key == "points_per_element") c.points_per_element = parse_int(key, value);
  else if (key == "orders" || key == "n_list") {
    std::vector<int> list;
    for (const auto& p : split_list(value)) list.push_back(parse_int(key, p));
    if (list.empty()) throw ConfigError(key + ": list is empty");
    (key == "orders" ? c.orders : c.n_list) = list;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Solution initial_solution(const RunConfig& config) {
  const System sys = config.system();
  const Mesh mesh = config.mesh();
  const int m = sys.m_eqn();
  auto project = [&](auto fn) { return l2_project(PointFunction(fn), mesh, config.order, m); };

  if (const auto states = riemann_states(config.ic)) {
    const auto [left, right] = *states;
    const StateVector ql = prim_to_cons(sys, left);
    const StateVector qr = prim_to_cons(sys, right);
    return project([=](double x) { return x < 0.0 ? ql : qr; });
  }
  switch (config.ic) {
    case InitialCondition::burgers_sine:
      return project([](double x) {
        StateVector q(1);
        q << std::sin(2.0 * std::numbers::pi * x);
        return q;
      });
    case InitialCondition::sw_gaussian:
      return project([](double x) {
        StateVector q(2);
        q << 1.0 + std::exp(-100.0 * x * x), 0.0;
        return q;
      });
    case InitialCondition::forced_shallow_water: {
      const ManufacturedShallowWater mms(config.g);
      return project([mms](double x) { return mms.conservative(0.0, x); });
    }
    case InitialCondition::euler_advection: {
      const double gm = config.gamma;
      return project([gm](double x) { return euler_advection_exact(0.0, x, gm); });
    }
    case InitialCondition::euler_sedov: {
      Solution sol(mesh, config.order, m);
      const int centre = mesh.m_elem / 2;
      for (int i = 0; i < mesh.m_elem; ++i) {
        const double p = i == centre ? (config.gamma - 1.0) * 3.2e6 / mesh.dx() : (config.gamma - 1.0) * 1e-12;
        sol[i].setZero();
        sol[i].row(0) = prim_to_cons(sys, prim3(1.0, 0.0, p)).transpose();
      }
      return sol;
    }
    default: break;
  }
  throw ConfigError("ic: no initial data for '" + std::string(to_string(config.ic)) + "'");
}

std::optional<SourceFunction> config_source(const RunConfig& config) {
  if (config.ic != InitialCondition::forced_shallow_water) return std::nullopt;
  const ManufacturedShallowWater mms(config.g);
  return SourceFunction([mms](double t, double x) { return mms.source(t, x); });
}

std::optional<PointFunction> smooth_exact_solution(const RunConfig& config, double t) {
  if (config.ic == InitialCondition::forced_shallow_water) {
    const ManufacturedShallowWater mms(config.g);
    return PointFunction([mms, t](double x) { return mms.conservative(t, x); });
  }
  if (config.ic == InitialCondition::euler_advection) {
    const double gm = config.gamma;
    return PointFunction([gm, t](double x) { return euler_advection_exact(t, x, gm); });
  }
  if (config.ic == InitialCondition::burgers_sine) {
    const BurgersData data = burgers_sine();
    if (t >= burgers_shock_time(data)) return std::nullopt;
    return PointFunction([data, t](double x) {
      StateVector q(1);
      q << burgers_exact(data, t, x);
      return q;
    });
  }
  return std::nullopt;
}

std::optional<RiemannSolution> riemann_solution(const RunConfig& config) {
  const auto states = riemann_states(config.ic);
  if (!states) return std::nullopt;
  if (config.resolved_equation() == Equation::shallow_water) {
    return RiemannSolution::shallow_water(states->first, states->second, config.g);
  }
  return RiemannSolution::euler(states->first, states->second, config.gamma);
}

RunResult run(const RunConfig& config, const StepObserver& observer) {
  config.validate();
  const System sys = config.system();
  const BoundaryKind bc = config.resolved_bc();
  const PicardOperator op(config.order);
  const auto source = config_source(config);

  StepOptions options;
  options.cfl = config.resolved_cfl();
  options.eps = config.eps;
  options.osc_eps = config.resolved_osc_eps();
  options.limiters = config.limiters;
  options.source = source ? &*source : nullptr;

  RunResult result{initial_solution(config), 0, {}, 0, {}};
  update_extremes(result.extremes, positivity_monitor(op.tables(), sys, result.solution));
  while (result.solution.time() < config.t_final) {
    const StepReport report = step(op, sys, result.solution, bc, config.t_final, options);
    ++result.steps;
    result.totals += report.counters;
    const auto& c = report.counters;
    if (c.prediction + c.faces_blended + c.pointwise_primary + c.pointwise_pressure > 0) {
      ++result.steps_with_limiting;
    }
    update_extremes(result.extremes, positivity_monitor(op.tables(), sys, result.solution));
    if (observer) observer(report, result.solution);
    if (!(report.ctx.dt > 0.0)) throw DomainError("time step collapsed to zero");
  }
  return result;
}

std::string summary_json(const RunConfig& config, const RunResult& result,
                         const std::map<std::string, double>& extra) {
  nlohmann::json j;
  j["ic"] = std::string(to_string(config.ic));
  j["equation"] = std::string(to_string(config.resolved_equation()));
  j["order"] = config.order;
  j["m_elem"] = config.m_elem;
  j["final_time"] = result.solution.time();
  j["steps"] = result.steps;
  j["limiters"] = {
      {"prediction", result.totals.prediction},
      {"faces_blended", result.totals.faces_blended},
      {"pointwise_primary", result.totals.pointwise_primary},
      {"pointwise_pressure", result.totals.pointwise_pressure},
      {"oscillation", result.totals.oscillation},
      {"steps_with_positivity_limiting", result.steps_with_limiting},
  };
  j["min_mean"] = vector_json(result.extremes.min_mean);
  j["min_pointwise"] = vector_json(result.extremes.min_pointwise);
  const SampleTable samples = sample_solution(result.solution, config.points_per_element);
  double max_abs = 0.0;
  for (const auto& q : samples.q) max_abs = std::max(max_abs, q.cwiseAbs().maxCoeff());
  j["max_abs_sample"] = max_abs;
  for (const auto& [k, v] : extra) j[k] = v;
  return j.dump();
}

ConvergenceReport convergence(const RunConfig& config) {
  if (config.ic != InitialCondition::forced_shallow_water && config.ic != InitialCondition::euler_advection) {
    throw ConfigError("ic: convergence needs forced_shallow_water or euler_advection");
  }
  ConvergenceReport report;
  for (int order : config.orders) {
    std::optional<double> previous;
    for (int n : config.n_list) {
      RunConfig c = config;
      c.order = order;
      c.m_elem = n;
      c.cfl.reset();
      if (config.cfl) c.cfl = config.cfl;
      const RunResult r = run(c);
      const auto exact = smooth_exact_solution(c, c.t_final);
      ConvergenceRow row{order, n, relative_l2_error(r.solution, *exact), std::nullopt};
      if (previous) row.rate = std::log2(*previous / row.error);
      previous = row.error;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os.precision(17);
  os << "order,N,error,rate\n";
  for (const auto& row : report.rows) {
    os << row.order << ',' << row.n << ',' << row.error << ',';
    if (row.rate) os << *row.rate;
    os << '\n';
  }
}

RiemannReport riemann_validate(const RunConfig& config) {
  const auto rs = riemann_solution(config);
  if (!rs) throw ConfigError("ic: riemann needs one of the four Riemann initial conditions");
  if (!(config.t_final > 0.0)) throw ConfigError("t_final: riemann validation needs t_final > 0");
  RiemannReport report{run(config), 0.0, {}, {}};
  const double t = report.run.solution.time();
  report.l1_error = l1_error_vs_riemann(report.run.solution, *rs, t);
  report.numerical = sample_solution(report.run.solution, config.points_per_element);
  report.exact.reserve(report.numerical.x.size());
  for (double x : report.numerical.x) report.exact.push_back(rs->sample(x / t));
  return report;
}

void write_riemann_csv(std::ostream& os, const RiemannReport& report) {
  const auto& table = report.numerical;
  const int m = table.q.empty() ? 0 : static_cast<int>(table.q.front().size());
  os << "x";
  for (int k = 1; k <= m; ++k) os << ",q" << k;
  for (int k = 1; k <= m; ++k) os << ",exact_q" << k;
  os << '\n';
  os.precision(17);
  for (std::size_t r = 0; r < table.x.size(); ++r) {
    os << table.x[r];
    for (int k = 0; k < m; ++k) os << ',' << table.q[r](k);
    for (int k = 0; k < m; ++k) os << ',' << report.exact[r](k);
    os << '\n';
  }
}

}  // namespace lxwdg
