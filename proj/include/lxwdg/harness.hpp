#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lxwdg/corrector.hpp"
#include "lxwdg/mesh_state.hpp"
#include "lxwdg/models.hpp"
#include "lxwdg/verification.hpp"

namespace lxwdg {

/// Named initial conditions. forced_shallow_water also registers its source.
enum class InitialCondition {
  burgers_sine,
  sw_gaussian,
  sw_dambreak,
  sw_double_rarefaction,
  forced_shallow_water,
  euler_advection,
  euler_sod,
  euler_double_rarefaction,
  euler_sedov,
};

std::string_view to_string(InitialCondition ic);
InitialCondition parse_initial_condition(std::string_view name);

/// Everything needed for one run. Unset optionals take defaults from the
/// initial condition (equation, domain, boundary) or the order (cfl).
struct RunConfig {
  InitialCondition ic = InitialCondition::burgers_sine;
  std::optional<Equation> equation;
  int order = 4;
  int m_elem = 100;
  std::optional<double> x_low;
  std::optional<double> x_high;
  std::optional<BoundaryKind> bc;
  double t_final = 0.0;
  std::optional<double> cfl;
  double eps = 1e-14;
  std::optional<double> osc_eps;
  LimiterToggles limiters{};
  double g = 1.0;
  double gamma = 1.4;
  std::string output_path;
  int points_per_element = 4;
  // convergence only
  std::vector<int> orders{3, 4, 5};
  std::vector<int> n_list{10, 20, 40, 80, 160, 320};

  Equation resolved_equation() const;
  double resolved_x_low() const;
  double resolved_x_high() const;
  BoundaryKind resolved_bc() const;
  double resolved_cfl() const;
  double resolved_osc_eps() const { return osc_eps.value_or(eps); }
  System system() const;
  Mesh mesh() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Sets one field from its textual value; throws ConfigError on unknown keys
/// or malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses flat `key = value` lines; `#` starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);

/// Projected initial data for the config.
Solution initial_solution(const RunConfig& config);

/// Source term registered for the config, or nullopt.
std::optional<SourceFunction> config_source(const RunConfig& config);

/// Exact solution at time t when one is known in closed form (smooth cases).
std::optional<PointFunction> smooth_exact_solution(const RunConfig& config, double t);

/// Exact Riemann solution for the four Riemann initial conditions.
std::optional<RiemannSolution> riemann_solution(const RunConfig& config);

using StepObserver = std::function<void(const StepReport&, const Solution&)>;

struct RunResult {
  Solution solution;
  int steps = 0;
  LimiterCounters totals;
  int steps_with_limiting = 0;  // steps where any positivity limiter engaged
  PositivityMonitor extremes;   // minima over the initial data and every step
};

RunResult run(const RunConfig& config, const StepObserver& observer = nullptr);

/// Single-line JSON with final time, steps, counters and positivity minima.
std::string summary_json(const RunConfig& config, const RunResult& result,
                         const std::map<std::string, double>& extra = {});

struct ConvergenceRow {
  int order = 0;
  int n = 0;
  double error = 0.0;
  std::optional<double> rate;  // log2(e_{N/2} / e_N); empty on the first row
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

/// Runs every (order, N) pair of the config's smooth problem to t_final and
/// records relative L2 errors.
ConvergenceReport convergence(const RunConfig& config);
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

struct RiemannReport {
  RunResult run;
  double l1_error = 0.0;
  SampleTable numerical;
  std::vector<StateVector> exact;
};

RiemannReport riemann_validate(const RunConfig& config);
void write_riemann_csv(std::ostream& os, const RiemannReport& report);

}  // namespace lxwdg
