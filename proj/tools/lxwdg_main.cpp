#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lxwdg/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

lxwdg::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  lxwdg::RunConfig config;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw lxwdg::ConfigError("cannot open config file '" + path + "'");
    config = lxwdg::parse_config(in);
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw lxwdg::ConfigError("--set expects key=value, got '" + kv + "'");
    lxwdg::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.validate();
  return config;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw lxwdg::ConfigError("output_path: cannot write '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lax-Wendroff DG solver for 1D conservation laws"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override one key, e.g. --set m_elem=200");
  };
  auto* run_cmd = app.add_subcommand("run", "run one simulation and write sampled CSV");
  auto* conv_cmd = app.add_subcommand("convergence", "relative L2 errors over orders and meshes");
  auto* riem_cmd = app.add_subcommand("riemann", "run a Riemann problem and compare with the exact solution");
  add_common(run_cmd);
  add_common(conv_cmd);
  add_common(riem_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const lxwdg::RunConfig config = load_config(config_path, overrides);
    if (run_cmd->parsed()) {
      const auto result = lxwdg::run(config);
      if (!config.output_path.empty()) {
        auto out = open_output(config.output_path);
        lxwdg::write_sample_csv(out, lxwdg::sample_solution(result.solution, config.points_per_element));
      }
      std::cout << lxwdg::summary_json(config, result) << '\n';
    } else if (conv_cmd->parsed()) {
      const auto report = lxwdg::convergence(config);
      if (!config.output_path.empty()) {
        auto out = open_output(config.output_path);
        lxwdg::write_convergence_csv(out, report);
      } else {
        lxwdg::write_convergence_csv(std::cout, report);
      }
    } else if (riem_cmd->parsed()) {
      const auto report = lxwdg::riemann_validate(config);
      if (!config.output_path.empty()) {
        auto out = open_output(config.output_path);
        lxwdg::write_riemann_csv(out, report);
      }
      std::cout << lxwdg::summary_json(config, report.run, {{"l1_error", report.l1_error}}) << '\n';
    }
  } catch (const lxwdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lxwdg::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const lxwdg::LimiterFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
