#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "algebroid/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Checks identities of connections on generalized Lie algebroids."};
  std::string command, config, out_dir;
  std::uint64_t seed = 0;
  double tol = 0.0, dt = 0.0;
  bool json = false;
  app.add_option("command", command, "validate | frame | curvature | identities | spray | geodesic | weyl")
      ->required()
      ->check(CLI::IsMember(gla::command_names()));
  app.add_option("--config", config, "system config file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "directory for report.json and trajectory.csv");
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed");
  auto* tol_opt = app.add_option("--tol", tol, "symbolic residual tolerance");
  auto* dt_opt = app.add_option("--dt", dt, "integration step");
  app.add_flag("--json", json, "print the JSON report instead of the text summary");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  gla::RunOptions opts;
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.tol = tol;
  if (*dt_opt) opts.dt = dt;

  gla::RunResult res;
  try {
    res = gla::run_command(command, gla::load_config(config), opts);
  } catch (const gla::ConfigError& e) {
    std::cerr << config;
    if (e.line > 0) std::cerr << ":" << e.line;
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const gla::ParseError& e) {
    std::cerr << config << ": " << e.what() << "\n";
    return 2;
  } catch (const gla::ArityError& e) {
    std::cerr << config << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const std::string json_text = gla::to_json(res.report);
  if (json) std::cout << json_text;
  else std::cout << gla::to_text(res.report);
  for (const auto& n : res.notices) std::cerr << "note: " << n << "\n";

  if (*out_opt) {
    try {
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / "report.json", std::ios::binary) << json_text;
      if (res.trajectory) gla::write_csv(*res.trajectory, (std::filesystem::path(out_dir) / "trajectory.csv").string());
    } catch (const std::exception& e) {
      std::cerr << "cannot write outputs: " << e.what() << "\n";
      return 2;
    }
  }
  return res.exit_code();
}
