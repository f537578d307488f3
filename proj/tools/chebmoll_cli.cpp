// Command-line runner for the convergence, edge and advection studies.
//
//   chebmoll_cli <converge|edges|advect|all> [flags]
//
// Flags mirror RunConfig fields; --config reads a JSON file first and any
// flag given on the command line overrides the file value.
// Exit status: 0 success, 1 a study row failed, 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chebmoll/harness.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::vector<int> orders;
  double theta = 0.0;
  std::vector<std::string> concentration;
  std::size_t fine_points = 0;
  std::string boundary_mode;
  std::vector<double> probes;
  std::string edge_source;
  std::string output_dir;
  std::uint64_t seed = 0;
  bool timing = false;
  double speed = 0.0;
  double cfl = 0.0;
  std::vector<int> advect_orders;
  std::vector<double> snapshot_times;
  double window = 0.0;
};

void add_flags(CLI::App& app, Flags& f, std::vector<CLI::Option*>& opts) {
  opts.push_back(app.add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile));
  opts.push_back(app.add_option("--orders", f.orders, "polynomial orders N (overrides study defaults)"));
  opts.push_back(app.add_option("--theta", f.theta, "mollifier parameter theta"));
  opts.push_back(app.add_option("--concentration", f.concentration, "concentration factors (trig, poly, exp)"));
  opts.push_back(app.add_option("--fine-points", f.fine_points, "fine grid size M"));
  opts.push_back(app.add_option("--boundary-mode", f.boundary_mode, "truncate_renormalize or mirror"));
  opts.push_back(app.add_option("--probes", f.probes, "pointwise probe locations"));
  opts.push_back(app.add_option("--edge-source", f.edge_source, "edges for mollifier studies: exact or detected"));
  opts.push_back(app.add_option("--out", f.output_dir, "output directory"));
  opts.push_back(app.add_option("--seed", f.seed, "random seed recorded in the manifest"));
  opts.push_back(app.add_flag("--timing", f.timing, "record wall time per row"));
  opts.push_back(app.add_option("--speed", f.speed, "advection speed c"));
  opts.push_back(app.add_option("--cfl", f.cfl, "advection CFL number"));
  opts.push_back(app.add_option("--advect-orders", f.advect_orders, "orders for the advection pipeline"));
  opts.push_back(app.add_option("--snapshots", f.snapshot_times, "advection snapshot times"));
  opts.push_back(app.add_option("--window", f.window, "interior-error exclusion half-width"));
}

template <class T>
void override_if(const CLI::App& app, const char* name, T& field, const T& value) {
  if (app.count(name) > 0) field = value;
}

chebmoll::RunConfig resolve(const CLI::App& sub, const Flags& f, const std::string& study) {
  chebmoll::RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw chebmoll::Error(chebmoll::ErrorCode::config, "cannot read " + f.config_path);
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw chebmoll::Error(chebmoll::ErrorCode::config, f.config_path + ": " + e.what());
    }
    j.get_to(cfg);
  }
  cfg.study = study;
  override_if(sub, "--orders", cfg.orders, f.orders);
  override_if(sub, "--theta", cfg.theta, f.theta);
  override_if(sub, "--concentration", cfg.concentration, f.concentration);
  override_if(sub, "--fine-points", cfg.fine_points, f.fine_points);
  override_if(sub, "--boundary-mode", cfg.boundary_mode, f.boundary_mode);
  override_if(sub, "--probes", cfg.probes, f.probes);
  override_if(sub, "--edge-source", cfg.edge_source, f.edge_source);
  override_if(sub, "--out", cfg.output_dir, f.output_dir);
  override_if(sub, "--seed", cfg.seed, f.seed);
  override_if(sub, "--timing", cfg.timing, f.timing);
  override_if(sub, "--speed", cfg.speed, f.speed);
  override_if(sub, "--cfl", cfg.cfl, f.cfl);
  override_if(sub, "--advect-orders", cfg.advect_orders, f.advect_orders);
  override_if(sub, "--snapshots", cfg.snapshot_times, f.snapshot_times);
  override_if(sub, "--window", cfg.window, f.window);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev edge detection and mollification studies"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<CLI::Option*> options;
  std::vector<CLI::App*> subs;
  for (const char* name : {"converge", "edges", "advect", "all"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " studies");
    add_flags(*sub, flags, options);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = nullptr;
  for (auto* s : subs) {
    if (s->parsed()) sub = s;
  }

  try {
    const auto cfg = resolve(*sub, flags, sub->get_name());
    const auto results = chebmoll::run_studies(cfg);
    bool failed = false;
    for (const auto& r : results) {
      chebmoll::emit_csv(r, cfg.output_dir);
      std::cout << r.study << ": " << r.rows.size() << " rows -> " << cfg.output_dir << "/" << r.study
                << ".csv\n";
      failed = failed || r.failed;
    }
    return failed ? 1 : 0;
  } catch (const chebmoll::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == chebmoll::ErrorCode::config ? 2 : 1;
  }
}
