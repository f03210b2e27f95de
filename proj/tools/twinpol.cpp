// twinpol command-line front end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unistd.h>

#include "twinpol/config.hpp"
#include "twinpol/io.hpp"
#include "twinpol/runner.hpp"

namespace fs = std::filesystem;
using namespace twinpol;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out_dir;
  std::string format;
  bool seedless_check = false;
};

RunConfig load(const Options& o) {
  RunConfig c = parse_config(o.config);
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (!o.format.empty()) c.formats = {o.format};
  return c;
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  std::sort(out.begin(), out.end());
  return out;
}

/// Re-runs into a scratch directory and compares every file byte for byte.
int seedless_check(const RunConfig& c, const fs::path& first) {
  const fs::path scratch = fs::temp_directory_path() / ("twinpol_rerun_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  run(c, scratch);
  const auto produced = files_under(scratch);
  int mismatches = 0;
  for (const auto& f : produced) {
    if (!fs::exists(first / f) || read_text((first / f).string()) != read_text((scratch / f).string())) {
      std::cerr << "seedless check: " << f.string() << " differs\n";
      ++mismatches;
    }
  }
  fs::remove_all(scratch);
  std::cout << "seedless check: " << produced.size() << " files compared, " << (mismatches ? "MISMATCH" : "identical")
            << "\n";
  return mismatches ? kExitNumerical : 0;
}

int do_run(const Options& o, bool sweep) {
  const RunConfig c = load(o);
  if (sweep && c.g_sweep.empty()) throw ConfigError(o.config + ": sweep needs g_sweep in [cavity]");
  const fs::path dir = c.out_dir;
  fs::remove(dir / "error.txt");
  const RunResult r = run(c, dir);
  std::cout << "wrote " << dir.string() << "/manifest.json (status " << r.manifest.value("status", "?") << ")\n";
  if (r.manifest.contains("fits"))
    for (const auto& [branch, fit] : r.manifest["fits"].items())
      std::cout << "  " << branch << " splitting vs g: slope " << fit["slope"] << ", R^2 " << fit["r_squared"] << "\n";
  return o.seedless_check ? seedless_check(c, dir) : 0;
}

int do_validate(const Options& o) {
  RunConfig c = load(o);
  const MolecularModel model = build_model(c);
  c = resolve_timing(c, model);
  std::cout << "# " << o.config << ": valid, model " << to_string(model.kind) << " with " << model.n_states()
            << " states, hash " << model_hash(model) << "\n"
            << to_config_text(c);
  return 0;
}

int do_export(const Options& o) {
  const RunConfig c = load(o);
  const MolecularModel model = build_model(c);
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  write_text((dir / "model.json").string(), model_json_text(model));
  std::cout << "wrote " << (dir / "model.json").string() << " (" << model.n_states() << " states, hash "
            << model_hash(model) << ")\n";
  return 0;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

/// Two-column files (x y) for every spectrum and sweep table under `root`.
int do_plot_data(const std::string& root) {
  if (!fs::is_directory(root)) throw ConfigError("plot-data needs an existing run directory, got '" + root + "'");
  int written = 0;
  for (const auto& rel : files_under(root)) {
    if (rel.extension() != ".csv") continue;
    const fs::path path = fs::path(root) / rel;
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    const auto cols = split_csv(header);
    auto col = [&](const std::string& name) {
      const auto it = std::find(cols.begin(), cols.end(), name);
      return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
    };
    std::vector<std::pair<std::string, std::pair<int, int>>> series;
    if (col("omega_cm1") >= 0 && col("intensity") >= 0) {
      series.push_back({".dat", {col("omega_cm1"), col("intensity")}});
    } else if (col("g_au") >= 0) {
      series.push_back({"_R.dat", {col("g_au"), col("R_splitting_au")}});
      series.push_back({"_P.dat", {col("g_au"), col("P_splitting_au")}});
    } else {
      continue;
    }
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(split_csv(line));
    for (const auto& [suffix, xy] : series) {
      fs::path target = path;
      target.replace_extension();
      target += suffix;
      std::ofstream out(target);
      out << "# " << cols[xy.first] << ' ' << cols[xy.second] << '\n';
      for (const auto& r : rows)
        if (static_cast<int>(r.size()) > std::max(xy.first, xy.second) && !r[xy.second].empty())
          out << r[xy.first] << ' ' << r[xy.second] << '\n';
      ++written;
    }
  }
  std::cout << "wrote " << written << " plot files under " << root << "\n";
  return 0;
}

void write_diagnostic(const Options& o, const std::string& kind, const std::string& what) {
  fs::path dir = o.out_dir;
  if (dir.empty()) {
    try {
      dir = parse_config(o.config).out_dir;
    } catch (...) {
      dir = ".";
    }
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "error.txt");
  out << "twinpol " << kVersion << "\nconfig: " << o.config << "\nerror: " << kind << "\n" << what << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"twinpol: cavity polariton and twin-polariton spectra"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", o.config, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", o.out_dir, "output directory (overrides [output] directory)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* run_cmd = app.add_subcommand("run", "run the configured framework");
  add_common(run_cmd);
  run_cmd->add_flag("--seedless-check", o.seedless_check, "re-run and require bit-identical output");
  auto* sweep_cmd = app.add_subcommand("sweep", "run a coupling sweep (g_sweep) and fit splittings");
  add_common(sweep_cmd);
  sweep_cmd->add_flag("--seedless-check", o.seedless_check, "re-run and require bit-identical output");
  auto* validate_cmd = app.add_subcommand("validate", "parse the config, build the model, print resolved settings");
  add_common(validate_cmd);
  auto* export_cmd = app.add_subcommand("export-model", "write the built molecular model as JSON");
  add_common(export_cmd);
  std::string plot_dir;
  auto* plot_cmd = app.add_subcommand("plot-data", "write two-column plot files for a finished run");
  plot_cmd->add_option("run_dir", plot_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(o, false);
    if (*sweep_cmd) return do_run(o, true);
    if (*validate_cmd) return do_validate(o);
    if (*export_cmd) return do_export(o);
    if (*plot_cmd) return do_plot_data(plot_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    if (!o.config.empty()) write_diagnostic(o, "ConfigError", e.what());
    return kExitConfig;
  } catch (const InvalidModelError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    if (!o.config.empty()) write_diagnostic(o, "InvalidModelError", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!o.config.empty()) write_diagnostic(o, "NumericalError", e.what());
    return kExitNumerical;
  }
  return 0;
}
