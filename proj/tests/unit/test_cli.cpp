#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "twinpol/config.hpp"
#include "twinpol/io.hpp"
#include "twinpol/runner.hpp"

using namespace twinpol;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const char* kMinimal = R"(
[three_level]
E1 = 2e-3 au
E2 = 10e-3 au
mu02 = 1
mu12 = 1

[cavity]
omega_c = 1e-2 au
g = 2e-4 au

[protocol]
framework = quantum_static
initial = psi_0
)";

std::string with_protocol(const std::string& extra) {
  std::string s = kMinimal;
  return s.replace(s.find("initial = psi_0"), 15, extra);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("twinpol_test_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::string& args) {
  const int rc = std::system((std::string(TWINPOL_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("minimal config resolves defaults", "[cli]") {
  const auto c = parse_config_text(kMinimal);
  CHECK(c.cavity.n_fock_max == 2);
  CHECK(c.cavity.include_dse);
  CHECK(c.three_level.e0 == 0.0);
  CHECK(c.pulse.amplitude == 1e-4);
  CHECK(c.pulse.t0 == 25.0);
  CHECK(c.pulse.sigma == 5.0);
  CHECK(c.formats == std::vector<std::string>{"csv"});
  CHECK(c.framework == Framework::QuantumStatic);
}

TEST_CASE("unit suffixes convert and mismatches are rejected", "[cli]") {
  std::string t = kMinimal;
  t.replace(t.find("omega_c = 1e-2 au"), 17, "omega_c = 2906.46 cm-1");
  CHECK(parse_config_text(t).cavity.omega_c == units::cm_to_hartree(2906.46));
  std::string bad = kMinimal;
  bad.replace(bad.find("E1 = 2e-3 au"), 12, "E1 = 2e-3 K");
  const auto msg = config_error(bad);
  CHECK_THAT(msg, ContainsSubstring("unit 'K'"));
  CHECK_THAT(msg, ContainsSubstring("test.cfg:3"));
  CHECK_THAT(msg, ContainsSubstring("E1"));
}

TEST_CASE("unknown keys and sections are reported with their line", "[cli]") {
  std::string t = kMinimal;
  t += "colour = blue\n";
  const auto msg = config_error(t);
  CHECK_THAT(msg, ContainsSubstring("unknown key 'colour'"));
  CHECK_THAT(msg, ContainsSubstring("test.cfg:15"));
  CHECK_THAT(config_error(std::string(kMinimal) + "[extras]\n"), ContainsSubstring("unknown section"));
}

TEST_CASE("missing required keys are reported", "[cli]") {
  std::string t = kMinimal;
  t.erase(t.find("E2 = 10e-3 au"), 13);
  CHECK_THAT(config_error(t), ContainsSubstring("missing required key 'E2'"));
  std::string f = kMinimal;
  f.erase(f.find("framework = quantum_static"), 26);
  CHECK_THAT(config_error(f), ContainsSubstring("'framework'"));
}

TEST_CASE("unknown initial state names the valid labels", "[cli]") {
  const auto msg = config_error(with_protocol("initial = psi_3"));
  CHECK_THAT(msg, ContainsSubstring("psi_3"));
  CHECK_THAT(msg, ContainsSubstring("psi_0, psi_1, psi_2"));
}

TEST_CASE("model sections are exclusive", "[cli]") {
  std::string t = kMinimal;
  t += "[morse]\n";
  CHECK_THAT(config_error(t), ContainsSubstring("exactly one model section"));
}

TEST_CASE("resolved config text parses back identically", "[cli]") {
  auto c = parse_config_text(with_protocol("initial = [psi_0, psi_1]\nt_end = 1234.5 au\nn_mol = [1, 2]"));
  c.cavity.g = 1.0 / 3.0 * 1e-3;
  const std::string text = to_config_text(c);
  CHECK(to_config_text(parse_config_text(text, c.source)) == text);

  const auto h = parse_config(std::string(TWINPOL_CONFIG_DIR) + "/hcl_thermal.cfg");
  CHECK(h.model_kind == ModelKind::Rovibrational);
  CHECK(h.temperature.value() == 300.0);
  const auto back = parse_config_text(to_config_text(h), h.source);
  CHECK(back.morse.dissociation_cm == h.morse.dissociation_cm);
  CHECK(back.cavity.omega_c == h.cavity.omega_c);
  CHECK(back.morse.dipole_curve == h.morse.dipole_curve);
}

TEST_CASE("every shipped config parses", "[cli]") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(TWINPOL_CONFIG_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    CHECK_NOTHROW(parse_config(e.path().string()));
    ++n;
  }
  CHECK(n >= 8);
}

TEST_CASE("default time-dependent settings", "[cli]") {
  auto c = parse_config_text(kMinimal);
  c.framework = Framework::QuantumTd;
  const auto r = resolve_timing(c, build_model(c));
  CHECK(r.dt == 0.5);
  // 2 pi / t_end < 2 g mu / 20 and a power-of-two sample count.
  CHECK(2.0 * M_PI / r.t_end < 2.0 * 2e-4 / 20.0);
  CHECK(r.t_end == 524288.0);
}

TEST_CASE("g sweep schedules one child per coupling", "[cli]") {
  std::string t = kMinimal;
  t.replace(t.find("g = 2e-4 au"), 11, "g_sweep = [0.5e-4, 1e-4, 1.5e-4, 2e-4] au\ndse = off");
  auto c = parse_config_text(t);
  c.initial = {"psi_0", "psi_1"};
  REQUIRE(c.g_sweep.size() == 4);
  const auto dir = scratch("sweep");
  const auto r = run(c, dir);
  for (int i = 0; i < 4; ++i) CHECK(fs::exists(dir / ("g_0" + std::to_string(i)) / "manifest.json"));
  // Splitting is 2 g mu to first order for both branches.
  for (const std::string b : {"R", "P"}) {
    CHECK_THAT(r.manifest["fits"][b]["slope"].get<double>(), WithinRel(2.0, 0.01));
    CHECK(r.manifest["fits"][b]["r_squared"].get<double>() > 0.999);
  }
  CHECK(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);
}

TEST_CASE("identical configs give bit-identical output", "[cli]") {
  const auto c = parse_config_text(with_protocol("initial = [psi_0, psi_1]"));
  const auto a = scratch("det_a"), b = scratch("det_b");
  run(c, a);
  run(c, b);
  for (const auto& e : fs::directory_iterator(a))
    CHECK(read_text(e.path().string()) == read_text((b / e.path().filename()).string()));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("manifest alone reproduces the outputs", "[cli]") {
  auto c = parse_config_text(with_protocol("initial = psi_1"));
  c.framework = Framework::QuantumTd;
  c.t_end = 8192.0;
  const auto a = scratch("manifest_a"), b = scratch("manifest_b");
  const auto first = run(c, a);
  const auto replay = parse_config_text(first.manifest["config_text"].get<std::string>(), "manifest");
  run(replay, b);
  for (const auto& name : first.manifest["outputs"])
    CHECK(read_text((a / name.get<std::string>()).string()) == read_text((b / name.get<std::string>()).string()));
  CHECK(first.manifest["model"]["hash"] == model_hash(build_model(c)));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("command-line exit codes and diagnostics", "[cli]") {
  const auto dir = scratch("exit");
  fs::create_directories(dir);
  const auto cfg = (dir / "ok.cfg").string();
  write_text(cfg, kMinimal);
  CHECK(cli("validate " + cfg) == 0);
  CHECK(cli("run " + cfg + " --out-dir " + (dir / "run").string()) == 0);
  CHECK(fs::exists(dir / "run" / "sticks_psi_0.csv"));
  CHECK(cli("export-model " + cfg + " --out-dir " + (dir / "model").string()) == 0);
  CHECK(git_blob_hash(read_text((dir / "model" / "model.json").string())) ==
        model_hash(build_model(parse_config(cfg))));
  CHECK(cli("plot-data " + (dir / "run").string()) == 0);
  CHECK(fs::exists(dir / "run" / "sticks_psi_0.dat"));
  CHECK(cli("run " + cfg + " --format json --out-dir " + (dir / "json").string()) == 0);
  CHECK(fs::exists(dir / "json" / "sticks_psi_0.json"));

  const auto bad = (dir / "bad.cfg").string();
  write_text(bad, with_protocol("initial = psi_3"));
  CHECK(cli("run " + bad + " --out-dir " + (dir / "bad").string()) == 2);
  CHECK_THAT(read_text((dir / "bad" / "error.txt").string()), ContainsSubstring("psi_3"));

  const auto unstable = (dir / "unstable.cfg").string();
  write_text(unstable, with_protocol("initial = psi_0\ndt = 10 au\nt_end = 1000 au"));
  std::string text = read_text(unstable);
  text.replace(text.find("quantum_static"), 14, "quantum_td");
  write_text(unstable, text);
  CHECK(cli("run " + unstable + " --out-dir " + (dir / "unstable").string()) == 3);
  CHECK_THAT(read_text((dir / "unstable" / "error.txt").string()), ContainsSubstring("dt"));
  fs::remove_all(dir);
}
