#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "twinpol/error.hpp"
#include "twinpol/model.hpp"
#include "twinpol/spectrum.hpp"
#include "twinpol/trajectory.hpp"

namespace twinpol {

/// Hex SHA-1 of `data`.
inline std::string sha1_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("SHA-1 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

/// Same id `git hash-object` would give the content.
inline std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  return sha1_hex(blob + content);
}

inline std::string model_json_text(const MolecularModel& m) { return to_json(m).dump(1) + "\n"; }

inline std::string model_hash(const MolecularModel& m) { return git_blob_hash(model_json_text(m)); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

/// JSON form of a spectrum; intensities scaled to the maximum like the CSV.
inline nlohmann::json spectrum_json(const Spectrum& s) {
  nlohmann::json j;
  const double top = s.max_intensity();
  const double scale = top > 0 ? 1.0 / top : 1.0;
  j["kind"] = s.kind == SpectrumKind::Sticks ? "sticks" : "continuous";
  j["intensity_scale"] = top;
  j["metadata"] = s.metadata;
  if (s.kind == SpectrumKind::Continuous) j["bin_width_au"] = s.bin_width;
  auto omega = nlohmann::json::array(), cm = nlohmann::json::array(), inten = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    omega.push_back(s.omega[i]);
    cm.push_back(units::hartree_to_cm(s.omega[i]));
    inten.push_back(s.intensity[i] * scale);
  }
  j["omega_au"] = omega;
  j["omega_cm1"] = cm;
  j["intensity"] = inten;
  if (s.kind == SpectrumKind::Sticks && !s.info.empty()) {
    auto info = nlohmann::json::array();
    for (const auto& si : s.info)
      info.push_back({{"label_i", si.label_i}, {"label_f", si.label_f}, {"mechanism", si.mechanism},
                      {"branch", si.branch}, {"n0", si.n0}, {"n_mol", si.n_mol}, {"side", si.side}});
    j["info"] = info;
  }
  return j;
}

inline nlohmann::json trajectory_json(const Trajectory& tr) {
  nlohmann::json j;
  j["light"] = tr.light == LightModel::Classical ? "classical" : "quantum";
  j["dt"] = tr.dt;
  j["record_stride"] = tr.record_stride;
  j["t"] = tr.times;
  j["mu"] = tr.dipole;
  if (tr.light == LightModel::Classical) {
    j["q"] = tr.q;
    j["p"] = tr.p;
  } else {
    j["q_expect"] = tr.q_expect;
    j["q2_expect"] = tr.q2_expect;
  }
  j["energy"] = tr.energy;
  j["norm"] = tr.norm;
  nlohmann::json pops;
  for (std::size_t k = 0; k < tr.population_labels.size(); ++k) pops[tr.population_labels[k]] = tr.populations[k];
  j["populations"] = pops;
  return j;
}

} // namespace twinpol
