#pragma once

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dd/common.hpp"
#include "dd/propagator.hpp"
#include "dd/sequence.hpp"
#include "dd/spinbath.hpp"
#include "dd/verify.hpp"

namespace dd {

using nlohmann::json;

/// Full-precision decimal rendering; 17 significant digits round-trip a double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline json to_json(const PulseSequence& seq) {
  return json{{"kind", to_string(seq.kind)},
              {"order", seq.order},
              {"total_time", seq.total_time},
              {"intervals", seq.intervals},
              {"pulse_times", seq.pulse_times()},
              {"trailing_pulse", seq.trailing_pulse}};
}

/// One row per pulse instant.
inline std::string sequence_csv(const PulseSequence& seq) {
  std::string out = "index,normalized_time,time\n";
  const auto times = seq.pulse_times();
  for (std::size_t i = 0; i < times.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(times[i]) + "," +
           format_double(times[i] * seq.total_time) + "\n";
  return out;
}

inline json to_json(const VerificationReport& report) {
  json j{{"backend", report.backend},
         {"sequence", report.sequence_label},
         {"order", report.order_n},
         {"max_order", report.max_order},
         {"max_order_checked", report.max_order_checked},
         {"status", to_string(report.status)},
         {"words_checked", report.words_checked},
         {"wall_time_s", report.wall_time_s}};
  if (report.backend == "float") j["tolerance"] = report.tolerance;
  if (report.witness) {
    j["witness"] = json{{"word", report.witness->word},
                        {"order", report.witness->order},
                        {"value", report.witness->value},
                        {"numeric", report.witness->numeric}};
  }
  return j;
}

inline std::string words_csv(const std::vector<WordRecord>& records) {
  std::string out = "word,order,is_zero,value\n";
  for (const auto& rec : records)
    out += rec.word + "," + std::to_string(rec.order) + "," + (rec.is_zero ? "1" : "0") + ",\"" +
           rec.value + "\"\n";
  return out;
}

inline std::string scaling_csv(const ScalingResult& result) {
  std::string out = "t,v_e,one_minus_v_e\n";
  for (std::size_t i = 0; i < result.curve.size(); ++i)
    out += format_double(result.curve[i].t) + "," + format_double(result.curve[i].v_e) + "," +
           format_double(result.deficit[i]) + "\n";
  return out;
}

inline json bath_config_to_json(const BathConfig& config) {
  return json{{"max_sites", config.max_sites},
              {"extent", config.extent},
              {"lattice_spacing", config.lattice_spacing},
              {"envelope_width", config.envelope_width},
              {"envelope_center",
               {config.envelope_center.x(), config.envelope_center.y(), config.envelope_center.z()}},
              {"hyperfine_max", config.hyperfine_max},
              {"dipolar_strength", config.dipolar_strength},
              {"ising_ratio", config.ising_ratio},
              {"occupancy", config.occupancy},
              {"seed", config.seed}};
}

inline BathConfig bath_config_from_json(const json& j) {
  BathConfig config;
  config.max_sites = j.value("max_sites", config.max_sites);
  config.extent = j.value("extent", config.extent);
  config.lattice_spacing = j.value("lattice_spacing", config.lattice_spacing);
  config.envelope_width = j.value("envelope_width", config.envelope_width);
  if (j.contains("envelope_center")) {
    const auto& c = j.at("envelope_center");
    if (!c.is_array() || c.size() != 3)
      throw std::invalid_argument("bath config: envelope_center must be a 3-vector");
    config.envelope_center = Eigen::Vector3d(c[0].get<double>(), c[1].get<double>(),
                                             c[2].get<double>());
  }
  config.hyperfine_max = j.value("hyperfine_max", config.hyperfine_max);
  config.dipolar_strength = j.value("dipolar_strength", config.dipolar_strength);
  config.ising_ratio = j.value("ising_ratio", config.ising_ratio);
  config.occupancy = j.value("occupancy", config.occupancy);
  config.seed = j.value("seed", config.seed);
  return config;
}

/// Every CLI run writes one of these next to its outputs; re-running the
/// recorded subcommand with the recorded parameters reproduces the outputs.
struct RunManifest {
  std::string subcommand;
  json parameters;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
};

inline json to_json(const RunManifest& manifest) {
  return json{{"tool", "ddtool"},
              {"version", std::string(kVersion)},
              {"subcommand", manifest.subcommand},
              {"parameters", manifest.parameters},
              {"outputs", manifest.outputs},
              {"wall_time_s", manifest.wall_time_s}};
}

}  // namespace dd
