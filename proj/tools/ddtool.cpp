// ddtool: dynamical-decoupling sequence generation, exact cancellation
// certification, fidelity-scaling experiments, and spin-bath simulation.
//
// Exit codes: 0 success/certified, 2 falsified, 3 inconclusive,
// 4 resource/underflow, 64 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dd/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalsified = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitResource = 4;
constexpr int kExitUsage = 64;

struct OutputContext {
  std::string outdir = ".";
  std::string prefix;
  std::vector<std::string> outputs;

  std::string path(const std::string& suffix) const {
    return (std::filesystem::path(outdir) / (prefix + suffix)).string();
  }
  void write(const std::string& suffix, const std::string& content) {
    const std::string p = path(suffix);
    dd::write_text_file(p, content);
    outputs.push_back(p);
  }
};

void add_output_options(CLI::App* cmd, OutputContext& ctx, const std::string& default_prefix) {
  ctx.prefix = default_prefix;
  cmd->add_option("--outdir", ctx.outdir, "output directory")
      ->envname("DDTOOL_OUTDIR")
      ->capture_default_str();
  cmd->add_option("--prefix", ctx.prefix, "output file prefix")->capture_default_str();
}

void finish(OutputContext& ctx, const std::string& subcommand, const dd::json& parameters,
            std::chrono::steady_clock::time_point started) {
  dd::RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.parameters = parameters;
  manifest.outputs = ctx.outputs;
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  dd::write_text_file(ctx.path("_manifest.json"), dd::to_json(manifest).dump(2) + "\n");
}

struct SequenceSpec {
  dd::SequenceKind kind = dd::SequenceKind::Hahn;
  int order = 1;
  std::string label;
};

SequenceSpec parse_sequence_spec(const std::string& text) {
  SequenceSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  spec.kind = dd::sequence_kind_from_string(kind);
  if (colon != std::string::npos)
    spec.order = std::stoi(text.substr(colon + 1));
  else
    spec.order = (spec.kind == dd::SequenceKind::Hahn) ? 1 : 0;
  spec.label = kind + (colon != std::string::npos ? "_" + text.substr(colon + 1) : "");
  return spec;
}

int default_max_order(dd::SequenceKind kind, int order) {
  // the claim worth probing: n cancelled orders for UDD, one past the pulse
  // count for everything else
  switch (kind) {
    case dd::SequenceKind::Udd: return std::max(1, order);
    case dd::SequenceKind::Cdd:
      return std::max(1, dd::cdd_intervals(order, 1.0).pulse_count() + 1);
    case dd::SequenceKind::Periodic: return order + 1;
    case dd::SequenceKind::Hahn: return 2;
    case dd::SequenceKind::Free: return 1;
  }
  return 1;
}

int run_sequence(dd::SequenceKind kind, int order, double time, const std::string& format,
                 OutputContext& ctx, std::chrono::steady_clock::time_point started) {
  const dd::PulseSequence seq = dd::make_sequence(kind, order, time);
  seq.validate();
  if (format == "json" || format == "both")
    ctx.write(".json", dd::to_json(seq).dump(2) + "\n");
  if (format == "csv" || format == "both") ctx.write(".csv", dd::sequence_csv(seq));
  finish(ctx, "sequence",
         {{"kind", dd::to_string(kind)}, {"order", order}, {"time", time}, {"format", format}},
         started);
  return kExitOk;
}

int run_verify(dd::SequenceKind kind, int order, int max_order, const std::string& backend,
               double tolerance, int workers, double time_budget, bool words_csv,
               OutputContext& ctx, std::chrono::steady_clock::time_point started) {
  dd::VerifyOptions options;
  options.workers = workers;
  options.time_budget_s = time_budget;
  std::vector<dd::WordRecord> log;
  if (words_csv) options.word_log = &log;

  dd::VerificationReport report;
  if (backend == "exact") {
    if (kind == dd::SequenceKind::Udd) {
      report = dd::verify_udd(order, max_order, options);
    } else {
      report = dd::verify_sequence_rational(dd::exact_interval_fractions(kind, order), max_order,
                                            options, dd::to_string(kind));
      report.order_n = order;
    }
  } else if (backend == "float") {
    if (kind == dd::SequenceKind::Udd) {
      report = dd::verify_udd_float(order, max_order, tolerance, options);
    } else {
      std::vector<double> fractions;
      for (const auto& f : dd::exact_interval_fractions(kind, order))
        fractions.push_back(f.get_d());
      report = dd::verify_sequence_float(fractions, max_order, tolerance, options,
                                         dd::to_string(kind));
      report.order_n = order;
    }
  } else {
    std::cerr << "ddtool: unknown backend '" << backend << "'\n";
    return kExitUsage;
  }

  ctx.write("_report.json", dd::to_json(report).dump(2) + "\n");
  if (words_csv) ctx.write("_words.csv", dd::words_csv(log));
  finish(ctx, "verify",
         {{"kind", dd::to_string(kind)},
          {"order", order},
          {"max_order", max_order},
          {"backend", backend},
          {"tolerance", tolerance},
          {"workers", workers},
          {"time_budget", time_budget}},
         started);
  std::cout << dd::to_string(report.status) << "\n";
  switch (report.status) {
    case dd::VerifyStatus::Certified: return kExitOk;
    case dd::VerifyStatus::Falsified: return kExitFalsified;
    case dd::VerifyStatus::Inconclusive: return kExitInconclusive;
  }
  return kExitOk;
}

int run_scaling(int dim, std::uint64_t seed, dd::SequenceKind kind, int order, double t_min,
                double t_max, int points, double noise_floor, OutputContext& ctx,
                std::chrono::steady_clock::time_point started) {
  const dd::DephasingModel model = dd::random_dephasing_model(dim, seed);
  const auto grid = dd::geometric_grid(t_min, t_max, points);
  const dd::ScalingResult result = dd::fidelity_scaling(model, kind, order, grid, noise_floor);
  ctx.write("_curve.csv", dd::scaling_csv(result));
  const dd::json summary{{"kind", dd::to_string(kind)},
                         {"order", order},
                         {"dim", dim},
                         {"seed", seed},
                         {"slope", result.slope},
                         {"intercept", result.intercept},
                         {"rms_residual", result.rms_residual},
                         {"points_used", result.t_used.size()},
                         {"t_used", result.t_used},
                         {"noise_floor", noise_floor}};
  ctx.write("_summary.json", summary.dump(2) + "\n");
  finish(ctx, "scaling",
         {{"dim", dim},
          {"seed", seed},
          {"kind", dd::to_string(kind)},
          {"order", order},
          {"tmin", t_min},
          {"tmax", t_max},
          {"points", points},
          {"noise_floor", noise_floor}},
         started);
  std::cout << "slope " << dd::format_double(result.slope) << "\n";
  return kExitOk;
}

int run_spinbath(const std::string& config_path, const std::vector<std::string>& seq_specs,
                 double t_min, double t_max, int points, double cutoff, bool with_exact,
                 OutputContext& ctx, std::chrono::steady_clock::time_point started) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "ddtool: cannot read bath config: " << config_path << "\n";
    return kExitUsage;
  }
  dd::json config_json;
  in >> config_json;
  const dd::BathConfig config = dd::bath_config_from_json(config_json);
  const dd::SpinBathModel bath = dd::build_bath(config);
  const dd::ClusterExpansion cluster(bath, cutoff);
  std::optional<dd::ExactBathEvolver> exact;
  if (with_exact) exact.emplace(bath);  // throws ResourceError beyond 12 sites

  const auto grid = dd::geometric_grid(t_min, t_max, points);
  dd::json summaries = dd::json::array();
  for (const auto& spec_text : seq_specs) {
    const SequenceSpec spec = parse_sequence_spec(spec_text);
    std::string csv = with_exact ? "t,v_e,ln_v_e,v_e_exact,ln_v_e_exact\n" : "t,v_e,ln_v_e\n";
    dd::EchoCurve curve;
    for (const double t : grid) {
      const dd::PulseSequence seq = dd::make_sequence(spec.kind, spec.order, t);
      const double ln_v = cluster.log_echo(seq);
      curve.push_back({t, std::exp(ln_v)});
      csv += dd::format_double(t) + "," + dd::format_double(std::exp(ln_v)) + "," +
             dd::format_double(ln_v);
      if (exact) {
        const double ln_exact = exact->log_echo(seq);
        csv += "," + dd::format_double(std::exp(ln_exact)) + "," + dd::format_double(ln_exact);
      }
      csv += "\n";
    }
    ctx.write("_" + spec.label + ".csv", csv);
    dd::json entry{{"sequence", spec.label},
                   {"pair_count", cluster.pair_count()},
                   {"cutoff", cluster.cutoff()},
                   {"captured_b2_fraction", cluster.captured_b2_fraction()},
                   {"sites", bath.size()}};
    try {
      const dd::ExponentFit fit = dd::short_time_exponent(curve);
      entry["exponent"] = fit.exponent;
      entry["exponent_rms_residual"] = fit.rms_residual;
      entry["exponent_points"] = fit.points_used;
    } catch (const std::exception& e) {
      entry["exponent_error"] = e.what();
    }
    summaries.push_back(entry);
  }
  ctx.write("_summary.json", summaries.dump(2) + "\n");
  finish(ctx, "spinbath",
         {{"config", config_path},
          {"config_resolved", dd::bath_config_to_json(config)},
          {"sequences", seq_specs},
          {"tmin", t_min},
          {"tmax", t_max},
          {"points", points},
          {"cutoff", cutoff},
          {"exact", with_exact}},
         started);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"dynamical-decoupling sequence toolkit"};
  app.require_subcommand(1);

  // sequence
  auto* seq_cmd = app.add_subcommand("sequence", "generate a pulse sequence");
  std::string seq_kind = "udd";
  int seq_order = 1;
  double seq_time = 1.0;
  std::string seq_format = "both";
  OutputContext seq_ctx;
  seq_cmd->add_option("--kind", seq_kind, "free|hahn|periodic|udd|cdd")->capture_default_str();
  seq_cmd->add_option("--order,-n", seq_order, "pulse count (udd/periodic)")
      ->capture_default_str();
  seq_cmd->add_option("--level", seq_order, "concatenation level (cdd alias for --order)");
  seq_cmd->add_option("--time,-t", seq_time, "total sequence time")->capture_default_str();
  seq_cmd->add_option("--format", seq_format, "json|csv|both")->capture_default_str();
  add_output_options(seq_cmd, seq_ctx, "sequence");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "certify or falsify coefficient cancellation");
  std::string ver_kind = "udd";
  int ver_order = 1;
  int ver_max_order = -1;
  std::string ver_backend = "exact";
  double ver_tolerance = 1e-9;
  int ver_workers = 0;
  double ver_budget = 0.0;
  bool ver_words = false;
  OutputContext ver_ctx;
  ver_cmd->add_option("--kind", ver_kind, "udd|periodic|cdd|hahn|free")->capture_default_str();
  ver_cmd->add_option("--order,-n", ver_order, "sequence order")->capture_default_str();
  ver_cmd->add_option("--max-order", ver_max_order,
                      "largest expansion order to check (default: order for udd, pulse count + 1 otherwise)");
  ver_cmd->add_option("--backend", ver_backend, "exact|float")->capture_default_str();
  ver_cmd->add_option("--tolerance", ver_tolerance, "float backend relative zero threshold")
      ->capture_default_str();
  ver_cmd->add_option("--workers", ver_workers, "worker threads (0 = hardware)")
      ->capture_default_str();
  ver_cmd->add_option("--time-budget", ver_budget,
                      "seconds before reporting inconclusive (0 = unlimited)")
      ->capture_default_str();
  ver_cmd->add_flag("--words-csv", ver_words, "also write per-word results");
  add_output_options(ver_cmd, ver_ctx, "verify");

  // scaling
  auto* sc_cmd = app.add_subcommand("scaling", "fit the echo-deficit power law");
  int sc_dim = 4;
  std::uint64_t sc_seed = 1;
  std::string sc_kind = "udd";
  int sc_order = 1;
  double sc_tmin = 0.04, sc_tmax = 0.22;
  int sc_points = 12;
  double sc_floor = 1e-13;
  OutputContext sc_ctx;
  sc_cmd->add_option("--dim", sc_dim, "model dimension")->capture_default_str();
  sc_cmd->add_option("--seed", sc_seed, "model seed")->capture_default_str();
  sc_cmd->add_option("--kind", sc_kind, "free|hahn|periodic|udd|cdd")->capture_default_str();
  sc_cmd->add_option("--order,-n", sc_order, "sequence order")->capture_default_str();
  sc_cmd->add_option("--tmin", sc_tmin, "grid start")->capture_default_str();
  sc_cmd->add_option("--tmax", sc_tmax, "grid end")->capture_default_str();
  sc_cmd->add_option("--points", sc_points, "grid points")->capture_default_str();
  sc_cmd->add_option("--noise-floor", sc_floor, "discard deficits below this")
      ->capture_default_str();
  add_output_options(sc_cmd, sc_ctx, "scaling");

  // spinbath
  auto* sb_cmd = app.add_subcommand("spinbath", "pair-cluster spin-bath echo curves");
  std::string sb_config;
  std::vector<std::string> sb_seqs{"hahn"};
  double sb_tmin = 0.3, sb_tmax = 3.0;
  int sb_points = 9;
  double sb_cutoff = 0.0;
  bool sb_exact = false;
  OutputContext sb_ctx;
  sb_cmd->add_option("--config", sb_config, "bath config JSON path")->required();
  sb_cmd->add_option("--seq", sb_seqs, "sequences, e.g. hahn udd:2 cdd:3")->capture_default_str();
  sb_cmd->add_option("--tmin", sb_tmin, "grid start")->capture_default_str();
  sb_cmd->add_option("--tmax", sb_tmax, "grid end")->capture_default_str();
  sb_cmd->add_option("--points", sb_points, "grid points")->capture_default_str();
  sb_cmd->add_option("--cutoff", sb_cutoff,
                     "pair distance cutoff (>0 explicit, 0 auto 99% of sum b^2, <0 all pairs)")
      ->capture_default_str();
  sb_cmd->add_flag("--exact", sb_exact, "add exact-oracle columns (N <= 12)");
  add_output_options(sb_cmd, sb_ctx, "spinbath");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (seq_cmd->parsed())
      return run_sequence(dd::sequence_kind_from_string(seq_kind), seq_order, seq_time,
                          seq_format, seq_ctx, started);
    if (ver_cmd->parsed()) {
      const dd::SequenceKind kind = dd::sequence_kind_from_string(ver_kind);
      if (kind == dd::SequenceKind::Hahn) ver_order = 1;
      if (kind == dd::SequenceKind::Free) ver_order = 0;
      const int max_order =
          (ver_max_order > 0) ? ver_max_order : default_max_order(kind, ver_order);
      return run_verify(kind, ver_order, max_order, ver_backend, ver_tolerance, ver_workers,
                        ver_budget, ver_words, ver_ctx, started);
    }
    if (sc_cmd->parsed())
      return run_scaling(sc_dim, sc_seed, dd::sequence_kind_from_string(sc_kind), sc_order,
                         sc_tmin, sc_tmax, sc_points, sc_floor, sc_ctx, started);
    if (sb_cmd->parsed())
      return run_spinbath(sb_config, sb_seqs, sb_tmin, sb_tmax, sb_points, sb_cutoff, sb_exact,
                          sb_ctx, started);
  } catch (const dd::ResourceError& e) {
    std::cerr << "ddtool: resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const dd::UnderflowError& e) {
    std::cerr << "ddtool: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ddtool: invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ddtool: error: " << e.what() << "\n";
    return kExitResource;
  }
  return kExitUsage;
}
