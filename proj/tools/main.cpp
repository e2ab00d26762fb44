// presym: command-line front door for the presymplectic spinning-particle
// toolkit. Four commands:
//   audit     - sample constrained points, check two-form rank and closedness
//   bmt       - weak-field convergence of the kernel flow onto the
//               linearized spin-precession flow, for both model presets
//   conserve  - integrate the kernel flow in a central field and report
//               energy / angular-momentum drift
//   spinorbit - extract the spin-orbit coupling coefficient from a family of
//               weak-field runs, stora and souriau side by side
//
// Exit codes: 0 success, 1 physics check failed, 2 integrator failure,
// 3 fit failure, 4 configuration/usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "presym/config.hpp"
#include "presym/dynamics.hpp"
#include "presym/io.hpp"
#include "presym/observables.hpp"
#include "presym/sampling.hpp"

namespace {

using namespace presym;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitIntegrator = 2;
constexpr int kExitFit = 3;
constexpr int kExitConfig = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::int64_t seed = -1;
  bool has_seed = false;
};

RunConfig resolve_config(const std::string& command, const CommonArgs& args) {
  RunConfig cfg = default_config(command);
  if (!args.config_path.empty()) {
    cfg = load_config_file(args.config_path, cfg);
  }
  if (args.has_seed) {
    if (args.seed < 0) throw ConfigError("--seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(args.seed);
  }
  if (!args.out_dir.empty()) cfg.directory = args.out_dir;
  if (!args.format.empty()) {
    if (args.format != "csv" && args.format != "json") {
      throw ConfigError("--format must be csv or json");
    }
    cfg.format = args.format;
  }
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.directory);
  return (std::filesystem::path(cfg.directory) / name).string();
}

void write_summary(const RunConfig& cfg, const std::string& stem,
                   const std::vector<SummaryItem>& items) {
  const auto echo = echo_items(cfg);
  if (cfg.format == "json") {
    const std::string path = out_path(cfg, stem + ".json");
    write_text_file(path, render_summary_json(echo, items));
    std::printf("wrote %s\n", path.c_str());
  } else {
    const std::string path = out_path(cfg, stem + ".csv");
    write_text_file(path, render_summary_csv(echo, items));
    std::printf("wrote %s\n", path.c_str());
  }
}

// Seeded constrained sample points for the audit: a radial shell around the
// configured radius for central fields (staying clear of the singularity),
// otherwise a ball of that radius.
std::vector<EvolutionPoint> audit_points(const RunConfig& cfg,
                                         const TwoFormModel& model) {
  auto rng = make_rng(cfg.seed);
  const double R = std::max(cfg.r.norm(), 1.0);
  std::vector<EvolutionPoint> pts;
  pts.reserve(static_cast<std::size_t>(cfg.n_points));
  for (int i = 0; i < cfg.n_points; ++i) {
    if (model.field.is_central()) {
      pts.push_back(random_point(rng, 0.5 * R, 1.5 * R, 0.7));
    } else {
      pts.push_back(random_point(rng, 0.0, R, 0.7));
    }
  }
  return pts;
}

int cmd_audit(const RunConfig& cfg) {
  const TwoFormModel model = make_model(cfg);
  const double bound = cfg.closedness_bound > 0.0
                           ? cfg.closedness_bound
                           : (cfg.preset == "free" ? 1e-8 : 1e-5);
  const auto points = audit_points(cfg, model);

  std::vector<std::vector<std::string>> rows;
  int bad_rank = 0;
  double worst_closedness = 0.0;
  double worst_maxwell = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const int rank = rank_at(model, p);
    const double closed = closedness_residual(model, p);
    const double maxwell = model.field.maxwell_residual(p.X);
    if (rank != 8) ++bad_rank;
    worst_closedness = std::max(worst_closedness, closed);
    worst_maxwell = std::max(worst_maxwell, maxwell);
    rows.push_back({std::to_string(i),
                    format_number(p.X.head<3>().norm()),
                    std::to_string(rank), format_number(closed),
                    format_number(maxwell)});
  }
  const bool pass = (bad_rank == 0) && (worst_closedness < bound);

  const std::string table_path = out_path(cfg, "audit_points.csv");
  write_text_file(
      table_path,
      render_table_csv(echo_items(cfg),
                       {"index", "radius", "rank", "closedness", "maxwell"},
                       rows));
  std::printf("wrote %s\n", table_path.c_str());

  write_summary(cfg, "audit_summary",
                {summary_count("n_points", cfg.n_points),
                 summary_count("n_rank_not_8", bad_rank),
                 summary_number("worst_closedness", worst_closedness),
                 summary_number("closedness_bound", bound),
                 summary_number("worst_maxwell", worst_maxwell),
                 summary_text("pass", pass ? "true" : "false")});

  std::printf("audit: %d points, %d with rank != 8, worst closedness %s "
              "(bound %s)\n",
              cfg.n_points, bad_rank, format_number(worst_closedness).c_str(),
              format_number(bound).c_str());
  std::printf(pass ? "PASS\n" : "FAIL\n");
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_bmt(const RunConfig& cfg) {
  const FieldModel field = make_field(cfg);
  const EvolutionPoint start = EvolutionPoint::from_lab(make_lab_state(cfg));

  std::vector<std::vector<std::string>> rows;
  std::vector<SummaryItem> items;
  bool pass = true;
  for (const char* preset : {"souriau", "stora"}) {
    TwoFormModel model;
    if (std::string(preset) == "souriau") {
      model.variant = ModelVariant::souriau;
      model.coeffs = ModelCoefficients::souriau(cfg.m, cfg.s, cfg.q, cfg.g);
    } else {
      model.variant = ModelVariant::stora;
      model.coeffs = ModelCoefficients::stora(cfg.m, cfg.s, cfg.q, cfg.g);
    }
    model.field = field;
    const auto study = convergence_study(model, start, cfg.eps_list,
                                         cfg.horizon, cfg.study_steps);
    for (const auto& row : study.rows) {
      rows.push_back({preset, format_number(row.eps),
                      format_number(row.deviation),
                      format_number(study.slope)});
    }
    const bool in_band = study.slope >= 1.8 && study.slope <= 2.2;
    if (!in_band) pass = false;
    if (!study.monotone) {
      std::printf("warning: %s deviations are not monotone in the field "
                  "scale; the study may be outside the asymptotic regime\n",
                  preset);
    }
    items.push_back(summary_number(std::string(preset) + ".slope",
                                   study.slope));
    items.push_back(summary_number(std::string(preset) + ".horizon",
                                   study.horizon));
    items.push_back(summary_number(std::string(preset) + ".h", study.h));
    items.push_back(summary_text(std::string(preset) + ".monotone",
                                 study.monotone ? "true" : "false"));
    std::printf("%s: slope %s over horizon %s\n", preset,
                format_number(study.slope).c_str(),
                format_number(study.horizon).c_str());
  }
  items.push_back(summary_text("pass", pass ? "true" : "false"));

  const std::string table_path = out_path(cfg, "bmt_rows.csv");
  write_text_file(table_path,
                  render_table_csv(echo_items(cfg),
                                   {"preset", "eps", "deviation", "slope"},
                                   rows));
  std::printf("wrote %s\n", table_path.c_str());
  write_summary(cfg, "bmt_summary", items);
  std::printf(pass ? "PASS\n" : "FAIL\n");
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_conserve(const RunConfig& cfg) {
  const TwoFormModel model = make_model(cfg);
  const EvolutionPoint start = EvolutionPoint::from_lab(make_lab_state(cfg));
  const IntegrationOptions options = make_integration_options(cfg);

  Trajectory traj;
  try {
    traj = integrate(model, start, FlowKind::kernel, options);
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr,
                 "integrator failure: %s\n"
                 "advice: reduce integration.h (currently %s) or project "
                 "more often (integration.project_every = %d)\n",
                 e.what(), format_number(options.h).c_str(),
                 options.project_every);
    return kExitIntegrator;
  }

  const auto report = conservation_report(model, traj);
  const bool pass = report.H_drift_rel < cfg.drift_bound &&
                    report.J_drift_rel < cfg.drift_bound;

  const std::string traj_path = out_path(cfg, "trajectory.csv");
  write_text_file(traj_path,
                  render_trajectory_csv(model, traj, echo_items(cfg)));
  std::printf("wrote %s\n", traj_path.c_str());

  write_summary(
      cfg, "conserve_summary",
      {summary_number("H0", report.H0),
       summary_number("H_drift_abs", report.H_drift_abs),
       summary_number("H_drift_rel", report.H_drift_rel),
       summary_number("J0_x", report.J0(0)),
       summary_number("J0_y", report.J0(1)),
       summary_number("J0_z", report.J0(2)),
       summary_number("J_drift_abs", report.J_drift_abs),
       summary_number("J_drift_rel", report.J_drift_rel),
       summary_number("max_constraint_drift", traj.max_drift),
       summary_number("drift_bound", cfg.drift_bound),
       summary_count("n_samples", static_cast<long long>(report.n_samples)),
       summary_text("pass", pass ? "true" : "false")});

  std::printf("conserve: H drift %s, J drift %s (bound %s)\n",
              format_number(report.H_drift_rel).c_str(),
              format_number(report.J_drift_rel).c_str(),
              format_number(cfg.drift_bound).c_str());
  std::printf(pass ? "PASS\n" : "FAIL\n");
  return pass ? kExitPass : kExitCheckFailed;
}

// Spin directions fanned around the circle spanned by the orbit normal and
// the radial direction, with a small seeded jitter so no member is special.
std::vector<LabFrameState> spin_orbit_family(const RunConfig& cfg) {
  if (cfg.family_size < 3) {
    throw ConfigError("experiment.family_size must be at least 3");
  }
  const Vec3 rhat = cfg.r.normalized();
  const Vec3 normal = cfg.r.cross(cfg.v);
  if (normal.norm() < 1e-12) {
    throw ConfigError(
        "state.r and state.v are collinear; the spin-orbit family needs a "
        "well-defined orbit plane");
  }
  const Vec3 nhat = normal.normalized();
  auto rng = make_rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::vector<LabFrameState> family;
  family.reserve(static_cast<std::size_t>(cfg.family_size));
  for (int i = 0; i < cfg.family_size; ++i) {
    const double theta =
        2.0 * M_PI * (i + 0.5) / cfg.family_size + jitter(rng);
    LabFrameState lab;
    lab.r = cfg.r;
    lab.t = cfg.t;
    lab.v = cfg.v;
    lab.u = std::cos(theta) * nhat + std::sin(theta) * rhat;
    family.push_back(lab);
  }
  return family;
}

int cmd_spinorbit(const RunConfig& cfg) {
  const FieldModel field = make_field(cfg);
  const auto family = spin_orbit_family(cfg);
  const double target = -(cfg.g - 1.0) * cfg.q / (2.0 * cfg.m * cfg.m);

  std::vector<std::vector<std::string>> rows;
  std::vector<SummaryItem> items;
  double stora_coeff = std::numeric_limits<double>::quiet_NaN();
  for (const char* preset : {"stora", "souriau"}) {
    TwoFormModel model;
    if (std::string(preset) == "stora") {
      model.variant = ModelVariant::stora;
      model.coeffs = ModelCoefficients::stora(cfg.m, cfg.s, cfg.q, cfg.g);
    } else {
      model.variant = ModelVariant::souriau;
      model.coeffs = ModelCoefficients::souriau(cfg.m, cfg.s, cfg.q, cfg.g);
    }
    model.field = field;
    SpinOrbitFit fit;
    try {
      fit = spin_orbit_fit(model, family, cfg.eps_list);
    } catch (const std::runtime_error& e) {
      std::fprintf(stderr, "fit failure (%s preset): %s\n", preset, e.what());
      return kExitFit;
    }
    if (std::string(preset) == "stora") stora_coeff = fit.coefficient;
    for (const auto& row : fit.rows) {
      rows.push_back({preset, format_number(row.eps), format_number(row.x),
                      format_number(row.y)});
    }
    const double rel_err =
        std::abs(fit.coefficient - fit.theory) /
        std::max(std::abs(fit.theory), 1e-300);
    items.push_back(summary_number(std::string(preset) + ".coefficient",
                                   fit.coefficient));
    items.push_back(summary_number(std::string(preset) + ".stderr",
                                   fit.coeff_stderr));
    items.push_back(
        summary_number(std::string(preset) + ".theory", fit.theory));
    items.push_back(
        summary_number(std::string(preset) + ".rel_err", rel_err));
    std::printf("%s: coefficient %s (theory %s, rel err %s)\n", preset,
                format_number(fit.coefficient).c_str(),
                format_number(fit.theory).c_str(),
                format_number(rel_err).c_str());
  }

  const double stora_err =
      std::abs(stora_coeff - target) / std::max(std::abs(target), 1e-300);
  const bool pass = stora_err <= 0.01;
  items.push_back(summary_number("target", target));
  items.push_back(summary_number("stora.target_rel_err", stora_err));
  items.push_back(summary_text("pass", pass ? "true" : "false"));

  const std::string table_path = out_path(cfg, "spinorbit_rows.csv");
  write_text_file(table_path,
                  render_table_csv(echo_items(cfg),
                                   {"preset", "eps", "x", "y"}, rows));
  std::printf("wrote %s\n", table_path.c_str());
  write_summary(cfg, "spinorbit_summary", items);
  std::printf("spinorbit: stora coefficient %s vs target %s (rel err %s)\n",
              format_number(stora_coeff).c_str(),
              format_number(target).c_str(),
              format_number(stora_err).c_str());
  std::printf(pass ? "PASS\n" : "FAIL\n");
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "presymplectic mechanics of spinning charged particles: audits, "
      "convergence studies, conservation runs and spin-orbit fits"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const std::vector<SubSpec> specs = {
      {"audit",
       "check two-form rank and closedness at seeded constrained points",
       &cmd_audit},
      {"bmt",
       "weak-field convergence of the kernel flow onto the linearized "
       "spin-precession flow (souriau and stora presets)",
       &cmd_bmt},
      {"conserve",
       "integrate the kernel flow and report energy/angular-momentum drift",
       &cmd_conserve},
      {"spinorbit",
       "fit the spin-orbit coupling coefficient (stora vs souriau presets)",
       &cmd_spinorbit},
  };

  std::vector<CommonArgs> args(specs.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CLI::App* sub = app.add_subcommand(specs[i].name, specs[i].help);
    sub->add_option("--config", args[i].config_path,
                    "configuration file (sectioned key = value)");
    sub->add_option("--out", args[i].out_dir, "output directory");
    auto* seed_opt =
        sub->add_option("--seed", args[i].seed, "override experiment.seed");
    sub->add_option("--format", args[i].format, "summary format: csv|json");
    sub->parse_complete_callback(
        [&args, i, seed_opt] { args[i].has_seed = seed_opt->count() > 0; });
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (subs[i]->parsed()) {
        const RunConfig cfg = resolve_config(specs[i].name, args[i]);
        return specs[i].run(cfg);
      }
    }
  } catch (const presym::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
