// cvbdm: compare coefficients of variation of two populations with the
// Bayesian discrepancy measure.

#include "cvbdm/compare.hpp"
#include "cvbdm/error.hpp"
#include "cvbdm/io/data.hpp"
#include "cvbdm/io/report.hpp"
#include "cvbdm/io/toml_config.hpp"
#include "cvbdm/mcmc/trace_io.hpp"
#include "cvbdm/models.hpp"
#include "cvbdm/simulation/bootstrap.hpp"
#include "cvbdm/simulation/reproduce.hpp"
#include "cvbdm/simulation/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace cvbdm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitMissingData = 4;

/// Flags shared by the subcommands. Unset optionals leave the config file
/// (or built-in default) value in place.
struct CommonFlags {
  std::string config_path;
  std::string model;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> draws;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  std::optional<unsigned> workers;
  std::string output;
  bool emit_traces = false;
  bool no_timestamp = false;
  std::string format;
};

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "TOML run configuration (flags override it)");
  cmd->add_option("--model", f.model, "normal | invgauss | skewnormal | negbin");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--draws", f.draws, "Conjugate CV draws per population (normal model)");
  cmd->add_option("--iterations", f.iterations, "MCMC iterations per chain");
  cmd->add_option("--burn-in", f.burn_in, "MCMC burn-in iterations");
  cmd->add_option("--thin", f.thin, "MCMC thinning interval");
  cmd->add_option("--workers", f.workers, "Worker threads (0: all hardware threads)");
  cmd->add_option("--output", f.output, "Output file (default: stdout)");
}

io::RunConfig resolve_config(const CommonFlags& f) {
  io::RunConfig c = f.config_path.empty() ? io::RunConfig{} : io::load_run_config(f.config_path);
  if (!f.model.empty()) c.model = parse_model(f.model);
  if (f.seed) c.seed = *f.seed;
  if (f.draws) c.n_cv_draws = *f.draws;
  if (f.iterations) c.iterations = *f.iterations;
  if (f.burn_in) c.burn_in = *f.burn_in;
  if (f.thin) c.thin = *f.thin;
  if (f.workers) c.workers = *f.workers;
  if (f.emit_traces) c.emit_traces = true;
  if (f.no_timestamp) c.timestamp = false;
  if (!f.format.empty()) {
    if (f.format != "json" && f.format != "csv") throw InputError("--format must be json or csv");
    c.output_format = f.format;
  }
  return c;
}

CvRequest make_request(const io::RunConfig& c) {
  CvRequest r;
  if (c.n_cv_draws) r.n_draws = *c.n_cv_draws;
  if (r.n_draws == 0) throw InputError("--draws must be positive");
  if (c.model != ModelKind::normal && (c.iterations || c.burn_in || c.thin)) {
    mcmc::SamplerConfig s = default_sampler_config(c.model);
    if (c.iterations) s.n_iterations = *c.iterations;
    if (c.burn_in) s.burn_in = *c.burn_in;
    if (c.thin) s.thin = *c.thin;
    r.sampler = s;
  }
  return r;
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

fs::path sibling_dir(const std::string& output) {
  if (output.empty()) return fs::current_path();
  const fs::path p = fs::absolute(output).parent_path();
  return p.empty() ? fs::current_path() : p;
}

void write_traces(Comparison& c, const fs::path& dir) {
  CvDrawResult* pops[2] = {&c.population1, &c.population2};
  for (int l = 0; l < 2; ++l) {
    auto& pop = *pops[l];
    if (!pop.parameters || !pop.chain) continue;
    const std::string stem = "population" + std::to_string(l + 1);
    const fs::path trace = dir / (stem + "_trace.csv");
    mcmc::save_trace_csv(trace.string(), *pop.parameters);
    std::ofstream acf(dir / (stem + "_acf.csv"));
    mcmc::write_acf_csv(acf, pop.chain->names, pop.chain->acf);
    pop.chain->trace_path = trace.string();
  }
}

std::string compare_csv(const Comparison& c) {
  std::ostringstream out;
  out << std::setprecision(10)
      << "delta_h,p_a,p_b,mc_se,external_side,posterior_median,n_draws,converged,unimodal\n"
      << c.bdm.delta_h << ',' << c.bdm.p_a << ',' << c.bdm.p_b << ',' << c.bdm.mc_se << ','
      << to_string(c.bdm.external_side) << ',' << c.bdm.posterior_median.value_or(0.0) << ','
      << c.bdm.n_draws << ',' << (c.converged() ? "true" : "false") << ','
      << (c.unimodality ? (c.unimodality->passed ? "true" : "false") : "") << '\n';
  return out.str();
}

int cmd_compare(const std::string& file1, const std::string& file2, const CommonFlags& flags) {
  const io::RunConfig config = resolve_config(flags);
  const CvRequest request = make_request(config);
  const Sample s1 = io::read_sample_file(file1);
  const Sample s2 = io::read_sample_file(file2);
  const unsigned workers = config.workers == 0 ? 2 : config.workers;
  Comparison c = compare_cv(config.model, s1, s2, request, config.seed, workers);
  if (config.emit_traces) write_traces(c, sibling_dir(flags.output));

  for (const auto* pop : {&c.population1, &c.population2}) {
    for (const auto& w : pop->warnings) std::cerr << "warning: " << w << '\n';
  }
  if (config.output_format == "csv") {
    emit(flags.output, compare_csv(c));
  } else {
    emit(flags.output, io::comparison_report(file1, s1, file2, s2, c, config, request).dump(2) + "\n");
  }
  if (!c.converged()) {
    std::cerr << "error: an MCMC chain failed the convergence gate (see report)\n";
    return kExitConvergence;
  }
  return kExitOk;
}

void print_cells(const std::vector<simulation::StudyCell>& cells, const char* label) {
  std::printf("%6s %6s %9s %8s %8s %17s\n", "n1", "n2", label, "count", "rate", "95% CI");
  for (const auto& c : cells) {
    std::printf("%6zu %6zu %9.4g %8zu %8.4f   [%.4f, %.4f]\n", c.n1, c.n2, c.threshold, c.exceed, c.rate,
                c.mc_ci.low, c.mc_ci.high);
  }
}

int cmd_simulate(const std::string& grid_path, bool full_scale, const CommonFlags& flags) {
  io::StudyFile study = io::load_study_file(grid_path);
  if (full_scale) study.apply_full_scale();
  if (flags.seed) study.grid.master_seed = *flags.seed;
  if (flags.workers) study.grid.workers = *flags.workers;
  auto& g = study.grid;

  io::Json summary;
  summary["format_version"] = io::kReportFormatVersion;
  summary["software_version"] = CVBDM_VERSION;
  summary["study"] = io::to_string(study.kind);
  summary["name"] = g.name;
  summary["model"] = to_string(g.model);
  summary["seed"] = g.master_seed;
  summary["replications"] = g.n_replications;
  std::vector<simulation::StudyCell> cells;

  switch (study.kind) {
    case io::StudyKind::fncr:
    case io::StudyKind::consistency: {
      summary["posterior_draws"] = g.n_posterior_draws;
      const auto result = study.kind == io::StudyKind::fncr ? simulation::run_fncr_study(g)
                                                            : simulation::run_consistency_study(g);
      cells = result.cells;
      io::Json sizes = io::Json::array();
      for (const auto& s : result.sizes) {
        sizes.push_back({{"n1", s.n1}, {"n2", s.n2}, {"median_delta", s.median_delta}, {"mean_delta", s.mean_delta}});
      }
      summary["sizes"] = sizes;
      print_cells(cells, "threshold");
      for (const auto& s : result.sizes) {
        std::printf("n1=%zu n2=%zu median delta_H %.4f\n", s.n1, s.n2, s.median_delta);
      }
      break;
    }
    case io::StudyKind::uniformity: {
      summary["posterior_draws"] = g.n_posterior_draws;
      const auto ks = simulation::run_uniformity_check(g);
      summary["ks_statistic"] = ks.statistic;
      summary["ks_p_value"] = ks.p_value;
      summary["n_deltas"] = ks.n;
      std::printf("KS statistic %.5f, p-value %.4f over %zu values\n", ks.statistic, ks.p_value, ks.n);
      break;
    }
    case io::StudyKind::bootstrap: {
      summary["bootstrap_resamples"] = study.bootstrap_resamples;
      cells = simulation::run_bootstrap_study(study.bootstrap_grid());
      print_cells(cells, "level");
      break;
    }
  }
  io::Json jcells = io::Json::array();
  for (const auto& c : cells) jcells.push_back(io::cell_json(c));
  summary["cells"] = jcells;

  if (!flags.output.empty()) {
    std::ofstream csv(flags.output + "_cells.csv");
    if (!csv) throw InputError("cannot write " + flags.output + "_cells.csv");
    io::write_cells_csv(csv, cells);
    emit(flags.output + "_summary.json", summary.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_reproduce(const std::string& name, const std::string& data_dir, const CommonFlags& flags) {
  const auto example = simulation::parse_example(name);
  CommonFlags f = flags;
  f.model = to_string(simulation::example_model(example));
  io::RunConfig config = resolve_config(f);
  config.model = simulation::example_model(example);
  simulation::ReproduceConfig rc;
  if (!data_dir.empty()) rc.data_dir = data_dir;
  rc.request = make_request(config);
  rc.seed = config.seed;
  rc.workers = config.workers == 0 ? 2 : config.workers;
  const auto rows = simulation::reproduce_example(example, rc);

  std::printf("%-16s %6s %8s %6s %8s %9s %8s\n", "row", "n1", "cv1", "n2", "cv2", "delta_H", "mc_se");
  io::Json out = io::Json::array();
  bool converged = true;
  for (const auto& r : rows) {
    std::printf("%-16s %6zu %8.4f %6zu %8.4f %9.4f %8.4f\n", r.name.c_str(), r.sample1.n(),
                r.sample1.cv_estimate(), r.sample2.n(), r.sample2.cv_estimate(), r.comparison.bdm.delta_h,
                r.comparison.bdm.mc_se);
    io::Json j = io::comparison_report(r.name + ":1", r.sample1, r.name + ":2", r.sample2, r.comparison, config,
                                       rc.request);
    j["row"] = r.name;
    out.push_back(j);
    converged = converged && r.comparison.converged();
  }
  if (!flags.output.empty()) emit(flags.output, out.dump(2) + "\n");
  if (!converged) {
    std::cerr << "error: an MCMC chain failed the convergence gate\n";
    return kExitConvergence;
  }
  return kExitOk;
}

int cmd_diagnose(const std::string& trace_path, std::size_t lags, const std::string& output) {
  const auto draws = mcmc::load_trace_csv(trace_path);
  mcmc::ChainReport report;
  mcmc::fill_diagnostics(report, draws, lags);
  std::printf("%-12s %10s %10s %10s\n", "coordinate", "ESS", "ESS/n", "Geweke z");
  for (std::size_t j = 0; j < report.names.size(); ++j) {
    std::printf("%-12s %10.1f %10.4f %10.3f\n", report.names[j].c_str(), report.ess[j],
                report.ess[j] / static_cast<double>(draws.rows()), report.geweke[j]);
  }
  std::printf("draws: %zu\n", draws.rows());
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw InputError("cannot write " + output);
    mcmc::write_acf_csv(out, report.names, report.acf);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian discrepancy measure for comparing coefficients of variation"};
  app.set_version_flag("--version", std::string(CVBDM_VERSION));
  app.require_subcommand(1);

  CommonFlags compare_flags;
  std::string data1, data2;
  auto* compare = app.add_subcommand("compare", "Compare the CVs of two populations");
  compare->add_option("data1", data1, "Population 1 data file")->required()->check(CLI::ExistingFile);
  compare->add_option("data2", data2, "Population 2 data file")->required()->check(CLI::ExistingFile);
  add_run_flags(compare, compare_flags);
  compare->add_flag("--emit-traces", compare_flags.emit_traces, "Write chain traces and ACFs next to the output");
  compare->add_flag("--no-timestamp", compare_flags.no_timestamp, "Omit the timestamp from the report");
  compare->add_option("--format", compare_flags.format, "json | csv");

  CommonFlags sim_flags;
  std::string grid;
  bool full_scale = false;
  auto* simulate = app.add_subcommand("simulate", "Run a replication study from a TOML grid");
  simulate->add_option("grid", grid, "Study grid file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim_flags.seed, "Override the grid's master seed");
  simulate->add_option("--workers", sim_flags.workers, "Worker threads (0: all hardware threads)");
  simulate->add_option("--output", sim_flags.output, "Prefix for <prefix>_cells.csv and <prefix>_summary.json");
  simulate->add_flag("--full-scale", full_scale, "Use the grid's full-scale replication and draw counts");

  CommonFlags rep_flags;
  std::string example, data_dir;
  auto* reproduce = app.add_subcommand("reproduce", "Run a worked example");
  reproduce->add_option("example", example, "anthropometric | hodgkin | mirna | covid")->required();
  reproduce->add_option("--data-dir", data_dir,
                        std::string("Data directory (default: $") + simulation::kDataDirEnv + ")");
  reproduce->add_option("--seed", rep_flags.seed, "Master seed");
  reproduce->add_option("--draws", rep_flags.draws, "Conjugate CV draws per population (normal model)");
  reproduce->add_option("--iterations", rep_flags.iterations, "MCMC iterations per chain");
  reproduce->add_option("--burn-in", rep_flags.burn_in, "MCMC burn-in iterations");
  reproduce->add_option("--thin", rep_flags.thin, "MCMC thinning interval");
  reproduce->add_option("--workers", rep_flags.workers, "Worker threads");
  reproduce->add_option("--output", rep_flags.output, "Write per-row JSON reports to this file");
  reproduce->add_flag("--no-timestamp", rep_flags.no_timestamp, "Omit timestamps from the reports");

  std::string trace, acf_out;
  std::size_t lags = mcmc::kDefaultAcfLags;
  auto* diagnose = app.add_subcommand("diagnose", "Recompute chain diagnostics from a trace CSV");
  diagnose->add_option("trace", trace, "Trace CSV (iteration,<coordinates>)")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--lags", lags, "Largest ACF lag")->capture_default_str();
  diagnose->add_option("--output", acf_out, "Write the ACF as CSV (lag,<coordinates>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*compare) return cmd_compare(data1, data2, compare_flags);
    if (*simulate) return cmd_simulate(grid, full_scale, sim_flags);
    if (*reproduce) return cmd_reproduce(example, data_dir, rep_flags);
    if (*diagnose) return cmd_diagnose(trace, lags, acf_out);
  } catch (const DataUnavailableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingData;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UndefinedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
