#ifndef CVBDM_IO_TOML_CONFIG_HPP
#define CVBDM_IO_TOML_CONFIG_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/models/model_kind.hpp"
#include "cvbdm/models/simulate.hpp"
#include "cvbdm/simulation/bootstrap.hpp"
#include "cvbdm/simulation/study.hpp"

#include <toml.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cvbdm::io {

namespace detail {

inline std::string where(const toml::node& node, const std::string& label) {
  return label + ":" + std::to_string(node.source().begin.line) + ": ";
}

inline toml::table parse_toml(std::string_view text, const std::string& label) {
  try {
    return toml::parse(text, label);
  } catch (const toml::parse_error& e) {
    throw InputError(label + ":" + std::to_string(e.source().begin.line) + ": TOML parse error: " +
                     std::string(e.description()));
  }
}

inline toml::table parse_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_toml(text, path.string());
}

inline double get_real(const toml::node& node, const std::string& key, const std::string& label) {
  if (auto v = node.value<double>()) return *v;
  throw InputError(where(node, label) + "'" + key + "' must be a number");
}

inline std::int64_t get_int(const toml::node& node, const std::string& key, const std::string& label) {
  if (node.is_integer()) return node.as_integer()->get();
  throw InputError(where(node, label) + "'" + key + "' must be an integer");
}

inline std::size_t get_count(const toml::node& node, const std::string& key, const std::string& label) {
  const auto v = get_int(node, key, label);
  if (v < 0) throw InputError(where(node, label) + "'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

inline std::string get_string(const toml::node& node, const std::string& key, const std::string& label) {
  if (auto v = node.value<std::string>()) return *v;
  throw InputError(where(node, label) + "'" + key + "' must be a string");
}

inline bool get_bool(const toml::node& node, const std::string& key, const std::string& label) {
  if (auto v = node.value<bool>()) return *v;
  throw InputError(where(node, label) + "'" + key + "' must be a boolean");
}

inline void reject_unknown(const toml::table& table, std::initializer_list<std::string_view> known,
                           const std::string& label) {
  for (const auto& [key, node] : table) {
    bool ok = false;
    for (auto k : known) ok = ok || key.str() == k;
    if (!ok) throw InputError(where(node, label) + "unknown key '" + std::string(key.str()) + "'");
  }
}

/// Parameter names per model, in TrueParams order.
inline std::vector<std::string_view> param_names(ModelKind model) {
  switch (model) {
    case ModelKind::normal: return {"mean", "sd"};
    case ModelKind::invgauss: return {"mu", "lambda"};
    case ModelKind::skewnormal: return {"mu", "sigma", "lambda"};
    case ModelKind::negbin: return {"alpha", "beta"};
  }
  return {};
}

inline TrueParams read_population(const toml::table& root, const std::string& key, ModelKind model,
                                  const std::string& label) {
  const auto* node = root.get(key);
  if (node == nullptr || !node->is_table()) {
    throw InputError(label + ": missing table [" + key + "]");
  }
  const auto& table = *node->as_table();
  const auto names = param_names(model);
  std::vector<std::string_view> known(names.begin(), names.end());
  for (const auto& [k, v] : table) {
    bool ok = false;
    for (auto n : known) ok = ok || k.str() == n;
    if (!ok) {
      throw InputError(where(v, label) + "unknown parameter '" + std::string(k.str()) + "' for model " +
                       to_string(model));
    }
  }
  double values[3] = {0.0, 1.0, 0.0};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto* v = table.get(names[i]);
    if (v == nullptr) {
      throw InputError(where(table, label) + "[" + key + "] lacks '" + std::string(names[i]) + "'");
    }
    values[i] = get_real(*v, std::string(names[i]), label);
  }
  return {values[0], values[1], values[2]};
}

}  // namespace detail

/// Settings shared by the CLI subcommands. Values come from an optional TOML
/// file; command-line flags override them.
struct RunConfig {
  ModelKind model = ModelKind::normal;
  std::uint64_t seed = 20240607;
  std::optional<std::size_t> n_cv_draws;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thin;
  bool emit_traces = false;
  std::string output_format = "json";
  unsigned workers = 0;
  bool timestamp = true;
};

/// Keys: model, seed, draws, iterations, burn_in, thin, emit_traces,
/// output_format ("json" or "csv"), workers, timestamp.
inline RunConfig parse_run_config(std::string_view text, const std::string& label) {
  const auto root = detail::parse_toml(text, label);
  detail::reject_unknown(root, {"model", "seed", "draws", "iterations", "burn_in", "thin", "emit_traces",
                                "output_format", "workers", "timestamp"},
                         label);
  RunConfig c;
  if (const auto* n = root.get("model")) c.model = parse_model(detail::get_string(*n, "model", label));
  if (const auto* n = root.get("seed")) c.seed = static_cast<std::uint64_t>(detail::get_count(*n, "seed", label));
  if (const auto* n = root.get("draws")) c.n_cv_draws = detail::get_count(*n, "draws", label);
  if (const auto* n = root.get("iterations")) c.iterations = detail::get_count(*n, "iterations", label);
  if (const auto* n = root.get("burn_in")) c.burn_in = detail::get_count(*n, "burn_in", label);
  if (const auto* n = root.get("thin")) c.thin = detail::get_count(*n, "thin", label);
  if (const auto* n = root.get("emit_traces")) c.emit_traces = detail::get_bool(*n, "emit_traces", label);
  if (const auto* n = root.get("workers")) c.workers = static_cast<unsigned>(detail::get_count(*n, "workers", label));
  if (const auto* n = root.get("timestamp")) c.timestamp = detail::get_bool(*n, "timestamp", label);
  if (const auto* n = root.get("output_format")) {
    c.output_format = detail::get_string(*n, "output_format", label);
    if (c.output_format != "json" && c.output_format != "csv") {
      throw InputError(detail::where(*n, label) + "output_format must be json or csv");
    }
  }
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text, path.string());
}

enum class StudyKind { fncr, consistency, uniformity, bootstrap };

inline const char* to_string(StudyKind k) noexcept {
  switch (k) {
    case StudyKind::fncr: return "fncr";
    case StudyKind::consistency: return "consistency";
    case StudyKind::uniformity: return "uniformity";
    case StudyKind::bootstrap: return "bootstrap";
  }
  return "fncr";
}

/// A study grid file. Layout:
///
///   study = "fncr"            # fncr | consistency | uniformity | bootstrap
///   name = "table1"
///   model = "normal"
///   seed = 1
///   replications = 5000
///   posterior_draws = 2000    # not used by bootstrap studies
///   thresholds = [0.90, 0.95, 0.99]   # significance levels for bootstrap
///   sample_sizes = [[10, 10], [100, 100]]
///   bootstrap_resamples = 500
///   [population1]             # parameter names depend on the model
///   mean = 3.0
///   sd = 1.0
///   [population2]
///   mean = 3.0
///   sd = 1.0
///   [full_scale]              # optional, applied by --full-scale
///   replications = 50000
///   posterior_draws = 10000
///   [sampler]                 # optional chain settings for MCMC models
///   iterations = 20000
///   burn_in = 5000
///   thin = 2
struct StudyFile {
  StudyKind kind = StudyKind::fncr;
  simulation::StudyGrid grid;
  std::size_t bootstrap_resamples = 500;
  std::optional<std::size_t> full_scale_replications;
  std::optional<std::size_t> full_scale_draws;

  /// Switches to the full-scale replication and draw counts, if given.
  void apply_full_scale() {
    if (full_scale_replications) grid.n_replications = *full_scale_replications;
    if (full_scale_draws) grid.n_posterior_draws = *full_scale_draws;
  }

  simulation::BootstrapStudyGrid bootstrap_grid() const {
    simulation::BootstrapStudyGrid b;
    b.model = grid.model;
    b.population1 = grid.population1;
    b.population2 = grid.population2;
    b.sample_sizes = grid.sample_sizes;
    b.levels = grid.thresholds;
    b.n_replications = grid.n_replications;
    b.n_boot = bootstrap_resamples;
    b.master_seed = grid.master_seed;
    b.workers = grid.workers;
    return b;
  }
};

inline StudyFile parse_study_file(std::string_view text, const std::string& label) {
  using namespace detail;
  const auto root = parse_toml(text, label);
  reject_unknown(root, {"study", "name", "model", "seed", "replications", "posterior_draws", "thresholds",
                        "sample_sizes", "bootstrap_resamples", "population1", "population2", "full_scale",
                        "sampler"},
                 label);
  StudyFile f;
  if (const auto* n = root.get("study")) {
    const auto s = get_string(*n, "study", label);
    if (s == "fncr") {
      f.kind = StudyKind::fncr;
    } else if (s == "consistency") {
      f.kind = StudyKind::consistency;
    } else if (s == "uniformity") {
      f.kind = StudyKind::uniformity;
    } else if (s == "bootstrap") {
      f.kind = StudyKind::bootstrap;
    } else {
      throw InputError(where(*n, label) + "unknown study '" + s + "'");
    }
  }
  auto& g = f.grid;
  if (const auto* n = root.get("name")) g.name = get_string(*n, "name", label);
  if (const auto* n = root.get("model")) {
    try {
      g.model = parse_model(get_string(*n, "model", label));
    } catch (const InputError& e) {
      throw InputError(where(*n, label) + e.what());
    }
  }
  if (const auto* n = root.get("seed")) g.master_seed = static_cast<std::uint64_t>(get_count(*n, "seed", label));
  if (const auto* n = root.get("replications")) g.n_replications = get_count(*n, "replications", label);
  if (const auto* n = root.get("posterior_draws")) g.n_posterior_draws = get_count(*n, "posterior_draws", label);
  if (const auto* n = root.get("bootstrap_resamples")) {
    f.bootstrap_resamples = get_count(*n, "bootstrap_resamples", label);
  }
  if (const auto* n = root.get("thresholds")) {
    const auto* arr = n->as_array();
    if (arr == nullptr) throw InputError(where(*n, label) + "'thresholds' must be an array");
    g.thresholds.clear();
    for (const auto& v : *arr) {
      const double t = get_real(v, "thresholds", label);
      if (!(t > 0.0 && t < 1.0)) throw InputError(where(v, label) + "thresholds must lie in (0, 1)");
      g.thresholds.push_back(t);
    }
  }
  if (const auto* n = root.get("sample_sizes")) {
    const auto* arr = n->as_array();
    if (arr == nullptr) throw InputError(where(*n, label) + "'sample_sizes' must be an array");
    g.sample_sizes.clear();
    for (const auto& v : *arr) {
      const auto* pair = v.as_array();
      if (pair == nullptr || pair->size() != 2) {
        throw InputError(where(v, label) + "each sample size must be a pair [n1, n2]");
      }
      g.sample_sizes.emplace_back(get_count(*pair->get(0), "sample_sizes", label),
                                  get_count(*pair->get(1), "sample_sizes", label));
    }
  }
  g.population1 = read_population(root, "population1", g.model, label);
  g.population2 = read_population(root, "population2", g.model, label);
  if (const auto* n = root.get("full_scale")) {
    const auto* t = n->as_table();
    if (t == nullptr) throw InputError(where(*n, label) + "[full_scale] must be a table");
    reject_unknown(*t, {"replications", "posterior_draws"}, label);
    if (const auto* v = t->get("replications")) f.full_scale_replications = get_count(*v, "replications", label);
    if (const auto* v = t->get("posterior_draws")) f.full_scale_draws = get_count(*v, "posterior_draws", label);
  }
  if (const auto* n = root.get("sampler")) {
    const auto* t = n->as_table();
    if (t == nullptr) throw InputError(where(*n, label) + "[sampler] must be a table");
    reject_unknown(*t, {"iterations", "burn_in", "thin"}, label);
    mcmc::SamplerConfig c = simulation::study_sampler_config(g.n_posterior_draws);
    if (const auto* v = t->get("iterations")) c.n_iterations = get_count(*v, "iterations", label);
    if (const auto* v = t->get("burn_in")) c.burn_in = get_count(*v, "burn_in", label);
    if (const auto* v = t->get("thin")) c.thin = get_count(*v, "thin", label);
    c.min_retained = std::min<std::size_t>(c.min_retained, c.retained());
    g.sampler = c;
  }
  try {
    if (f.kind == StudyKind::bootstrap) {
      simulation::validate_true_params(g.model, g.population1, "population1");
      simulation::validate_true_params(g.model, g.population2, "population2");
    } else {
      g.validate();
    }
  } catch (const InputError& e) {
    throw InputError(label + ": " + e.what());
  }
  return f;
}

inline StudyFile load_study_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grid file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_study_file(text, path.string());
}

}  // namespace cvbdm::io

#endif  // CVBDM_IO_TOML_CONFIG_HPP
