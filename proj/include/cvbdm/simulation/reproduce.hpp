#ifndef CVBDM_SIMULATION_REPRODUCE_HPP
#define CVBDM_SIMULATION_REPRODUCE_HPP

#include "cvbdm/compare.hpp"
#include "cvbdm/error.hpp"
#include "cvbdm/io/data.hpp"
#include "cvbdm/models.hpp"
#include "cvbdm/random.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace cvbdm::simulation {

enum class Example { anthropometric, hodgkin, mirna, covid };

inline const char* to_string(Example e) noexcept {
  switch (e) {
    case Example::anthropometric: return "anthropometric";
    case Example::hodgkin: return "hodgkin";
    case Example::mirna: return "mirna";
    case Example::covid: return "covid";
  }
  return "anthropometric";
}

inline Example parse_example(const std::string& name) {
  for (auto e : {Example::anthropometric, Example::hodgkin, Example::mirna, Example::covid}) {
    if (name == to_string(e)) return e;
  }
  throw InputError("unknown example '" + name + "' (expected anthropometric, hodgkin, mirna or covid)");
}

inline ModelKind example_model(Example e) noexcept {
  switch (e) {
    case Example::anthropometric: return ModelKind::normal;
    case Example::hodgkin: return ModelKind::invgauss;
    case Example::mirna: return ModelKind::skewnormal;
    case Example::covid: return ModelKind::negbin;
  }
  return ModelKind::normal;
}

/// Environment variable naming the default data directory.
inline constexpr const char* kDataDirEnv = "CVBDM_DATA_DIR";
inline constexpr const char* kAnthropometricFile = "table3_anthropometric.csv";

/// $CVBDM_DATA_DIR if set, otherwise the data directory of the source tree
/// (when known at build time), otherwise ./data.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') return env;
#ifdef CVBDM_SOURCE_DATA_DIR
  return CVBDM_SOURCE_DATA_DIR;
#else
  return "data";
#endif
}

/// Where the bundled summary table lives when the data directory lacks one.
inline std::filesystem::path bundled_anthropometric_table() {
#ifdef CVBDM_SOURCE_DATA_DIR
  return std::filesystem::path(CVBDM_SOURCE_DATA_DIR) / kAnthropometricFile;
#else
  return std::filesystem::path("data") / kAnthropometricFile;
#endif
}

struct ReproduceConfig {
  std::filesystem::path data_dir = default_data_dir();
  CvRequest request;
  std::uint64_t seed = 20240607;
  unsigned workers = 2;
};

struct ReproduceRow {
  std::string name;
  Sample sample1;
  Sample sample2;
  Comparison comparison;
};

struct ExampleFiles {
  std::string source;
  std::vector<std::pair<std::string, std::pair<std::filesystem::path, std::filesystem::path>>> rows;
};

namespace detail {

inline void require_files(const ExampleFiles& files, const std::string& example,
                          const std::filesystem::path& dir) {
  if (files.rows.empty()) {
    throw DataUnavailableError("reproduce " + example + ": no data files found in " + dir.string() +
                                   " (source: " + files.source + ")",
                               files.source);
  }
  for (const auto& [name, paths] : files.rows) {
    for (const auto& p : {paths.first, paths.second}) {
      if (!std::filesystem::exists(p)) {
        throw DataUnavailableError("reproduce " + example + ": missing data file " + p.string() +
                                       " (source: " + files.source + ")",
                                   files.source);
      }
    }
  }
}

}  // namespace detail

/// Files each example reads from the data directory. Population files use
/// the formats of io::read_sample.
///   hodgkin: hodgkin_active.csv, hodgkin_inactive.csv
///   mirna:   mirna_<id>_healthy.csv with mirna_<id>_tumor.csv, one row per id
///   covid:   covid_india.csv, covid_hongkong.csv
inline ExampleFiles example_files(Example e, const std::filesystem::path& dir) {
  ExampleFiles f;
  switch (e) {
    case Example::anthropometric:
      f.source = "anthropometric summary table (bundled)";
      break;
    case Example::hodgkin:
      f.source = "Chhikara and Folks (1989), plasma bradykininogen levels in active and inactive "
                 "Hodgkin's disease";
      f.rows.push_back({"hodgkin", {dir / "hodgkin_active.csv", dir / "hodgkin_inactive.csv"}});
      break;
    case Example::mirna: {
      f.source = "Gene Expression Omnibus series GSE18392 (colon cancer miRNA expression)";
      std::error_code ec;
      std::vector<std::string> ids;
      for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const std::string file = entry.path().filename().string();
        const std::string prefix = "mirna_";
        const std::string suffix = "_healthy.csv";
        if (file.size() > prefix.size() + suffix.size() && file.rfind(prefix, 0) == 0 &&
            file.compare(file.size() - suffix.size(), suffix.size(), suffix) == 0) {
          ids.push_back(file.substr(prefix.size(), file.size() - prefix.size() - suffix.size()));
        }
      }
      std::sort(ids.begin(), ids.end());
      for (const auto& id : ids) {
        f.rows.push_back({id, {dir / ("mirna_" + id + "_healthy.csv"), dir / ("mirna_" + id + "_tumor.csv")}});
      }
      break;
    }
    case Example::covid:
      f.source = "offspring distributions of Laxminarayan et al. (2020, India) and Adam et al. "
                 "(2020, Hong Kong)";
      f.rows.push_back({"covid", {dir / "covid_india.csv", dir / "covid_hongkong.csv"}});
      break;
  }
  return f;
}

/// Runs a worked example. Row k compares its two groups with seed
/// derive_seed(config.seed, k).
inline std::vector<ReproduceRow> reproduce_example(Example example, const ReproduceConfig& config) {
  const ModelKind model = example_model(example);
  std::vector<std::tuple<std::string, Sample, Sample>> inputs;
  if (example == Example::anthropometric) {
    auto path = config.data_dir / kAnthropometricFile;
    if (!std::filesystem::exists(path)) path = bundled_anthropometric_table();
    if (!std::filesystem::exists(path)) {
      throw DataUnavailableError("reproduce anthropometric: summary table not found at " + path.string(),
                                 "bundled anthropometric summary table");
    }
    for (auto& row : io::read_summary_table_file(path)) {
      inputs.emplace_back(row.name, std::move(row.group1), std::move(row.group2));
    }
  } else {
    const auto files = example_files(example, config.data_dir);
    detail::require_files(files, to_string(example), config.data_dir);
    for (const auto& [name, paths] : files.rows) {
      inputs.emplace_back(name, io::read_sample_file(paths.first), io::read_sample_file(paths.second));
    }
  }
  std::vector<ReproduceRow> rows;
  rows.reserve(inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto& [name, s1, s2] = inputs[k];
    Comparison c = compare_cv(model, s1, s2, config.request, derive_seed(config.seed, k), config.workers);
    rows.push_back({name, std::move(s1), std::move(s2), std::move(c)});
  }
  return rows;
}

}  // namespace cvbdm::simulation

#endif  // CVBDM_SIMULATION_REPRODUCE_HPP
