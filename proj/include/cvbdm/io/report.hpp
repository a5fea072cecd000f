#ifndef CVBDM_IO_REPORT_HPP
#define CVBDM_IO_REPORT_HPP

#include "cvbdm/compare.hpp"
#include "cvbdm/io/toml_config.hpp"
#include "cvbdm/models.hpp"
#include "cvbdm/simulation/bootstrap.hpp"
#include "cvbdm/simulation/study.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef CVBDM_VERSION
#define CVBDM_VERSION "unknown"
#endif

namespace cvbdm::io {

using Json = nlohmann::ordered_json;

/// Version of the comparison report layout described by
/// schemas/comparison_report.schema.json.
inline constexpr int kReportFormatVersion = 1;

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

/// Finite numbers as-is; infinities and NaN become null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json sample_json(const Sample& s) {
  Json j;
  j["n"] = s.n();
  j["mean"] = s.mean();
  j["sd"] = s.sd();
  j["cv_estimate"] = s.mean() != 0.0 ? Json(s.cv_estimate()) : Json(nullptr);
  j["raw_values"] = s.has_values();
  return j;
}

inline Json chain_json(const mcmc::ChainReport& r) {
  Json j;
  j["acceptance_rate"] = r.acceptance_rate;
  j["n_retained"] = r.n_retained;
  j["final_step_scales"] = r.final_step_scales;
  Json coords = Json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    Json c;
    c["name"] = r.names[i];
    c["ess"] = r.ess[i];
    c["geweke_z"] = number_or_null(r.geweke[i]);
    std::vector<double> head(r.acf[i].begin(),
                             r.acf[i].begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(11, r.acf[i].size())));
    c["acf_lag0_to_10"] = head;
    coords.push_back(c);
  }
  j["coordinates"] = coords;
  j["converged"] = r.converged;
  j["trace_path"] = r.trace_path ? Json(*r.trace_path) : Json(nullptr);
  return j;
}

inline Json population_json(const std::string& label, const Sample& s, const CvDrawResult& r) {
  Json j;
  j["label"] = label;
  j["sample"] = sample_json(s);
  double sum = 0.0;
  for (double v : r.draws) sum += v;
  Json post;
  post["n_draws"] = r.draws.size();
  post["mean"] = sum / static_cast<double>(r.draws.size());
  post["n_rejected"] = r.n_rejected;
  j["cv_posterior"] = post;
  j["chain"] = r.chain ? chain_json(*r.chain) : Json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

inline Json bdm_json(const BdmResult& b) {
  Json j;
  j["delta_h"] = b.delta_h;
  j["p_a"] = b.p_a;
  j["p_b"] = b.p_b;
  j["mc_se"] = b.mc_se;
  j["external_side"] = to_string(b.external_side);
  j["posterior_median"] = b.posterior_median ? Json(*b.posterior_median) : Json(nullptr);
  j["n_draws"] = b.n_draws;
  return j;
}

inline Json config_json(const RunConfig& c, const CvRequest& request) {
  Json j;
  j["model"] = to_string(c.model);
  j["seed"] = c.seed;
  j["draws"] = request.n_draws;
  if (request.sampler) {
    j["iterations"] = request.sampler->n_iterations;
    j["burn_in"] = request.sampler->burn_in;
    j["thin"] = request.sampler->thin;
  } else {
    const auto d = default_sampler_config(c.model);
    j["iterations"] = d.n_iterations;
    j["burn_in"] = d.burn_in;
    j["thin"] = d.thin;
  }
  j["emit_traces"] = c.emit_traces;
  return j;
}

/// Report of one two-population comparison. With `timestamp` false the
/// output is a pure function of the inputs, configuration and seed.
inline Json comparison_report(const std::string& label1, const Sample& s1, const std::string& label2,
                              const Sample& s2, const Comparison& c, const RunConfig& config,
                              const CvRequest& request) {
  Json j;
  j["format_version"] = kReportFormatVersion;
  j["software_version"] = CVBDM_VERSION;
  if (config.timestamp) j["timestamp"] = utc_timestamp();
  j["hypothesis"] = "cv1 - cv2 = 0";
  j["model"] = to_string(config.model);
  const Json b = bdm_json(c.bdm);
  for (auto it = b.begin(); it != b.end(); ++it) j[it.key()] = it.value();
  j["converged"] = c.converged();
  if (c.unimodality) {
    j["unimodality"] = {{"mode_count", c.unimodality->mode_count},
                        {"bandwidth", c.unimodality->bandwidth},
                        {"passed", c.unimodality->passed}};
  } else {
    j["unimodality"] = nullptr;
  }
  j["populations"] = Json::array({population_json(label1, s1, c.population1),
                                  population_json(label2, s2, c.population2)});
  j["config"] = config_json(config, request);
  return j;
}

inline Json cell_json(const simulation::StudyCell& c) {
  return {{"n1", c.n1},         {"n2", c.n2},       {"threshold", c.threshold},
          {"exceed", c.exceed}, {"replications", c.replications}, {"rate", c.rate},
          {"ci_low", c.mc_ci.low}, {"ci_high", c.mc_ci.high}};
}

/// One CSV row per cell: n1,n2,threshold,exceed,replications,rate,ci_low,ci_high.
inline void write_cells_csv(std::ostream& out, const std::vector<simulation::StudyCell>& cells) {
  out << "n1,n2,threshold,exceed,replications,rate,ci_low,ci_high\n" << std::setprecision(10);
  for (const auto& c : cells) {
    out << c.n1 << ',' << c.n2 << ',' << c.threshold << ',' << c.exceed << ',' << c.replications << ','
        << c.rate << ',' << c.mc_ci.low << ',' << c.mc_ci.high << '\n';
  }
}

}  // namespace cvbdm::io

#endif  // CVBDM_IO_REPORT_HPP
