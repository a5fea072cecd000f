#ifndef CVBDM_MCMC_TRACE_IO_HPP
#define CVBDM_MCMC_TRACE_IO_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/chain.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cvbdm::mcmc {

/// Trace CSV, format version 1:
///   iteration,<coord 1>,...,<coord d>
///   1,<v>,...
/// `iteration` counts retained draws from 1.
inline constexpr int kTraceFormatVersion = 1;

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    std::string_view f = line.substr(start, pos == std::string_view::npos ? pos : pos - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    fields.push_back(f);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

inline double parse_double(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse number '" +
                     std::string(text) + "'");
  }
  return v;
}

}  // namespace detail

inline void write_trace_csv(std::ostream& out, const DrawMatrix& draws) {
  out << "iteration";
  for (const auto& name : draws.names()) out << ',' << name;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    out << (i + 1);
    for (double v : draws.row(i)) out << ',' << v;
    out << '\n';
  }
}

/// lag,<coord 1>,...  with one row per lag 0..L.
inline void write_acf_csv(std::ostream& out, const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& acf) {
  out << "lag";
  for (const auto& name : names) out << ',' << name;
  out << '\n' << std::setprecision(10);
  const std::size_t lags = acf.empty() ? 0 : acf.front().size();
  for (std::size_t k = 0; k < lags; ++k) {
    out << k;
    for (const auto& col : acf) out << ',' << (k < col.size() ? col[k] : 0.0);
    out << '\n';
  }
}

inline DrawMatrix read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() < 2 || fields[0] != "iteration") {
      throw InputError("trace CSV: line " + std::to_string(line_no) +
                       ": expected header 'iteration,<coordinate>,...'");
    }
    for (std::size_t j = 1; j < fields.size(); ++j) names.emplace_back(fields[j]);
    break;
  }
  if (names.empty()) throw InputError("trace CSV: empty file");
  DrawMatrix draws(names.size(), names);
  std::vector<double> row(names.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() != names.size() + 1) {
      throw InputError("trace CSV: line " + std::to_string(line_no) + ": expected " +
                       std::to_string(names.size() + 1) + " fields");
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      row[j] = detail::parse_double(fields[j + 1], line_no);
    }
    draws.push_row(row);
  }
  if (draws.rows() == 0) throw InputError("trace CSV: no draws");
  return draws;
}

inline void save_trace_csv(const std::string& path, const DrawMatrix& draws) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file " + path);
  write_trace_csv(out, draws);
}

inline DrawMatrix load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read trace file " + path);
  return read_trace_csv(in);
}

}  // namespace cvbdm::mcmc

#endif  // CVBDM_MCMC_TRACE_IO_HPP
