#ifndef CVBDM_IO_DATA_HPP
#define CVBDM_IO_DATA_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/trace_io.hpp"
#include "cvbdm/sample.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvbdm::io {

/// Accepted population files (blank lines and lines starting with '#' are
/// ignored; the first remaining line is the header):
///   value              one raw observation per line
///   value,count        frequency table of integer counts, expanded
///   n,mean,sd[,harmonic_mean]   one row of summary statistics (sd divides by n)
enum class DataFormat { raw, frequency, summary };

namespace detail {

struct Line {
  std::size_t number = 0;
  std::string text;
};

inline std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    lines.push_back({number, text});
  }
  return lines;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::size_t parse_count(std::string_view text, std::size_t line_no) {
  const double v = mcmc::detail::parse_double(text, line_no);
  if (!(v >= 0.0) || std::floor(v) != v || v > 1e15) {
    throw InputError("line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" +
                     std::string(text) + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline Sample read_sample(std::istream& in, const std::string& label = "input") {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw InputError(label + ": no data");
  const auto header = mcmc::detail::split_commas(lines.front().text);
  std::vector<std::string> cols;
  for (auto h : header) cols.push_back(detail::lower(h));

  auto fail = [&](const std::string& msg) { return InputError(label + ": " + msg); };
  try {
    if (cols == std::vector<std::string>{"value"}) {
      std::vector<double> values;
      for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = mcmc::detail::split_commas(lines[i].text);
        if (f.size() != 1) throw fail("line " + std::to_string(lines[i].number) + ": expected one field");
        values.push_back(mcmc::detail::parse_double(f[0], lines[i].number));
      }
      return Sample::from_values(std::move(values));
    }
    if (cols == std::vector<std::string>{"value", "count"}) {
      std::vector<double> values;
      for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = mcmc::detail::split_commas(lines[i].text);
        if (f.size() != 2) throw fail("line " + std::to_string(lines[i].number) + ": expected value,count");
        const double v = mcmc::detail::parse_double(f[0], lines[i].number);
        const std::size_t c = detail::parse_count(f[1], lines[i].number);
        values.insert(values.end(), c, v);
      }
      return Sample::from_values(std::move(values));
    }
    if (cols.size() >= 3 && cols[0] == "n" && cols[1] == "mean" && cols[2] == "sd" &&
        (cols.size() == 3 || (cols.size() == 4 && cols[3] == "harmonic_mean"))) {
      if (lines.size() != 2) throw fail("summary file must have exactly one data row");
      const auto f = mcmc::detail::split_commas(lines[1].text);
      if (f.size() != cols.size()) throw fail("line " + std::to_string(lines[1].number) + ": wrong field count");
      const std::size_t ln = lines[1].number;
      std::optional<double> harmonic;
      if (cols.size() == 4) harmonic = mcmc::detail::parse_double(f[3], ln);
      return Sample::from_summary(detail::parse_count(f[0], ln), mcmc::detail::parse_double(f[1], ln),
                                  mcmc::detail::parse_double(f[2], ln), harmonic);
    }
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(label, 0) == 0) throw;
    throw fail(what);
  }
  throw fail("unrecognised header '" + lines.front().text +
             "' (expected 'value', 'value,count' or 'n,mean,sd[,harmonic_mean]')");
}

inline Sample read_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file " + path.string());
  return read_sample(in, path.string());
}

/// One row of a two-group summary table.
struct SummaryRow {
  std::string name;
  Sample group1;
  Sample group2;
};

/// CSV with header name,n1,mean1,sd1,n2,mean2,sd2 (sd divides by n).
inline std::vector<SummaryRow> read_summary_table(std::istream& in, const std::string& label) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw InputError(label + ": no data");
  const auto header = mcmc::detail::split_commas(lines.front().text);
  if (header.size() != 7) throw InputError(label + ": expected 7 columns in the header");
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = mcmc::detail::split_commas(lines[i].text);
    const std::size_t ln = lines[i].number;
    if (f.size() != 7) throw InputError(label + ": line " + std::to_string(ln) + ": expected 7 fields");
    try {
      rows.push_back({std::string(f[0]),
                      Sample::from_summary(detail::parse_count(f[1], ln), mcmc::detail::parse_double(f[2], ln),
                                           mcmc::detail::parse_double(f[3], ln)),
                      Sample::from_summary(detail::parse_count(f[4], ln), mcmc::detail::parse_double(f[5], ln),
                                           mcmc::detail::parse_double(f[6], ln))});
    } catch (const InputError& e) {
      throw InputError(label + ": " + e.what());
    }
  }
  return rows;
}

inline std::vector<SummaryRow> read_summary_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open summary table " + path.string());
  return read_summary_table(in, path.string());
}

}  // namespace cvbdm::io

#endif  // CVBDM_IO_DATA_HPP
