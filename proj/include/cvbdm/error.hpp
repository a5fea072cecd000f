#ifndef CVBDM_ERROR_HPP
#define CVBDM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cvbdm {

/// Malformed or model-incompatible input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation whose result is mathematically undefined for the given
/// arguments, e.g. a CV with zero mean or the ESS of a constant chain.
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// MCMC output that failed the convergence gate (CLI exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dataset required by a reproduction is not present locally (CLI exit
/// code 4). The message names the original data source.
class DataUnavailableError : public std::runtime_error {
 public:
  DataUnavailableError(const std::string& what, std::string source)
      : std::runtime_error(what), source_(std::move(source)) {}
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

}  // namespace cvbdm

#endif  // CVBDM_ERROR_HPP
