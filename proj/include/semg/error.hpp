#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semg {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: bad arguments, invalid configuration, unreadable data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input was well formed but the computation cannot produce a result
/// (zero spectral power, zero variance, empty denominator).
class ComputeError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal messages collected while running an operation.
using Diagnostics = std::vector<std::string>;

namespace detail {

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->push_back(std::move(message));
}

}  // namespace detail
}  // namespace semg
