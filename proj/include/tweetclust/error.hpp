#pragma once

#include <stdexcept>
#include <string>

namespace tweetclust {

/// Runtime failure inside a module (bad input data, degenerate math, I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tweetclust
