#pragma once

#include <stdexcept>
#include <string>

namespace deadlisten {

// Base of every error raised by the pipeline. Commands map these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Precondition on a numeric argument was violated (probabilities, counts).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace deadlisten
