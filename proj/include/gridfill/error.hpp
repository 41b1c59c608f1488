#pragma once

#include <stdexcept>
#include <string>

namespace gridfill {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (shape, range, missing data).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved (rank deficiency).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an external file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridfill
