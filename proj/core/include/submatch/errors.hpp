#pragma once

#include <stdexcept>
#include <string>

namespace submatch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidVertex : Error {
  using Error::Error;
};
struct SelfLoopError : Error {
  using Error::Error;
};
struct DuplicateInsert : Error {
  using Error::Error;
};
struct MissingDelete : Error {
  using Error::Error;
};
struct InvalidParameter : Error {
  using Error::Error;
};
struct SizeCapExceeded : Error {
  using Error::Error;
};
struct NoPermutationAccepted : Error {
  using Error::Error;
};
struct IterationCapExceeded : Error {
  using Error::Error;
};
struct CallCapExceeded : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};

}  // namespace submatch
