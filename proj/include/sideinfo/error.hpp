#pragma once

#include <stdexcept>
#include <string>

namespace sideinfo {

// Machine-readable category carried by every library error. The CLI prints
// errors as `<code>: <message>` using code_name().
enum class ErrorCode {
  kInput,          // malformed or out-of-range user input
  kDimension,      // alphabet sizes disagree
  kUndefined,      // estimator undefined for this sample (e.g. n = 0)
  kEmptyLevel,     // S_l is empty where a non-empty level is required
  kMissingTruth,   // operation needs the true distribution
  kRange,          // parameter outside the documented range
  kConstruction,   // a lower-bound construction cannot be formed
  kTooLarge,       // exact enumeration infeasible
  kIo,             // file could not be read or written
  kParse,          // file content could not be parsed
  kSampling,       // rejection sampler or Monte Carlo run gave up
};

const char* code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sideinfo
