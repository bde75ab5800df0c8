#pragma once

#include <stdexcept>
#include <string>

namespace specprice {

enum class ErrorCode {
  Range = 1,
  AmbiguousScenario,
  ScenarioMismatch,
  Domain,
  NoRoot,
  MissingCdf,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace specprice
