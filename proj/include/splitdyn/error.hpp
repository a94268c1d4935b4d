#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitdyn {

enum class ErrorCode {
  precondition,
  parse,
  degree_cap,
  budget,
  unsupported,
  orbit_meets_v,
  contained_in_v,
  preperiodic_curve,
  semiconjugacy_fails,
  precision,
  non_convergence,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::parse,
              what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::precondition, what);
}

}  // namespace splitdyn
