#pragma once

#include <stdexcept>
#include <string>

namespace sphframe {

/// Error classes surfaced by the library. The CLI maps each one to its own exit code.
enum class ErrorKind {
  dimension,       // matrix/vector shapes do not conform
  domain,          // argument outside its mathematical domain
  depth_limit,     // requested partition depth above the supported maximum
  rank_deficient,  // a required rank or invertibility condition fails
  nonzero_sum,     // permutation generator does not sum to zero
  orthonormality,  // U/V columns not orthonormal, or A p != 0
  no_bracket,      // bisection bracket invalid (area not monotone on the interval)
  level_range,     // coarse/fine level pair out of range
  level_mismatch,  // signals at different levels compared
  empty_input,
  io,
  format,          // malformed file contents
  numerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

/// Process exit code for an error class; always nonzero and distinct per class.
int exit_code(ErrorKind kind);

}  // namespace sphframe
