#include "sphframe/errors.hpp"

namespace sphframe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::domain: return "domain";
    case ErrorKind::depth_limit: return "depth-limit";
    case ErrorKind::rank_deficient: return "rank-deficient";
    case ErrorKind::nonzero_sum: return "nonzero-sum";
    case ErrorKind::orthonormality: return "orthonormality";
    case ErrorKind::no_bracket: return "no-bracket";
    case ErrorKind::level_range: return "level-range";
    case ErrorKind::level_mismatch: return "level-mismatch";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  // 1 is reserved for unexpected failures, 2 for command-line usage errors.
  return 10 + static_cast<int>(kind);
}

}  // namespace sphframe
