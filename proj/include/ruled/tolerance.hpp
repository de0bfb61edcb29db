#pragma once

#include "ruled/error.hpp"

namespace ruled {

/// Numerical realization of the exact rank / vanishing tests used throughout.
struct TolerancePolicy {
  double rank_rel_tol = 1e-8;          // singular value cutoff relative to the largest
  double zero_abs_tol = 1e-8;          // absolute cutoff for wedge norms and residuals
  double derivative_check_tol = 1e-7;  // analytic vs finite-difference agreement, unit speed, orthonormality

  void validate() const {
    if (!(rank_rel_tol > 0.0) || !(rank_rel_tol < 1.0))
      fail(ErrorKind::config, "rank_rel_tol must lie in (0, 1)");
    if (!(zero_abs_tol > 0.0)) fail(ErrorKind::config, "zero_abs_tol must be positive");
    if (!(derivative_check_tol > 0.0))
      fail(ErrorKind::config, "derivative_check_tol must be positive");
  }
};

}  // namespace ruled
