// Probabilistic zero test (high-precision sampling) and the finite-difference
// derivative check. Complements the exact tower-normalized test: exactness
// where sound, detection where not.
#pragma once

#include "abel/expr.hpp"

namespace abel {

struct SampleConfig {
    int digits = 30;          // working precision in decimal digits
    int points = 8;           // sample count
    unsigned long seed = 1;
    int max_retries = 64;     // resampling budget for poles/domain errors
};

struct SampleVerdict {
    bool zero = false;
    int samples_used = 0;
    double max_abs = 0.0;     // largest |value| seen (diagnostic)
};

/// Evaluates at random rational points with P-digit arithmetic; zero iff all
/// |values| < 10^(-P/2).
SampleVerdict is_zero_sampled(const Expr& e, const SampleConfig& cfg = {});

struct FdiffReport {
    bool ok = false;
    double max_rel_error = 0.0;
    int checked = 0;
};

/// Central finite difference of a sampled evaluation against the exact
/// derivative, at `points` random points (step and tolerance per the caller).
FdiffReport check_derivative_fd(const Expr& e, SymId v, int points, unsigned long seed,
                                double step = 1e-8, double rel_tol = 1e-6, int digits = 50);

} // namespace abel
