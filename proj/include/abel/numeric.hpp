// Floating-point cross-validation: adaptive Dormand-Prince 5(4) integration
// of rational ODEs and constancy checking of first integrals along
// trajectories.
#pragma once

#include "abel/numeric_eval.hpp"
#include "abel/ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace abel {

struct NumericConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double pole_radius = 1e-10;    // stop when |denominator| falls below this
    long max_steps = 200000;
    std::map<SymId, double> params;          // numeric values for free parameters
    std::map<SymId, double> basepoints;      // per-Int-symbol basepoint overrides
    double quad_tol = 1e-10;
};

struct Trajectory {
    std::vector<std::pair<double, double>> samples;   // strictly monotone in x
    long steps = 0;
    long rejected = 0;
    double max_error_estimate = 0.0;
    bool pole_stop = false;
};

Trajectory integrate_ode(const RationalODE& e, double x0, double y0, double x1,
                         const NumericConfig& cfg = {});

/// Fixed-step propagation with the embedded order-4 weights (for convergence
/// order measurements).
double rk4_fixed_final(const RationalODE& e, double x0, double y0, double x1, long nsteps,
                       const NumericConfig& cfg = {});

std::complex<double> eval_expression(const Expr& psi, double x, double y,
                                     const NumericConfig& cfg = {});

struct DriftReport {
    double max_drift = 0.0;
    std::complex<double> psi0;
    Trajectory trajectory;
    bool ok(double tol) const { return max_drift < tol; }
};

DriftReport constancy_check(const RationalODE& e, const Expr& psi, double x0, double y0, double x1,
                            const NumericConfig& cfg = {});

/// CSV export with header "x,y,psi".
std::string trajectory_csv(const RationalODE& e, const Expr& psi, const Trajectory& t,
                           const NumericConfig& cfg = {});

} // namespace abel
