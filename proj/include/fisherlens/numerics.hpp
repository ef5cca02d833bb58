// Copyright 2026 The fisherlens authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Self-contained scalar numerics: Lambert W (principal branch on
 * [-1/e, 0]), bracketed root finding, bounded 1-D minimization, central
 * differences and composite trapezoid quadrature.
 *
 * All functions are pure and thread-safe.
 */

#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace fisherlens {

struct ToleranceConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;
};

/// Bracket endpoints do not straddle a sign change.
struct NoSignChangeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An iteration failed to meet its tolerance within max_iter steps.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 1/e to double precision, the left edge of the Lambert W0 domain used here.
inline constexpr double kInvE = 0.36787944117144232160;

/**
 * Principal-branch Lambert W on y in [-1/e, 0]: returns w in [-1, 0] with
 * w*exp(w) = y. Halley iteration; near the branch point the iteration is
 * seeded with the square-root series w = -1 + p - p^2/3 + (11/72) p^3,
 * p = sqrt(2 (1 + e*y)), where plain Newton stalls.
 *
 * Throws std::domain_error for y < -1/e - abs_tol or y > abs_tol
 * (inputs inside the tolerance band are clamped onto [-1/e, 0]).
 */
double lambert_w0(double y, const ToleranceConfig& cfg = {});

/**
 * Brent-style bracketed root finder (inverse quadratic / secant with a
 * bisection guard; the iterate never leaves [lo, hi]).
 *
 * Returns x with |f(x)| <= abs_tol or bracket width <= rel_tol*|x| + abs_tol.
 * Throws NoSignChangeError if f(lo)*f(hi) > 0, ConvergenceError after
 * max_iter steps.
 */
double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, const ToleranceConfig& cfg = {});

struct MinimizeResult {
    double x;
    double fx;
    int iterations;
};

/**
 * Bounded scalar minimization (Brent: golden section with parabolic
 * interpolation). Assumes f unimodal on [lo, hi]; otherwise some local
 * minimum within the interval is returned. Throws ConvergenceError if the
 * interval fails to shrink to tolerance within max_iter steps.
 */
MinimizeResult minimize_scalar(const std::function<double(double)>& f,
                               double lo, double hi,
                               const ToleranceConfig& cfg = {});

/// Symmetric difference quotient (f(x+h) - f(x-h)) / (2h); O(h^2) truncation.
/// The caller owns the step choice; h must be > 0.
double central_diff(const std::function<double(double)>& f, double x, double h);

/// Default central-difference step, 1e-5 * max(1, |x|): balances O(h^2)
/// truncation against cancellation at double precision.
double default_diff_step(double x);

/// Composite trapezoid rule over uniformly spaced samples.
/// Throws std::invalid_argument for fewer than 2 samples or dx <= 0.
double trapezoid_integrate(std::span<const double> samples, double dx);

} // namespace fisherlens
