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
 * Closed-form Fisher information of the separation s for the entangled and
 * unentangled two-source fields, the characteristic equation of its
 * stationary points, and the least resolvable separation (analytic via
 * Lambert W in the balanced case, numeric in general).
 *
 * All expressions are evaluated in dimensionless units u = s/sigma and
 * scaled by 1/sigma^2 on output, the unique dimensionally consistent
 * restoration of the sigma = 1 forms (confirmed against the grid oracle).
 * Removable singularities on the balanced fully-coherent branch are
 * evaluated through exact expm1 / sum-of-squares splits rather than naive
 * substitution, so the limits come out finite everywhere.
 */

#pragma once

#include "fisherlens/model.hpp"
#include "fisherlens/numerics.hpp"

namespace fisherlens {

enum class SourceTag { analytic4, analytic6, analytic7, analytic8, oracle };

/// One (s, F) sample and which route produced it.
struct FiSample {
    double s = 0.0;
    double f = 0.0;
    SourceTag source = SourceTag::analytic4;
};

/**
 * Total Fisher information of the entangled field analyzed in the rotated
 * basis:
 *   F = (1/sigma^2) [ 1/4 - (r sin2a cosphi)^2 u^2 / (16 D1 D2) ],
 *   D1 = (cos^2 a + r^2 sin^2 a) e^{u^2/8} - r sin2a cosphi,
 *   D2 = (r^2 cos^2 a + sin^2 a) e^{u^2/8} + r sin2a cosphi.
 * At s = 0 the analytic limit is returned (f_tot_limit0); NaN is never
 * produced for valid inputs.
 */
double f_tot(const SourceModel& model, const AnalyzerBasis& basis, double s);

/**
 * lim_{s->0} f_tot: 1/(4 sigma^2) generically; on the degenerate manifold
 * (tan a = 1/r with phi in {0, pi}, e.g. the balanced fully-coherent case
 * r = 1, a = pi/4, phi = 0) the finite series limit instead. Parameters
 * within floating-point noise of the manifold are treated as on it.
 */
double f_tot_limit0(const SourceModel& model, const AnalyzerBasis& basis);

/**
 * Fisher information of the unentangled field (a|h+> + b e^{i phi}|h->)
 * with k = a b cosphi e^{-u^2/8}:
 *   F = (1/sigma^2) [ 1/4 - k^2 + k u^2/8 ] / (1 + 2k)^2,
 * the exact rational reduction of the two-term textbook form (the two are
 * compared in the tests). When 1 + 2k <= 1e-14 (reachable only at r = 1,
 * phi = pi, s = 0) the series limit 0 is returned and *degenerate is set.
 */
double f_unentangled(const SourceModel& model, double s,
                     bool* degenerate = nullptr);

/// Balanced-case reduction (r = 1):
///   F = (1/sigma^2) [ 1/4 - sin^2 2a cos^2 phi u^2 /
///                     (16 (e^{u^2/4} - sin^2 2a cos^2 phi)) ].
double f_balanced(double alpha, double phi, double sigma, double s);

/// Unbalanceness reduction (a = pi/4, r = tan eta): same functional form as
/// f_balanced with alpha replaced by eta, and implemented as exactly that.
double f_eta(double eta, double phi, double sigma, double s);

/**
 * Residual of the stationarity condition of f_tot,
 *   Lambda(s) e^{u^2/4} + Pi(s) e^{u^2/8} + Omega,
 * whose interior root is the least resolvable separation:
 *   Lambda = (a^2 cos^2 a' + b^2 sin^2 a')(b^2 cos^2 a' + a^2 sin^2 a')(1 - u^2/4),
 *   Pi     = [2(a^2 cos^2 a' + b^2 sin^2 a') - 1](1 - u^2/8) a b sin2a' cosphi,
 *   Omega  = -(a b sin2a' cosphi)^2,      (a' = basis angle alpha)
 */
double characteristic_residual(const SourceModel& model,
                               const AnalyzerBasis& basis, double s);

/// Least resolvable separation of the balanced case,
///   s_least = sigma sqrt(4 + 4 W0(-sin^2 2a cos^2 phi / e));
/// zero exactly when sin^2 2a cos^2 phi = 1, and 2 sigma at cos phi = 0.
double s_least_analytic(double alpha, double phi, double sigma);

struct SLeastResult {
    double s = 0.0;
    double f_min = 0.0;
    bool interior = false; // false: no interior dip, (0, f_tot_limit0) returned
};

/**
 * Numeric least resolvable separation: minimizes f_tot over
 * (1e-6 sigma, search_hi] (default search_hi = 6 sigma) with a coarse scan,
 * Brent refinement, and a derivative-root polish. When the curve has no
 * interior dip (flat, or rising from s = 0) returns {0, f_tot_limit0, false}.
 */
SLeastResult s_least_numeric(const SourceModel& model, const AnalyzerBasis& basis,
                             double search_hi = 0.0);

} // namespace fisherlens
