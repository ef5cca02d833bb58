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

#include "fisherlens/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fisherlens {
namespace {

// Parameters this close (squared) to the degenerate manifold are treated as
// on it: representable angles hit e.g. D10 ~ 1e-32 instead of an exact 0.
constexpr double kDegenerateTol = 1e-28;

struct TotTerms {
    double c1, c2;   // bracket coefficients of e^{u^2/8}
    double t;        // r sin2a cosphi
    double d10, d20; // D1, D2 at u = 0, as exact sums of squares
};

TotTerms tot_terms(const SourceModel& model, const AnalyzerBasis& basis) {
    const double r = model.r();
    const double ca = std::cos(basis.alpha);
    const double sa = std::sin(basis.alpha);
    const double cphi = std::cos(model.phi());
    const double sphi = std::sin(model.phi());
    TotTerms tt;
    tt.c1 = ca * ca + r * r * sa * sa;
    tt.c2 = r * r * ca * ca + sa * sa;
    tt.t = r * std::sin(2.0 * basis.alpha) * cphi;
    const double e1 = ca - r * sa * cphi;
    const double e2 = r * ca + sa * cphi;
    tt.d10 = e1 * e1 + (r * sa * sphi) * (r * sa * sphi);
    tt.d20 = e2 * e2 + (sa * sphi) * (sa * sphi);
    return tt;
}

void require_nonnegative_s(double s, const char* who) {
    if (!(s >= 0.0)) throw std::domain_error(std::string(who) + ": s must be >= 0");
}

} // namespace

double f_tot(const SourceModel& model, const AnalyzerBasis& basis, double s) {
    require_nonnegative_s(s, "f_tot");
    const double sigma = model.sigma();
    const double inv_s2 = 1.0 / (sigma * sigma);
    const double u = s / sigma;
    const TotTerms tt = tot_terms(model, basis);

    const double num = tt.t * tt.t * u * u;
    if (num == 0.0) {
        // either the interference term vanishes identically or u = 0
        return (u == 0.0) ? f_tot_limit0(model, basis) : 0.25 * inv_s2;
    }
    // D_i = C_i expm1(u^2/8) + D_i(0); exact split, no cancellation as u -> 0
    const double em = std::expm1(u * u / 8.0);
    const double d1 = tt.c1 * em + tt.d10;
    const double d2 = tt.c2 * em + tt.d20;
    return std::max(0.0, (0.25 - num / (16.0 * d1 * d2)) * inv_s2);
}

double f_tot_limit0(const SourceModel& model, const AnalyzerBasis& basis) {
    const double inv_s2 = 1.0 / (model.sigma() * model.sigma());
    const TotTerms tt = tot_terms(model, basis);
    if (tt.t == 0.0) return 0.25 * inv_s2;
    // degenerate manifold: one bracket vanishes at u = 0 and the u^2 terms
    // cancel against the numerator (series of D to order u^2)
    if (tt.d10 <= kDegenerateTol)
        return std::max(0.0, (0.25 - tt.t * tt.t / (2.0 * tt.c1 * tt.d20)) * inv_s2);
    if (tt.d20 <= kDegenerateTol)
        return std::max(0.0, (0.25 - tt.t * tt.t / (2.0 * tt.c2 * tt.d10)) * inv_s2);
    return 0.25 * inv_s2;
}

double f_unentangled(const SourceModel& model, double s, bool* degenerate) {
    require_nonnegative_s(s, "f_unentangled");
    if (degenerate) *degenerate = false;
    const double sigma = model.sigma();
    const double inv_s2 = 1.0 / (sigma * sigma);
    const double u = s / sigma;
    const double cphi = std::cos(model.phi());
    const double sphi = std::sin(model.phi());
    const double ab = model.a() * model.b();

    // (1 + 2k)/2 assembled from the cancellation-free identity
    // 1 + 2 a b cosphi = (a + b cosphi)^2 + (b sinphi)^2
    const double e1 = model.a() + model.b() * cphi;
    const double e2 = model.b() * sphi;
    const double half_plus_k =
        0.5 * (e1 * e1 + e2 * e2) + ab * cphi * std::expm1(-u * u / 8.0);
    if (half_plus_k <= 0.5e-14) { // 1 + 2k <= 1e-14: r = 1, phi = pi, s = 0
        if (degenerate) *degenerate = true;
        return 0.0; // series limit: F ~ u^2 / (96 sigma^4) -> 0
    }
    const double k = ab * cphi * std::exp(-u * u / 8.0);
    const double num = (0.5 - k) * half_plus_k + k * u * u / 8.0;
    return std::max(0.0, num / (4.0 * half_plus_k * half_plus_k) * inv_s2);
}

double f_balanced(double alpha, double phi, double sigma, double s) {
    require_nonnegative_s(s, "f_balanced");
    if (!(sigma > 0.0)) throw std::domain_error("f_balanced: sigma must be > 0");
    const double inv_s2 = 1.0 / (sigma * sigma);
    const double u = s / sigma;
    const double s2a = std::sin(2.0 * alpha);
    const double c2a = std::cos(2.0 * alpha);
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);

    const double q = (s2a * cphi) * (s2a * cphi);
    // 1 - q = cos^2 2a + sin^2 2a sin^2 phi, exact when q ~ 1
    const double one_minus_q = c2a * c2a + (s2a * sphi) * (s2a * sphi);
    const double em = std::expm1(u * u / 4.0);
    const double num = q * u * u;
    if (num == 0.0) {
        if (u == 0.0 && one_minus_q <= kDegenerateTol) return 0.0; // sin^2 2a cos^2 phi = 1
        return 0.25 * inv_s2;
    }
    return std::max(0.0, (0.25 - num / (16.0 * (em + one_minus_q))) * inv_s2);
}

double f_eta(double eta, double phi, double sigma, double s) {
    return f_balanced(eta, phi, sigma, s);
}

double characteristic_residual(const SourceModel& model,
                               const AnalyzerBasis& basis, double s) {
    require_nonnegative_s(s, "characteristic_residual");
    const double u = s / model.sigma();
    const double a = model.a();
    const double b = model.b();
    const double ca = std::cos(basis.alpha);
    const double sa = std::sin(basis.alpha);
    const double cphi = std::cos(model.phi());
    const double g = a * b * std::sin(2.0 * basis.alpha) * cphi;

    const double a1 = a * a * ca * ca + b * b * sa * sa;
    const double a2 = b * b * ca * ca + a * a * sa * sa;
    const double lambda = a1 * a2 * (1.0 - u * u / 4.0);
    const double pi_coef = (2.0 * a1 - 1.0) * (1.0 - u * u / 8.0) * g;
    const double omega = -g * g;
    return lambda * std::exp(u * u / 4.0) + pi_coef * std::exp(u * u / 8.0) + omega;
}

double s_least_analytic(double alpha, double phi, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("s_least_analytic: sigma must be > 0");
    const double s2a = std::sin(2.0 * alpha);
    const double cphi = std::cos(phi);
    const double q = (s2a * cphi) * (s2a * cphi);
    const double w = lambert_w0(-q * kInvE);
    const double arg = std::max(4.0 + 4.0 * w, 0.0);
    return sigma * std::sqrt(arg);
}

SLeastResult s_least_numeric(const SourceModel& model, const AnalyzerBasis& basis,
                             double search_hi) {
    const double sigma = model.sigma();
    const double hi = (search_hi > 0.0) ? search_hi : 6.0 * sigma;
    const double lo = 1e-6 * sigma;
    if (!(hi > lo))
        throw std::invalid_argument("s_least_numeric: search_hi too small");

    constexpr int kScan = 129;
    std::vector<double> ss(kScan), fs(kScan);
    for (int i = 0; i < kScan; ++i) {
        ss[i] = lo + (hi - lo) * static_cast<double>(i) / (kScan - 1);
        fs[i] = f_tot(model, basis, ss[i]);
    }
    int imin = 0;
    for (int i = 1; i < kScan; ++i)
        if (fs[i] < fs[imin]) imin = i;

    // interior dip: clearly below both the s -> 0 edge and the far edge
    const bool dip = imin > 0 && imin < kScan - 1 &&
                     fs[imin] < fs.front() - 1e-12 && fs[imin] < fs.back() - 1e-12;
    if (!dip)
        return {0.0, f_tot_limit0(model, basis), false};

    auto objective = [&](double s) { return f_tot(model, basis, s); };
    const MinimizeResult coarse =
        minimize_scalar(objective, ss[imin - 1], ss[imin + 1]);

    // polish by locating the zero of dF/ds; the value-based minimizer alone
    // is limited to ~sqrt(eps) in position
    double s_min = coarse.x;
    const double step = default_diff_step(s_min);
    auto dfds = [&](double s) { return central_diff(objective, s, step); };
    const double wlo = std::max(lo, s_min - (ss[1] - ss[0]));
    const double whi = std::min(hi, s_min + (ss[1] - ss[0]));
    if (dfds(wlo) < 0.0 && dfds(whi) > 0.0)
        s_min = find_root_bracketed(dfds, wlo, whi);

    return {s_min, f_tot(model, basis, s_min), true};
}

} // namespace fisherlens
