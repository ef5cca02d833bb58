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

#include "fisherlens/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fisherlens/kernels.hpp"

namespace fisherlens {
namespace {

void check_cfg(const ToleranceConfig& cfg, const char* who) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_iter < 1)
        throw std::invalid_argument(std::string(who) +
                                    ": tolerances must be positive, max_iter >= 1");
}

} // namespace

double lambert_w0(double y, const ToleranceConfig& cfg) {
    check_cfg(cfg, "lambert_w0");
    if (!(y >= -kInvE - cfg.abs_tol) || !(y <= cfg.abs_tol))
        throw std::domain_error("lambert_w0: argument outside [-1/e, 0]");
    y = std::clamp(y, -kInvE, 0.0);
    if (y == 0.0) return 0.0;
    if (y == -kInvE) return -1.0;

    const double p2 = 2.0 * (1.0 + M_E * y); // 2(1 + e*y) in [0, 2]
    double w;
    if (y > -0.25) {
        w = y * (1.0 + y * (-1.0 + 1.5 * y)); // Taylor seed near 0
    } else {
        const double p = std::sqrt(p2);
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
    }

    double last_dw = HUGE_VAL;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        if (f == 0.0) return std::clamp(w, -1.0, 0.0);
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - 0.5 * (w + 2.0) * f / wp1;
        const double dw = f / denom;
        w -= dw;
        const double adw = std::abs(dw);
        // converged, or oscillating within the last ulp
        if (adw <= 2.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(w)) ||
            adw >= last_dw)
            return std::clamp(w, -1.0, 0.0);
        last_dw = adw;
    }
    throw ConvergenceError("lambert_w0: Halley iteration did not converge");
}

double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, const ToleranceConfig& cfg) {
    check_cfg(cfg, "find_root_bracketed");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NoSignChangeError("find_root_bracketed: f(lo) and f(hi) have the same sign");

    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 0.5 * (cfg.rel_tol * std::abs(b) + cfg.abs_tol);
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0 || std::abs(fb) <= cfg.abs_tol)
            return b;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // secant / inverse quadratic step
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double rr = fb / fc;
                p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m; e = m; // interpolation rejected, bisect
            }
        } else {
            d = m; e = m;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw ConvergenceError("find_root_bracketed: max_iter exceeded");
}

MinimizeResult minimize_scalar(const std::function<double(double)>& f,
                               double lo, double hi,
                               const ToleranceConfig& cfg) {
    check_cfg(cfg, "minimize_scalar");
    if (!(lo < hi))
        throw std::invalid_argument("minimize_scalar: requires lo < hi");
    constexpr double kGolden = 0.3819660112501051; // (3 - sqrt(5)) / 2

    double a = lo, b = hi;
    double x = a + kGolden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = cfg.rel_tol * std::abs(x) + cfg.abs_tol;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a))
            return {x, fx, iter};

        bool golden = true;
        if (std::abs(e) > tol1) {
            // trial parabola through x, v, w
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm > x) ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = kGolden * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    throw ConvergenceError("minimize_scalar: max_iter exceeded");
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    if (!(h > 0.0)) throw std::domain_error("central_diff: h must be > 0");
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double default_diff_step(double x) { return 1e-5 * std::max(1.0, std::abs(x)); }

double trapezoid_integrate(std::span<const double> samples, double dx) {
    if (samples.size() < 2)
        throw std::invalid_argument("trapezoid_integrate: need at least 2 samples");
    if (!(dx > 0.0))
        throw std::invalid_argument("trapezoid_integrate: dx must be > 0");
    return dx * (kernels::sum(samples) - 0.5 * (samples.front() + samples.back()));
}

} // namespace fisherlens
