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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fisherlens/fisher.hpp"

using namespace fisherlens;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSLeast = 1.5233271467757372; // sqrt(4 + 4 W(-3/(4e)))
constexpr double kFMin = 0.14503284975649427;  // (1 + W(-3/(4e))) / 4

// the printed two-term form of the unentangled FI, used as an independent
// algebraic route against the library's rational reduction
double f_unent_two_term(const SourceModel& m, double s) {
    const double u = s / m.sigma();
    const double k = m.a() * m.b() * std::cos(m.phi()) * std::exp(-u * u / 8.0);
    const double term1 = (0.25 - k * (4.0 - u * u) / 8.0) / (1.0 + 2.0 * k);
    const double term2 = 0.25 * (k * u) * (k * u) / ((1.0 + 2.0 * k) * (1.0 + 2.0 * k));
    return (term1 - term2) / (m.sigma() * m.sigma());
}
} // namespace

TEST_CASE("f_tot closed cases") {
    // single source: flat 1/4 for any s, alpha, phi
    for (double s : {0.0, 0.5, 2.0, 7.0})
        CHECK(f_tot({1.0, 0.0, 0.7}, {0.9}, s) == 0.25);

    // worked example r = 1/2, alpha = pi/6, phi = 0, s = 1
    CHECK(f_tot({1.0, 0.5, 0.0}, {kPi / 6.0}, 1.0) ==
          doctest::Approx(0.22412687017247220).epsilon(1e-12));

    // removable singularity: balanced fully coherent, small s
    CHECK(f_tot({1.0, 1.0, 0.0}, {kPi / 4.0}, 0.0) == 0.0);
    const double tiny = f_tot({1.0, 1.0, 0.0}, {kPi / 4.0}, 1e-6);
    CHECK(tiny == doctest::Approx(1e-12 / 32.0).epsilon(1e-6)); // F ~ u^2/32
    CHECK(std::isfinite(tiny));

    CHECK_THROWS_AS(f_tot({1.0, 1.0, 0.0}, {0.3}, -0.5), std::domain_error);
}

TEST_CASE("f_tot_limit0 generic and degenerate") {
    for (double r : {0.0, 0.25, 0.5, 1.0})
        CHECK(f_tot_limit0({1.0, r, 0.0}, {kPi / 6.0}) ==
              doctest::Approx(0.25).epsilon(1e-12));
    CHECK(f_tot_limit0({1.0, 1.0, 0.0}, {kPi / 4.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f_tot_limit0({1.0, 1.0, kPi / 2.0}, {kPi / 4.0}) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // the degenerate manifold away from r = 1: tan(alpha) = 1/r
    CHECK(f_tot_limit0({1.0, 2.0, 0.0}, {std::atan(0.5)}) <
          0.25 - 1e-3);
    // ... and phi = pi belongs to it as well (cos phi = -1, tan(alpha) = -1/r
    // has no solution in (0, pi/2), so D2 degenerates instead of D1)
    CHECK(f_tot_limit0({1.0, 1.0, kPi}, {kPi / 4.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("f_unentangled closed cases") {
    CHECK(f_unentangled({1.0, 1.0, 0.0}, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    for (double s : {0.0, 1.0, 3.0})
        CHECK(f_unentangled({1.0, 0.0, 0.0}, s) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f_unentangled({1.0, 0.5, 0.0}, 0.0) ==
          doctest::Approx(1.0 / 36.0).epsilon(1e-14));

    // divergence guard: r = 1, phi = pi, s = 0 flags and returns the limit
    bool degenerate = false;
    CHECK(f_unentangled({1.0, 1.0, kPi}, 0.0, &degenerate) == 0.0);
    CHECK(degenerate);
    // nearby but nondegenerate points stay finite and unflagged
    degenerate = true;
    CHECK(std::isfinite(f_unentangled({1.0, 1.0, kPi}, 0.5, &degenerate)));
    CHECK_FALSE(degenerate);
}

TEST_CASE("f_unentangled equals the printed two-term form") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ur(0.0, 2.0), uphi(0.0, 2.0 * kPi),
        us(0.2, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const SourceModel m(1.0, ur(gen), uphi(gen));
        const double s = us(gen);
        CHECK(f_unentangled(m, s) ==
              doctest::Approx(f_unent_two_term(m, s)).epsilon(1e-12));
    }
}

TEST_CASE("f_balanced closed cases") {
    for (double s : {0.0, 1.0, 2.5})
        CHECK(f_balanced(0.0, 0.3, 1.0, s) == 0.25); // sin 2a = 0

    CHECK(f_balanced(kPi / 6.0, 0.0, 1.0, kSLeast) ==
          doctest::Approx(kFMin).epsilon(1e-12));
    CHECK(f_balanced(kPi / 4.0, 0.0, 1.0, 0.0) == 0.0);
    CHECK(f_balanced(kPi / 4.0, 0.0, 1.0, 1e-7) ==
          doctest::Approx(1e-14 / 32.0).epsilon(1e-5));
}

TEST_CASE("f_eta is f_balanced with the angle renamed") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> ua(0.0, kPi / 2.0), uphi(0.0, 2.0 * kPi),
        us(0.0, 5.0);
    for (int i = 0; i < 300; ++i) {
        const double th = ua(gen), phi = uphi(gen), s = us(gen);
        CHECK(f_eta(th, phi, 1.0, s) == f_balanced(th, phi, 1.0, s)); // bitwise
    }
    CHECK(f_eta(0.0, 0.0, 1.0, 2.0) == 0.25);
    const double th = std::atan(0.5);
    CHECK(f_eta(th, 0.0, 1.0, 1.0) == f_balanced(th, 0.0, 1.0, 1.0));
}

TEST_CASE("reduction identities against f_tot") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> ua(0.0, kPi / 2.0), uphi(0.0, 2.0 * kPi),
        us(0.0, 5.0), ueta(0.01, kPi / 2.0 - 0.01);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = ua(gen), phi = uphi(gen), s = us(gen);
        CHECK(std::abs(f_tot({1.0, 1.0, phi}, {alpha}, s) -
                       f_balanced(alpha, phi, 1.0, s)) <= 1e-12);

        const double eta = ueta(gen);
        CHECK(std::abs(f_tot({1.0, std::tan(eta), phi}, {kPi / 4.0}, s) -
                       f_eta(eta, phi, 1.0, s)) <= 1e-12);
    }
}

TEST_CASE("f_tot asymptotes, bounds and phase symmetry") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> ur(0.0, 2.5), ua(0.0, kPi / 2.0),
        uphi(0.0, 2.0 * kPi), us(0.0, 6.0);
    for (int i = 0; i < 500; ++i) {
        const double r = ur(gen), alpha = ua(gen), phi = uphi(gen), s = us(gen);
        const double f = f_tot({1.0, r, phi}, {alpha}, s);
        CHECK(f >= 0.0);
        CHECK(f <= 0.25 + 1e-15);
        // phi enters through cos(phi) only
        CHECK(f_tot({1.0, r, -phi}, {alpha}, s) == f);
        CHECK(f_tot({1.0, r, 2.0 * kPi - phi}, {alpha}, s) ==
              doctest::Approx(f).epsilon(1e-12));
    }
    CHECK(f_tot({1.0, 1.0, 0.0}, {kPi / 6.0}, 12.0) ==
          doctest::Approx(0.25).epsilon(1e-10));
    // the unentangled FI approaches 1/4 like u^2 e^{-u^2/8}/16 (confirmed by
    // the grid oracle), which is 1.3e-7 at 12 sigma and below 1e-10 at 16
    CHECK(f_unentangled({1.0, 1.0, 0.0}, 12.0) == doctest::Approx(0.25).epsilon(2e-7));
    CHECK(f_unentangled({1.0, 1.0, 0.0}, 16.0) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("sigma scaling law is exact") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> ur(0.0, 2.0), ua(0.0, kPi / 2.0),
        uphi(0.0, 2.0 * kPi), us(0.0, 5.0);
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        for (int i = 0; i < 200; ++i) {
            const double r = ur(gen), alpha = ua(gen), phi = uphi(gen), s = us(gen);
            const double lhs = f_tot({sigma, r, phi}, {alpha}, s);
            const double rhs = f_tot({1.0, r, phi}, {alpha}, s / sigma) / (sigma * sigma);
            CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("characteristic_residual roots and trivial cases") {
    const SourceModel balanced(1.0, 1.0, 0.0);
    const AnalyzerBasis basis{kPi / 6.0};
    CHECK(std::abs(characteristic_residual(balanced, basis, kSLeast)) <= 1e-9);

    // phi = pi/2: residual reduces to Lambda e^{u^2/4}, root at u = 2
    const SourceModel quarter(1.0, 1.0, kPi / 2.0);
    CHECK(characteristic_residual(quarter, {kPi / 6.0}, 2.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(characteristic_residual(quarter, {kPi / 6.0}, 1.0) > 0.0);

    // s = 0 is a stationary point of the balanced coherent case
    CHECK(characteristic_residual(balanced, {kPi / 4.0}, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("s_least_analytic values") {
    CHECK(s_least_analytic(kPi / 4.0, 0.0, 1.0) == 0.0);
    CHECK(s_least_analytic(kPi / 6.0, 0.0, 1.0) ==
          doctest::Approx(kSLeast).epsilon(1e-12));
    CHECK(s_least_analytic(kPi / 6.0, kPi / 2.0, 1.0) == 2.0);
    CHECK(s_least_analytic(kPi / 3.0, kPi / 2.0, 2.0) == 4.0);
    // sigma scaling
    CHECK(s_least_analytic(kPi / 6.0, 0.0, 2.0) ==
          doctest::Approx(2.0 * kSLeast).epsilon(1e-12));
}

TEST_CASE("s_least_numeric agrees with the analytic route") {
    const SourceModel balanced(1.0, 1.0, 0.0);
    const SLeastResult res = s_least_numeric(balanced, {kPi / 6.0});
    CHECK(res.interior);
    CHECK(res.s == doctest::Approx(kSLeast).epsilon(1e-7));
    CHECK(res.f_min == doctest::Approx(kFMin).epsilon(1e-10));

    // stationarity at the reported point
    const double h = default_diff_step(res.s);
    const double slope = central_diff(
        [&](double s) { return f_tot(balanced, {kPi / 6.0}, s); }, res.s, h);
    CHECK(std::abs(slope) < 1e-6);
    CHECK(std::abs(characteristic_residual(balanced, {kPi / 6.0}, res.s)) < 1e-8 * 0.25);
}

TEST_CASE("s_least_numeric flags curves without an interior dip") {
    // flat: single source
    const SLeastResult flat = s_least_numeric({1.0, 0.0, 0.0}, {kPi / 6.0});
    CHECK_FALSE(flat.interior);
    CHECK(flat.s == 0.0);
    CHECK(flat.f_min == doctest::Approx(0.25).epsilon(1e-12));

    // rising from zero: balanced fully coherent
    const SLeastResult rise = s_least_numeric({1.0, 1.0, 0.0}, {kPi / 4.0});
    CHECK_FALSE(rise.interior);
    CHECK(rise.s == 0.0);
    CHECK(rise.f_min == 0.0);
}

TEST_CASE("s_least_numeric maps unbalanced cases through the eta equivalence") {
    // r = 1/2 at alpha = pi/4 behaves as the balanced case at eta = atan(1/2)
    const SourceModel m(1.0, 0.5, 0.0);
    const SLeastResult res = s_least_numeric(m, {kPi / 4.0});
    const double expected = s_least_analytic(std::atan(0.5), 0.0, 1.0);
    CHECK(res.interior);
    CHECK(res.s == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(characteristic_residual(m, {kPi / 4.0}, res.s)) < 1e-9);
}
