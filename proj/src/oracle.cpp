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

#include "fisherlens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fisherlens/kernels.hpp"
#include "fisherlens/numerics.hpp"

namespace fisherlens {
namespace {

constexpr double kWeightFloor = 1e-10;   // branches below this are skipped
constexpr double kBoundaryFrac = 1e-12;  // boundary |h|^2 / peak |h|^2 limit

// trapezoid-weighted dot product of two grid vectors
double tdot(std::span<const double> a, std::span<const double> b, double dx) {
    return dx * (kernels::dot(a, b) - 0.5 * (a.front() * b.front() + a.back() * b.back()));
}

struct BranchRef {
    std::span<const double> re;
    std::span<const double> im;
};

double norm_sq(const BranchRef& v, double dx) {
    return tdot(v.re, v.re, dx) + tdot(v.im, v.im, dx);
}

// One conditional state, normalized in the grid inner product.
struct NormalizedState {
    std::vector<double> re, im;
};

NormalizedState normalized(const BranchRef& v, double dx) {
    NormalizedState u;
    const double inv = 1.0 / std::sqrt(norm_sq(v, dx));
    u.re.resize(v.re.size());
    u.im.resize(v.im.size());
    kernels::scale(inv, v.re, u.re);
    kernels::scale(inv, v.im, u.im);
    return u;
}

// F = 2 Tr[(drho)^2] for rank-1 rho at s +- h, both unit-normalized here:
// Tr[(rho+ - rho-)^2] = 2 (1 - |<u+|u->|^2), evaluated through the
// difference vector d = u+ - u- as
//   1 - |o|^2 = |d|^2 - |d|^4/4 - Im(o)^2
// which avoids the 1 - (1 - eps) cancellation entirely.
double rank1_fi(const NormalizedState& up, const NormalizedState& um,
                double dx, double h) {
    const std::size_t n = up.re.size();
    std::vector<double> dre(n), dim(n);
    kernels::axpby(1.0, up.re, -1.0, um.re, dre);
    kernels::axpby(1.0, up.im, -1.0, um.im, dim);
    const double dd = tdot(dre, dre, dx) + tdot(dim, dim, dx);
    const double imo = tdot(up.re, um.im, dx) - tdot(up.im, um.re, dx);
    return (dd - 0.25 * dd * dd - imo * imo) / (h * h);
}

struct BranchCoeffs {
    double a_plus;              // coefficient of psi(x - s/2), real
    std::complex<double> c_minus; // coefficient of psi(x + s/2)
};

void fill_branch(std::vector<double>& re, std::vector<double>& im,
                 std::span<const double> plus, std::span<const double> minus,
                 const BranchCoeffs& c) {
    re.resize(plus.size());
    im.resize(plus.size());
    kernels::axpby(c.a_plus, plus, c.c_minus.real(), minus, re);
    kernels::scale(c.c_minus.imag(), minus, im);
}

// psi(x -+ s/2) sampled over the grid
void fill_profiles(std::vector<double>& plus, std::vector<double>& minus,
                   const Grid& g, double s, double sigma) {
    plus.resize(g.n);
    minus.resize(g.n);
    kernels::gaussian_amplitude(plus, g.x_lo, g.dx(), +0.5 * s, sigma);
    kernels::gaussian_amplitude(minus, g.x_lo, g.dx(), -0.5 * s, sigma);
}

GridState assemble_state(const SourceModel& model, const AnalyzerBasis& basis,
                         double s, const Grid& grid, bool check) {
    if (check) grid.validate(model.sigma(), s);

    std::vector<double> plus, minus;
    fill_profiles(plus, minus, grid, s, model.sigma());

    const BranchDecomposition bd = branch_decomposition(model, basis, s);
    GridState st;
    fill_branch(st.re1, st.im1, plus, minus, {bd.c1_plus.real(), bd.c1_minus});
    fill_branch(st.re2, st.im2, plus, minus, {bd.c2_plus.real(), bd.c2_minus});

    if (check) {
        // narrow grids leave visible tails at the boundary
        double peak = 0.0, edge = 0.0;
        auto scan = [&](const std::vector<double>& re, const std::vector<double>& im) {
            for (int i = 0; i < grid.n; ++i)
                peak = std::max(peak, re[i] * re[i] + im[i] * im[i]);
            for (int i : {0, grid.n - 1})
                edge = std::max(edge, re[i] * re[i] + im[i] * im[i]);
        };
        scan(st.re1, st.im1);
        scan(st.re2, st.im2);
        if (edge > kBoundaryFrac * peak)
            throw GridError("grid_state: grid too narrow, boundary density above 1e-12 of peak");
    }

    const double dx = grid.dx();
    st.n1 = norm_sq({st.re1, st.im1}, dx);
    st.n2 = norm_sq({st.re2, st.im2}, dx);
    return st;
}

double branch_pair_fi(const Grid& grid, double h, int branch,
                      const GridState& sp, const GridState& sm) {
    const double dx = grid.dx();
    const BranchRef vp = branch == 0 ? BranchRef{sp.re1, sp.im1} : BranchRef{sp.re2, sp.im2};
    const BranchRef vm = branch == 0 ? BranchRef{sm.re1, sm.im1} : BranchRef{sm.re2, sm.im2};
    return rank1_fi(normalized(vp, dx), normalized(vm, dx), dx, h);
}

} // namespace

Grid Grid::standard(double sigma, double s, int n) {
    const double half = 8.0 * sigma + s + 0.02 * sigma;
    return {-half, half, n};
}

void Grid::validate(double sigma, double s) const {
    if (n < 101 || n % 2 == 0)
        throw GridError("Grid: n must be odd and >= 101");
    if (!(x_hi > x_lo))
        throw GridError("Grid: empty span");
    if (x_hi - x_lo < 16.0 * sigma + 2.0 * s)
        throw GridError("Grid: span below 16 sigma + 2 s");
    if (dx() > sigma / 20.0)
        throw GridError("Grid: spacing above sigma/20, results would not be grid-converged");
}

GridState grid_state(const SourceModel& model, const AnalyzerBasis& basis,
                     double s, const Grid& grid) {
    return assemble_state(model, basis, s, grid, true);
}

BranchFi fi_branch_numeric(const SourceModel& model, const AnalyzerBasis& basis,
                           double s, const Grid& grid, double h,
                           bool richardson) {
    if (!(h > 0.0) || !(s >= h))
        throw std::domain_error("fi_branch_numeric: requires s >= h > 0");
    grid.validate(model.sigma(), s + h);

    const GridState center = assemble_state(model, basis, s, grid, false);

    auto eval = [&](double step) {
        const GridState sp = assemble_state(model, basis, s + step, grid, false);
        const GridState sm = assemble_state(model, basis, s - step, grid, false);
        double f1 = 0.0, f2 = 0.0;
        if (center.n1 > kWeightFloor) f1 = branch_pair_fi(grid, step, 0, sp, sm);
        if (center.n2 > kWeightFloor) f2 = branch_pair_fi(grid, step, 1, sp, sm);
        return std::pair{f1, f2};
    };

    BranchFi out;
    const auto [f1h, f2h] = eval(h);
    if (!richardson) {
        out.f1 = f1h;
        out.f2 = f2h;
        return out;
    }
    const auto [f1half, f2half] = eval(0.5 * h);
    out.f1 = (4.0 * f1half - f1h) / 3.0;
    out.f2 = (4.0 * f2half - f2h) / 3.0;
    const double dev = std::max(std::abs(f1half - f1h) / std::max(std::abs(f1half), 1e-3),
                                std::abs(f2half - f2h) / std::max(std::abs(f2half), 1e-3));
    out.step_warning = dev > 1e-5;
    return out;
}

double f_tot_numeric(const SourceModel& model, const AnalyzerBasis& basis,
                     double s, const Grid& grid, double h) {
    const GridState center = grid_state(model, basis, s, grid);
    const BranchFi bf = fi_branch_numeric(model, basis, s, grid, h);
    double total = 0.0;
    if (center.n1 > kWeightFloor) total += center.n1 * bf.f1;
    if (center.n2 > kWeightFloor) total += center.n2 * bf.f2;
    return total;
}

double f_unentangled_numeric(const SourceModel& model, double s,
                             const Grid& grid, double h) {
    if (!(h > 0.0) || !(s >= h))
        throw std::domain_error("f_unentangled_numeric: requires s >= h > 0");
    grid.validate(model.sigma(), s + h);
    const double dx = grid.dx();

    auto state = [&](double ss) {
        std::vector<double> plus, minus;
        fill_profiles(plus, minus, grid, ss, model.sigma());
        const std::complex<double> bphase =
            model.b() * std::complex<double>(std::cos(model.phi()), std::sin(model.phi()));
        NormalizedState u;
        std::vector<double> re(grid.n), im(grid.n);
        kernels::axpby(model.a(), plus, bphase.real(), minus, re);
        kernels::scale(bphase.imag(), minus, im);
        return normalized({re, im}, dx);
    };

    auto eval = [&](double step) {
        return rank1_fi(state(s + step), state(s - step), dx, step);
    };
    const double fh = eval(h);
    const double fhalf = eval(0.5 * h);
    return (4.0 * fhalf - fh) / 3.0;
}

double f_weights(const SourceModel& model, const AnalyzerBasis& basis,
                 double s, double h) {
    const BranchDecomposition bd = branch_decomposition(model, basis, s);
    const auto [dn1, dn2] = weight_derivative(model, basis, s, h);
    double total = 0.0;
    if (bd.n1 > kWeightFloor) total += dn1 * dn1 / bd.n1;
    if (bd.n2 > kWeightFloor) total += dn2 * dn2 / bd.n2;
    return total;
}

double classical_fi_position(const SourceModel& model, const AnalyzerBasis& basis,
                             double s, const Grid& grid, double h) {
    if (!(h > 0.0) || !(s >= h))
        throw std::domain_error("classical_fi_position: requires s >= h > 0");
    grid.validate(model.sigma(), s + h);
    const double dx = grid.dx();

    const GridState s0 = assemble_state(model, basis, s, grid, false);
    const GridState sp = assemble_state(model, basis, s + h, grid, false);
    const GridState sm = assemble_state(model, basis, s - h, grid, false);

    std::vector<double> p0(grid.n), pp(grid.n), pm(grid.n);
    double total = 0.0;
    for (int branch = 0; branch < 2; ++branch) {
        auto re = [&](const GridState& st) -> std::span<const double> {
            return branch == 0 ? st.re1 : st.re2;
        };
        auto im = [&](const GridState& st) -> std::span<const double> {
            return branch == 0 ? st.im1 : st.im2;
        };
        kernels::abs2(re(s0), im(s0), p0);
        kernels::abs2(re(sp), im(sp), pp);
        kernels::abs2(re(sm), im(sm), pm);
        const double peak = *std::max_element(p0.begin(), p0.end());
        if (peak <= 0.0) continue;
        const double floor = 1e-14 * peak;
        const double inv2h = 1.0 / (2.0 * h);
        double acc = kernels::cfi_sum(p0, pp, pm, inv2h, floor);
        // trapezoid end correction
        for (int i : {0, grid.n - 1}) {
            if (p0[i] > floor) {
                const double d = (pp[i] - pm[i]) * inv2h;
                acc -= 0.5 * d * d / p0[i];
            }
        }
        total += dx * acc;
    }
    return total;
}

double default_oracle_step(double sigma) { return 1e-4 * sigma; }

std::vector<SweepPoint> standard_sweep() {
    constexpr double pi = std::numbers::pi;
    const double alphas[] = {0.0, pi / 8.0, pi / 6.0, pi / 4.0, 3.0 * pi / 8.0};
    const double rs[] = {0.0, 0.25, 0.5, 1.0, 2.0};
    const double phis[] = {0.0, pi / 4.0, pi / 2.0, pi};
    std::vector<SweepPoint> pts;
    pts.reserve(20 * 5 * 5 * 4);
    for (int is = 1; is <= 20; ++is)
        for (double alpha : alphas)
            for (double r : rs)
                for (double phi : phis)
                    pts.push_back({0.2 * is, alpha, r, phi});
    return pts;
}

} // namespace fisherlens
