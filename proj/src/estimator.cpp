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

#include "fisherlens/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "fisherlens/fisher.hpp"
#include "fisherlens/kernels.hpp"
#include "fisherlens/numerics.hpp"
#include "fisherlens/oracle.hpp"

namespace fisherlens {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// density weights of branch i: p_i(x)/C = w1 g1 + w2 g2 + wc sqrt(g1 g2)
// with g1/g2 the intensity Gaussians at +-s/2 (see kernels::loglik_sum)
struct DensityWeights {
    double w1, w2, wc;
};

DensityWeights density_weights(const BranchDecomposition& bd, Branch br) {
    const std::complex<double> cp = br == Branch::b1 ? bd.c1_plus : bd.c2_plus;
    const std::complex<double> cm = br == Branch::b1 ? bd.c1_minus : bd.c2_minus;
    return {std::norm(cp), std::norm(cm), 2.0 * cp.real() * cm.real() + 2.0 * cp.imag() * cm.imag()};
}

// positions grouped by branch, the layout the loglik kernel wants
struct GroupedOutcomes {
    std::vector<double> x1, x2;
};

GroupedOutcomes group(std::span<const Outcome> outcomes) {
    GroupedOutcomes g;
    for (const Outcome& o : outcomes)
        (o.branch == Branch::b1 ? g.x1 : g.x2).push_back(o.x);
    return g;
}

double grouped_loglik(const GroupedOutcomes& g, const SourceModel& model,
                      const AnalyzerBasis& basis, double s) {
    const BranchDecomposition bd = branch_decomposition(model, basis, s);
    double total = 0.0;
    if (!g.x1.empty()) {
        const DensityWeights w = density_weights(bd, Branch::b1);
        total += kernels::loglik_sum(g.x1, s, model.sigma(), w.w1, w.w2, w.wc);
    }
    if (!g.x2.empty()) {
        const DensityWeights w = density_weights(bd, Branch::b2);
        total += kernels::loglik_sum(g.x2, s, model.sigma(), w.w1, w.w2, w.wc);
    }
    return total;
}

} // namespace

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

std::vector<Outcome> sample_outcomes(const SourceModel& model,
                                     const AnalyzerBasis& basis, double s_true,
                                     int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_outcomes: m must be >= 1");
    Rng rng(seed);
    const double sigma = model.sigma();
    const double delta = overlap_delta(s_true, sigma);
    const BranchDecomposition bd = branch_decomposition(model, basis, s_true);

    std::vector<Outcome> out;
    out.reserve(m);
    long proposals = 0, accepts = 0;

    for (int k = 0; k < m; ++k) {
        const Branch br = rng.uniform() < bd.n1 ? Branch::b1 : Branch::b2;
        const DensityWeights w = density_weights(bd, br);
        const double cross = w.wc * delta; // mass of the N(0, sigma) component
        const double env_cross = std::max(cross, 0.0);
        const double env_mass = w.w1 + w.w2 + env_cross;

        for (;;) {
            ++proposals;
            if (proposals >= 10000 && accepts < 1e-3 * proposals)
                throw RejectionStallError(
                    "sample_outcomes: acceptance below 1e-3, envelope is wrong");
            // pick an envelope component, then a Gaussian position
            const double pick = rng.uniform() * env_mass;
            double mu = 0.0;
            if (pick < w.w1) mu = 0.5 * s_true;
            else if (pick < w.w1 + w.w2) mu = -0.5 * s_true;
            const double x = mu + sigma * rng.normal();

            const double t1 = x - 0.5 * s_true;
            const double t2 = x + 0.5 * s_true;
            const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
            const double g1 = std::exp(-t1 * t1 * inv2s2);
            const double g2 = std::exp(-t2 * t2 * inv2s2);
            const double g0 = std::exp(-x * x * inv2s2);
            const double target = w.w1 * g1 + w.w2 * g2 + cross * g0;
            const double envelope = w.w1 * g1 + w.w2 * g2 + env_cross * g0;
            if (rng.uniform() * envelope <= target) {
                ++accepts;
                out.push_back({br, x});
                break;
            }
        }
    }
    return out;
}

double log_likelihood(std::span<const Outcome> outcomes, const SourceModel& model,
                      const AnalyzerBasis& basis, double s) {
    return grouped_loglik(group(outcomes), model, basis, s);
}

double mle_estimate(std::span<const Outcome> outcomes, const SourceModel& model,
                    const AnalyzerBasis& basis, double lo, double hi,
                    bool* boundary_warning) {
    if (!(lo < hi)) throw std::invalid_argument("mle_estimate: requires lo < hi");
    if (boundary_warning) *boundary_warning = false;
    const GroupedOutcomes g = group(outcomes);

    constexpr int kScan = 64;
    double best_s = lo, best_ll = -HUGE_VAL;
    int best_i = 0;
    std::vector<double> scan_s(kScan);
    for (int i = 0; i < kScan; ++i) {
        scan_s[i] = lo + (hi - lo) * (i + 0.5) / kScan;
        const double ll = grouped_loglik(g, model, basis, scan_s[i]);
        if (ll > best_ll) {
            best_ll = ll;
            best_s = scan_s[i];
            best_i = i;
        }
    }
    const double blo = best_i > 0 ? scan_s[best_i - 1] : lo;
    const double bhi = best_i < kScan - 1 ? scan_s[best_i + 1] : hi;
    const MinimizeResult res = minimize_scalar(
        [&](double s) { return -grouped_loglik(g, model, basis, s); }, blo, bhi);
    double est = res.x;
    if (-res.fx < best_ll) est = best_s; // refinement must not lose to the scan

    if (boundary_warning) {
        const double edge_tol = 1e-4 * (hi - lo);
        *boundary_warning = (est - lo) < edge_tol || (hi - est) < edge_tol;
    }
    return est;
}

CrbReport crb_experiment(const SourceModel& model, const AnalyzerBasis& basis,
                         double s_true, int m, int trials, std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("crb_experiment: trials must be >= 2");

    CrbReport rep;
    rep.s_true = s_true;
    rep.trials = trials;
    rep.samples_per_trial = m;

    const double hi = 6.0 * model.sigma();
    std::vector<double> estimates(trials);
    for (int t = 0; t < trials; ++t) {
        const std::vector<Outcome> outcomes =
            sample_outcomes(model, basis, s_true, m, seed + static_cast<std::uint64_t>(t));
        estimates[t] = mle_estimate(outcomes, model, basis, 0.0, hi);
    }

    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= trials;
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= (trials - 1);

    rep.mean_estimate = mean;
    rep.variance = var;

    const Grid grid = Grid::standard(model.sigma(), s_true);
    const double h = default_oracle_step(model.sigma());
    rep.f_classical = classical_fi_position(model, basis, s_true, grid, h);
    rep.f_paper = f_tot(model, basis, s_true);
    rep.crb_classical = 1.0 / (m * rep.f_classical);
    rep.crb_paper = 1.0 / (m * rep.f_paper);
    rep.efficiency = rep.crb_classical / var;
    return rep;
}

} // namespace fisherlens
