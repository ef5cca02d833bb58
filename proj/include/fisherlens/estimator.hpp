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
 * Monte-Carlo Cramer-Rao experiment: simulate joint (branch, position)
 * outcomes of the rotated-basis measurement, estimate s by maximum
 * likelihood, and compare the empirical variance against the information
 * bounds. Everything is deterministic given the seed; trial t of an
 * experiment uses seed + t.
 */

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "fisherlens/model.hpp"

namespace fisherlens {

/// Rejection sampling stopped making progress (envelope bug guard).
struct RejectionStallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Branch : int { b1 = 0, b2 = 1 };

/// One detection event: which rotated-basis branch fired, and where.
struct Outcome {
    Branch branch;
    double x;
};

struct CrbReport {
    double s_true = 0.0;
    int trials = 0;
    int samples_per_trial = 0;
    double mean_estimate = 0.0;
    double variance = 0.0;      // across trials, unbiased (n-1)
    double f_classical = 0.0;   // classical FI of the simulated measurement
    double f_paper = 0.0;       // the weighted branch FI (the headline quantity)
    double crb_classical = 0.0; // 1 / (m * f_classical)
    double crb_paper = 0.0;     // 1 / (m * f_paper)
    double efficiency = 0.0;    // crb_classical / variance
};

/// mt19937_64 with an explicit 53-bit uniform and Box-Muller normal, so
/// streams are reproducible byte-for-byte across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double normal();

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/**
 * Draw m outcomes at separation s_true: the branch by inverse CDF on
 * (n1, n2); the position by rejection against the Gaussian mixture
 * w1 N(s/2, sigma) + w2 N(-s/2, sigma) [+ the nonnegative interference
 * component when it is constructive, making the envelope exact]. The
 * acceptance ratio is n_i over the envelope mass (1 when constructive,
 * typically >= 0.2 otherwise); a stall below 1e-3 observed acceptance
 * throws RejectionStallError.
 */
std::vector<Outcome> sample_outcomes(const SourceModel& model,
                                     const AnalyzerBasis& basis, double s_true,
                                     int m, std::uint64_t seed);

/// Joint log likelihood sum_k log p_{branch_k}(x_k; s) with the
/// unnormalized branch densities p_i = |h_i|^2 (density floored at 1e-300).
double log_likelihood(std::span<const Outcome> outcomes, const SourceModel& model,
                      const AnalyzerBasis& basis, double s);

/**
 * Maximum-likelihood estimate of s over [lo, hi]: a 64-point pre-scan
 * (the likelihood can be multimodal at small m near s = 0) followed by
 * Brent refinement. Sets *boundary_warning when the estimate lands within
 * tolerance of a window edge.
 */
double mle_estimate(std::span<const Outcome> outcomes, const SourceModel& model,
                    const AnalyzerBasis& basis, double lo, double hi,
                    bool* boundary_warning = nullptr);

/// Run `trials` independent experiments of m outcomes each (trial t seeded
/// with seed + t) and report the variance of the MLE against both bounds.
CrbReport crb_experiment(const SourceModel& model, const AnalyzerBasis& basis,
                         double s_true, int m, int trials, std::uint64_t seed);

} // namespace fisherlens
