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
 * Domain types for the two-source field and the partner measurement basis,
 * plus the rotated-basis branch decomposition.
 *
 * Conventions. The imaging point-spread function is the unit-L2-norm
 * amplitude profile psi(x) = (2 pi sigma^2)^(-1/4) exp(-x^2 / (4 sigma^2)),
 * so the overlap of the two shifted profiles is
 * <psi_+|psi_-> = exp(-s^2 / (8 sigma^2)) = overlap_delta(s, sigma). This
 * single identity fixes every closed form downstream.
 *
 * All types are immutable values; everything here is pure and thread-safe.
 */

#pragma once

#include <complex>
#include <utility>

namespace fisherlens {

/**
 * The two-source field: width sigma of the Gaussian amplitude profile,
 * unbalanceness ratio r = b/a >= 0 and relative phase phi (radians).
 * The normalized amplitudes a = 1/sqrt(1+r^2), b = r/sqrt(1+r^2) and the
 * unbalanceness angle eta = atan(r) are derived.
 *
 * r > 1 is accepted and handled directly; phi is kept as given (only
 * cos(phi) ever enters the formulas).
 */
class SourceModel {
  public:
    SourceModel(double sigma, double r, double phi);

    double sigma() const { return sigma_; }
    double r() const { return r_; }
    double phi() const { return phi_; }

    double a() const { return a_; }
    double b() const { return b_; }
    double eta() const; // atan(r), in [0, pi/2)

  private:
    double sigma_;
    double r_;
    double phi_;
    double a_;
    double b_;
};

/// Rotation angle of the partner's measurement basis. Any real angle is
/// representable; the information quantities are pi-periodic through
/// sin(2 alpha) and cos^2(alpha), so [0, pi/2] covers all distinct cases.
struct AnalyzerBasis {
    double alpha = 0.0;
};

/// Coefficients of the two conditional branch states on the non-orthogonal
/// {|h_+>, |h_->} pair, plus the branch weights n1 + n2 = 1.
struct BranchDecomposition {
    std::complex<double> c1_plus;
    std::complex<double> c1_minus;
    std::complex<double> c2_plus;
    std::complex<double> c2_minus;
    double n1;
    double n2;
};

/// Amplitude overlap delta(s) = exp(-s^2 / (8 sigma^2)); delta(0) = 1,
/// strictly decreasing in s. Throws std::domain_error for sigma <= 0 or s < 0.
double overlap_delta(double s, double sigma);

/**
 * Branch decomposition at separation s:
 *   |h1> = a cos(alpha) |h+> - b sin(alpha) e^{i phi} |h->
 *   |h2> = a sin(alpha) |h+> + b cos(alpha) e^{i phi} |h->
 * with weights n_i = <h_i|h_i> evaluated from the coefficients and the
 * Gram matrix [[1, delta], [delta, 1]].
 */
BranchDecomposition branch_decomposition(const SourceModel& model,
                                         const AnalyzerBasis& basis, double s);

/// Central-difference d/ds of the branch weights; dn1 + dn2 = 0 to O(h^2).
std::pair<double, double> weight_derivative(const SourceModel& model,
                                            const AnalyzerBasis& basis,
                                            double s, double h);

} // namespace fisherlens
