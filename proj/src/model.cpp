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

#include "fisherlens/model.hpp"

#include <cmath>
#include <stdexcept>

#include "fisherlens/numerics.hpp"

namespace fisherlens {

SourceModel::SourceModel(double sigma, double r, double phi)
    : sigma_(sigma), r_(r), phi_(phi) {
    if (!(sigma > 0.0)) throw std::domain_error("SourceModel: sigma must be > 0");
    if (!(r >= 0.0)) throw std::domain_error("SourceModel: r must be >= 0");
    if (!std::isfinite(phi)) throw std::domain_error("SourceModel: phi must be finite");
    const double hyp = std::sqrt(1.0 + r * r);
    a_ = 1.0 / hyp;
    b_ = r / hyp;
}

double SourceModel::eta() const { return std::atan(r_); }

double overlap_delta(double s, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("overlap_delta: sigma must be > 0");
    // even in s, so the s >= 0 precondition extends naturally to the
    // transient negative arguments central differences produce near s = 0
    const double u = s / sigma;
    return std::exp(-u * u / 8.0);
}

BranchDecomposition branch_decomposition(const SourceModel& model,
                                         const AnalyzerBasis& basis, double s) {
    const double ca = std::cos(basis.alpha);
    const double sa = std::sin(basis.alpha);
    const std::complex<double> phase(std::cos(model.phi()), std::sin(model.phi()));
    const double delta = overlap_delta(s, model.sigma());

    BranchDecomposition bd;
    bd.c1_plus = model.a() * ca;
    bd.c1_minus = -model.b() * sa * phase;
    bd.c2_plus = model.a() * sa;
    bd.c2_minus = model.b() * ca * phase;

    // <h|h> = |c+|^2 + |c-|^2 + 2 Re(conj(c+) c-) delta, Gram off-diagonal delta
    auto weight = [delta](std::complex<double> cp, std::complex<double> cm) {
        return std::norm(cp) + std::norm(cm) +
               2.0 * delta * (std::conj(cp) * cm).real();
    };
    bd.n1 = weight(bd.c1_plus, bd.c1_minus);
    bd.n2 = weight(bd.c2_plus, bd.c2_minus);
    return bd;
}

std::pair<double, double> weight_derivative(const SourceModel& model,
                                            const AnalyzerBasis& basis,
                                            double s, double h) {
    const double dn1 = central_diff(
        [&](double ss) { return branch_decomposition(model, basis, ss).n1; }, s, h);
    const double dn2 = central_diff(
        [&](double ss) { return branch_decomposition(model, basis, ss).n2; }, s, h);
    return {dn1, dn2};
}

} // namespace fisherlens
