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

// Scalar reference kernels and the runtime backend dispatch.

#include "fisherlens/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_table.hpp"

namespace fisherlens::kernels {
namespace detail {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void vexp_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void axpby_scalar(double a, const double* x, double b, const double* y,
                  double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_scalar(double a, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void abs2_scalar(const double* re, const double* im, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

void gaussian_amplitude_scalar(double* out, std::size_t n, double x0, double dx,
                               double center, double sigma) {
    const double norm = std::pow(kTwoPi * sigma * sigma, -0.25);
    const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
    const double base = x0 - center;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = base + static_cast<double>(i) * dx;
        out[i] = norm * std::exp(-(t * t) * inv4s2);
    }
}

double loglik_sum_scalar(const double* xs, std::size_t n, double s, double sigma,
                         double w1, double w2, double wc) {
    const double c = 0.5 * s;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const double pref = 1.0 / std::sqrt(kTwoPi * sigma * sigma);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const double t1 = x - c;
        const double t2 = x + c;
        const double g1 = std::exp(-(t1 * t1) * inv2s2);
        const double g2 = std::exp(-(t2 * t2) * inv2s2);
        const double p = pref * (w1 * g1 + w2 * g2 + wc * std::sqrt(g1 * g2));
        acc += std::log(std::max(p, 1e-300));
    }
    return acc;
}

double cfi_sum_scalar(const double* p0, const double* pp, const double* pm,
                      std::size_t n, double inv_two_h, double floor_val) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p0[i] > floor_val) {
            const double d = (pp[i] - pm[i]) * inv_two_h;
            acc += d * d / p0[i];
        }
    }
    return acc;
}

constexpr KernelTable kScalarTable = {
    sum_scalar,    dot_scalar,   vexp_scalar,
    axpby_scalar,  scale_scalar, abs2_scalar,
    gaussian_amplitude_scalar,   loglik_sum_scalar, cfi_sum_scalar,
};

} // namespace

const KernelTable* scalar_kernel_table() { return &kScalarTable; }

} // namespace detail

namespace {

bool avx2_usable() {
#if defined(FISHERLENS_WITH_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    std::atomic<const detail::KernelTable*> table;
    std::atomic<Backend> backend;

    Dispatch() {
        Backend pick = avx2_usable() ? Backend::avx2 : Backend::scalar;
        if (const char* env = std::getenv("FISHERLENS_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) pick = Backend::scalar;
            else if (std::strcmp(env, "avx2") == 0 && avx2_usable()) pick = Backend::avx2;
        }
        install(pick);
    }

    void install(Backend b) {
#if defined(FISHERLENS_WITH_AVX2)
        table.store(b == Backend::avx2 ? detail::avx2_kernel_table()
                                       : detail::scalar_kernel_table());
#else
        table.store(detail::scalar_kernel_table());
        b = Backend::scalar;
#endif
        backend.store(b);
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

inline const detail::KernelTable& tab() { return *dispatch().table.load(); }

} // namespace

Backend active_backend() { return dispatch().backend.load(); }

bool set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_usable()) return false;
    dispatch().install(b);
    return true;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) { return tab().sum(x.data(), x.size()); }

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernels::dot: length mismatch");
    return tab().dot(x.data(), y.data(), x.size());
}

void vexp(std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) throw std::invalid_argument("kernels::vexp: length mismatch");
    tab().vexp(x.data(), out.data(), x.size());
}

void axpby(double a, std::span<const double> x, double b,
           std::span<const double> y, std::span<double> out) {
    if (x.size() != y.size() || x.size() != out.size())
        throw std::invalid_argument("kernels::axpby: length mismatch");
    tab().axpby(a, x.data(), b, y.data(), out.data(), x.size());
}

void scale(double a, std::span<const double> x, std::span<double> out) {
    if (x.size() != out.size()) throw std::invalid_argument("kernels::scale: length mismatch");
    tab().scale(a, x.data(), out.data(), x.size());
}

void abs2(std::span<const double> re, std::span<const double> im, std::span<double> out) {
    if (re.size() != im.size() || re.size() != out.size())
        throw std::invalid_argument("kernels::abs2: length mismatch");
    tab().abs2(re.data(), im.data(), out.data(), re.size());
}

void gaussian_amplitude(std::span<double> out, double x0, double dx,
                        double center, double sigma) {
    tab().gaussian_amplitude(out.data(), out.size(), x0, dx, center, sigma);
}

double loglik_sum(std::span<const double> xs, double s, double sigma,
                  double w1, double w2, double wc) {
    return tab().loglik_sum(xs.data(), xs.size(), s, sigma, w1, w2, wc);
}

double cfi_sum(std::span<const double> p0, std::span<const double> pp,
               std::span<const double> pm, double inv_two_h, double floor) {
    if (p0.size() != pp.size() || p0.size() != pm.size())
        throw std::invalid_argument("kernels::cfi_sum: length mismatch");
    return tab().cfi_sum(p0.data(), pp.data(), pm.data(), p0.size(), inv_two_h, floor);
}

} // namespace fisherlens::kernels
