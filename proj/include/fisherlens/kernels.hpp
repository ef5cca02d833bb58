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
 * Data-parallel inner-loop kernels with a scalar reference implementation
 * and an AVX2+FMA variant selected at runtime.
 *
 * Every kernel has identical semantics in both backends; the AVX2 variants
 * use polynomial exp/log and may differ from the scalar reference by a few
 * ulp per element (equivalence-tested in tests/test_kernels.cpp). Results
 * are deterministic for a fixed backend.
 */

#pragma once

#include <cstddef>
#include <span>

namespace fisherlens::kernels {

enum class Backend { scalar, avx2 };

/// Backend currently driving all kernels in this process.
Backend active_backend();

/// Force a backend. Returns false (and leaves the backend unchanged) if the
/// requested one is not usable on this CPU. The environment variable
/// FISHERLENS_KERNELS=scalar|avx2 does the same at first use.
bool set_backend(Backend b);

const char* backend_name(Backend b);

/// Sum of all elements.
double sum(std::span<const double> x);

/// Dot product; x and y must have equal length.
double dot(std::span<const double> x, std::span<const double> y);

/// out[i] = exp(x[i]); out may alias x.
void vexp(std::span<const double> x, std::span<double> out);

/// out[i] = a*x[i] + b*y[i]; out may alias x or y.
void axpby(double a, std::span<const double> x, double b,
           std::span<const double> y, std::span<double> out);

/// out[i] = a*x[i]; out may alias x.
void scale(double a, std::span<const double> x, std::span<double> out);

/// out[i] = re[i]^2 + im[i]^2.
void abs2(std::span<const double> re, std::span<const double> im,
          std::span<double> out);

/// Sampled Gaussian amplitude profile of L2-unit norm and width sigma:
///   out[i] = (2*pi*sigma^2)^(-1/4) * exp(-(x0 + i*dx - center)^2 / (4*sigma^2))
void gaussian_amplitude(std::span<double> out, double x0, double dx,
                        double center, double sigma);

/// Log-likelihood accumulation for one measurement branch: with
///   g1 = exp(-(x-s/2)^2/(2 sigma^2)),  g2 = exp(-(x+s/2)^2/(2 sigma^2)),
///   p  = (2 pi sigma^2)^(-1/2) * (w1*g1 + w2*g2 + wc*sqrt(g1*g2)),
/// returns sum_i log(max(p(x[i]), 1e-300)).
double loglik_sum(std::span<const double> xs, double s, double sigma,
                  double w1, double w2, double wc);

/// Classical-information integrand sum with the 0^2/0 := 0 convention:
/// returns sum_i [ p0[i] > floor ? ((pp[i]-pm[i])*inv_two_h)^2 / p0[i] : 0 ].
double cfi_sum(std::span<const double> p0, std::span<const double> pp,
               std::span<const double> pm, double inv_two_h, double floor);

} // namespace fisherlens::kernels
