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

// Internal dispatch table shared between the scalar and AVX2 translation
// units. Not part of the public headers.

#pragma once

#include <cstddef>

namespace fisherlens::kernels::detail {

struct KernelTable {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*vexp)(const double*, double*, std::size_t);
    void (*axpby)(double, const double*, double, const double*, double*, std::size_t);
    void (*scale)(double, const double*, double*, std::size_t);
    void (*abs2)(const double*, const double*, double*, std::size_t);
    void (*gaussian_amplitude)(double*, std::size_t, double, double, double, double);
    double (*loglik_sum)(const double*, std::size_t, double, double, double, double, double);
    double (*cfi_sum)(const double*, const double*, const double*, std::size_t, double, double);
};

const KernelTable* scalar_kernel_table();
#if defined(FISHERLENS_WITH_AVX2)
const KernelTable* avx2_kernel_table();
#endif

} // namespace fisherlens::kernels::detail
