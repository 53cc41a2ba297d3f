// SPDX-License-Identifier: Apache-2.0
//
// otfsim: matrix-vector simulation of time-frequency signaling over
// doubly dispersive channels.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The variant is chosen once at runtime from the CPU's feature bits and can
// be pinned with OTFSIM_ISA=scalar|avx2 or set_isa() (tests use the latter
// to check that both variants agree).

#include <span>
#include <string_view>

#include "otfsim/types.hpp"

namespace otfsim::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
void set_isa(Isa isa);
void reset_isa();

/// out[i] += a[i] * b[i]
void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b);

/// out[i] = |in[i]|^2
void abs2(std::span<const cplx> in, std::span<double> out);

/// Sum of |in[i]|^2.
double sum_abs2(std::span<const cplx> in);

namespace scalar {
void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b);
void abs2(std::span<const cplx> in, std::span<double> out);
double sum_abs2(std::span<const cplx> in);
} // namespace scalar

namespace avx2 {
void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b);
void abs2(std::span<const cplx> in, std::span<double> out);
double sum_abs2(std::span<const cplx> in);
} // namespace avx2

} // namespace otfsim::kernels
