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

#include "otfsim/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace otfsim::kernels {

namespace {

bool cpu_has_avx2()
{
#if defined(OTFSIM_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa default_isa()
{
    const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("OTFSIM_ISA"))
    {
        const std::string want(env);
        if (want == "scalar")
            return Isa::scalar;
        if (want == "avx2" && best == Isa::avx2)
            return Isa::avx2;
    }
    return best;
}

std::atomic<Isa>& current()
{
    static std::atomic<Isa> isa{default_isa()};
    return isa;
}

} // namespace

std::string_view to_string(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa)
{
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa()
{
    return current().load(std::memory_order_relaxed);
}

void set_isa(Isa isa)
{
    if (!isa_supported(isa))
        throw std::invalid_argument("kernel ISA not supported on this CPU: " + std::string(to_string(isa)));
    current().store(isa, std::memory_order_relaxed);
}

void reset_isa()
{
    current().store(default_isa(), std::memory_order_relaxed);
}

#if defined(OTFSIM_HAVE_AVX2_KERNELS)
#define OTFSIM_DISPATCH(fn, ...) \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define OTFSIM_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b)
{
    OTFSIM_DISPATCH(multiply_accumulate, out, a, b);
}

void abs2(std::span<const cplx> in, std::span<double> out)
{
    OTFSIM_DISPATCH(abs2, in, out);
}

double sum_abs2(std::span<const cplx> in)
{
    return OTFSIM_DISPATCH(sum_abs2, in);
}

#undef OTFSIM_DISPATCH

} // namespace otfsim::kernels
