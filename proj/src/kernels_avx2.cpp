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

// Compiled with -mavx2 -mfma; only reached after a runtime CPUID check.

#include "otfsim/kernels.hpp"

#include <cassert>

#include <immintrin.h>

namespace otfsim::kernels::avx2 {

namespace {

// (ar, ai, ar', ai') * (br, bi, br', bi') for two interleaved complex values
inline __m256d complex_mul(__m256d a, __m256d b)
{
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    const __m256d b_sw = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

} // namespace

void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b)
{
    assert(a.size() == out.size() && b.size() == out.size());
    const std::size_t n = out.size();
    auto* po = reinterpret_cast<double*>(out.data());
    const auto* pa = reinterpret_cast<const double*>(a.data());
    const auto* pb = reinterpret_cast<const double*>(b.data());

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const std::size_t k = 2 * i;
        __m256d o0 = _mm256_loadu_pd(po + k);
        __m256d o1 = _mm256_loadu_pd(po + k + 4);
        o0 = _mm256_add_pd(o0, complex_mul(_mm256_loadu_pd(pa + k), _mm256_loadu_pd(pb + k)));
        o1 = _mm256_add_pd(o1, complex_mul(_mm256_loadu_pd(pa + k + 4), _mm256_loadu_pd(pb + k + 4)));
        _mm256_storeu_pd(po + k, o0);
        _mm256_storeu_pd(po + k + 4, o1);
    }
    for (; i + 2 <= n; i += 2)
    {
        const std::size_t k = 2 * i;
        __m256d o = _mm256_loadu_pd(po + k);
        o = _mm256_add_pd(o, complex_mul(_mm256_loadu_pd(pa + k), _mm256_loadu_pd(pb + k)));
        _mm256_storeu_pd(po + k, o);
    }
    for (; i < n; ++i)
    {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        out[i] += cplx(ar * br - ai * bi, ar * bi + ai * br);
    }
}

void abs2(std::span<const cplx> in, std::span<double> out)
{
    assert(in.size() == out.size());
    const std::size_t n = in.size();
    const auto* pi = reinterpret_cast<const double*>(in.data());
    double* po = out.data();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const __m256d v0 = _mm256_loadu_pd(pi + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(pi + 2 * i + 4);
        // hadd yields (|c0|^2, |c2|^2, |c1|^2, |c3|^2)
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        _mm256_storeu_pd(po + i, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; i < n; ++i)
        po[i] = in[i].real() * in[i].real() + in[i].imag() * in[i].imag();
}

double sum_abs2(std::span<const cplx> in)
{
    const std::size_t n = in.size();
    const auto* p = reinterpret_cast<const double*>(in.data());

    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const __m256d v0 = _mm256_loadu_pd(p + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i)
        acc += in[i].real() * in[i].real() + in[i].imag() * in[i].imag();
    return acc;
}

} // namespace otfsim::kernels::avx2
