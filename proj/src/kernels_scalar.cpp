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

#include <cassert>

namespace otfsim::kernels::scalar {

void multiply_accumulate(std::span<cplx> out, std::span<const cplx> a, std::span<const cplx> b)
{
    assert(a.size() == out.size() && b.size() == out.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        out[i] += cplx(ar * br - ai * bi, ar * bi + ai * br);
    }
}

void abs2(std::span<const cplx> in, std::span<double> out)
{
    assert(in.size() == out.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = in[i].real() * in[i].real() + in[i].imag() * in[i].imag();
}

double sum_abs2(std::span<const cplx> in)
{
    double acc = 0.0;
    for (const cplx& v : in)
        acc += v.real() * v.real() + v.imag() * v.imag();
    return acc;
}

} // namespace otfsim::kernels::scalar
