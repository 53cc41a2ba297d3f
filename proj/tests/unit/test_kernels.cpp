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

#include <doctest.h>

#include <cstdlib>
#include <vector>

#include "otfsim/kernels.hpp"
#include "test_util.hpp"

using namespace otfsim;

namespace {

std::vector<cplx> random_values(std::size_t n, std::uint64_t seed)
{
    const CVector v = test::random_vector(static_cast<Eigen::Index>(n), seed);
    return {v.data(), v.data() + v.size()};
}

// Lengths around the 2-lane vector width and the unrolled body.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 127, 1215};

} // namespace

TEST_CASE("dispatch names and fallbacks")
{
    CHECK(kernels::to_string(kernels::Isa::scalar) == "scalar");
    CHECK(kernels::to_string(kernels::Isa::avx2) == "avx2");
    CHECK(kernels::isa_supported(kernels::Isa::scalar));

    kernels::set_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    if (!kernels::isa_supported(kernels::Isa::avx2))
        CHECK_THROWS(kernels::set_isa(kernels::Isa::avx2));
    kernels::reset_isa();
}

TEST_CASE("scalar reference against plain loops")
{
    for (std::size_t n : kLengths) {
        auto a = random_values(n, 10 + n);
        auto b = random_values(n, 20 + n);
        auto out = random_values(n, 30 + n);
        auto expect = out;
        double total = 0.0;
        std::vector<double> mags(n);
        for (std::size_t i = 0; i < n; ++i) {
            expect[i] += a[i] * b[i];
            total += std::norm(a[i]);
            mags[i] = std::norm(a[i]);
        }
        kernels::scalar::multiply_accumulate(out, a, b);
        std::vector<double> got(n);
        kernels::scalar::abs2(a, got);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(out[i] - expect[i]) < 1e-14);
            CHECK(got[i] == doctest::Approx(mags[i]).epsilon(1e-15));
        }
        CHECK(kernels::scalar::sum_abs2(a) == doctest::Approx(total).epsilon(1e-13));
    }
}

#if OTFSIM_HAVE_AVX2_KERNELS
TEST_CASE("avx2 variants match the scalar reference")
{
    if (!kernels::isa_supported(kernels::Isa::avx2)) {
        MESSAGE("AVX2 not available on this CPU; skipping");
        return;
    }
    for (std::size_t n : kLengths) {
        CAPTURE(n);
        auto a = random_values(n, 100 + n);
        auto b = random_values(n, 200 + n);
        auto out_s = random_values(n, 300 + n);
        auto out_v = out_s;
        kernels::scalar::multiply_accumulate(out_s, a, b);
        kernels::avx2::multiply_accumulate(out_v, a, b);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(out_s[i] - out_v[i]) < 1e-14);

        std::vector<double> m_s(n), m_v(n);
        kernels::scalar::abs2(a, m_s);
        kernels::avx2::abs2(a, m_v);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(m_v[i] == doctest::Approx(m_s[i]).epsilon(1e-15));

        CHECK(kernels::avx2::sum_abs2(a) == doctest::Approx(kernels::scalar::sum_abs2(a)).epsilon(1e-13));
    }
}

TEST_CASE("avx2 handles unaligned spans")
{
    if (!kernels::isa_supported(kernels::Isa::avx2))
        return;
    auto a = random_values(40, 7);
    auto b = random_values(40, 8);
    auto out_s = random_values(40, 9);
    auto out_v = out_s;
    std::span<cplx> os(out_s.data() + 1, 37), ov(out_v.data() + 1, 37);
    std::span<const cplx> sa(a.data() + 3, 37), sb(b.data() + 1, 37);
    kernels::scalar::multiply_accumulate(os, sa, sb);
    kernels::avx2::multiply_accumulate(ov, sa, sb);
    for (std::size_t i = 0; i < out_s.size(); ++i)
        CHECK(std::abs(out_s[i] - out_v[i]) < 1e-14);
}
#endif

TEST_CASE("dispatched entry points follow set_isa")
{
    auto a = random_values(33, 1);
    auto b = random_values(33, 2);
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        if (!kernels::isa_supported(isa))
            continue;
        kernels::set_isa(isa);
        std::vector<cplx> out(33, cplx{}), ref(33, cplx{});
        kernels::multiply_accumulate(out, a, b);
        kernels::scalar::multiply_accumulate(ref, a, b);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(std::abs(out[i] - ref[i]) < 1e-14);
        CHECK(kernels::sum_abs2(a) == doctest::Approx(kernels::scalar::sum_abs2(a)).epsilon(1e-13));
    }
    kernels::reset_isa();
}
