// Compiled with -mavx2; only reached when the CPU reports AVX2.
#include "gdg/modp_kernels.hpp"

#include <immintrin.h>

namespace gdg::modp::detail {

void axpy_avx2(std::uint32_t* row, const std::uint32_t* src, std::uint32_t f, std::size_t from,
               std::size_t cols, std::uint32_t p)
{
    // Barrett below needs x = row + f*src < 2^31, i.e. p < 2^15.
    if (p >= (1u << 15)) {
        axpy_scalar(row, src, f, from, cols, p);
        return;
    }
    const std::uint32_t barrett = static_cast<std::uint32_t>((std::uint64_t{1} << 32) / p);
    const __m256i F = _mm256_set1_epi32(static_cast<int>(f));
    const __m256i P = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i M = _mm256_set1_epi32(static_cast<int>(barrett));
    std::size_t j = from;
    for (; j + 8 <= cols; j += 8) {
        __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + j));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + j));
        __m256i x = _mm256_add_epi32(r, _mm256_mullo_epi32(s, F));
        __m256i qlo = _mm256_srli_epi64(_mm256_mul_epu32(x, M), 32);
        __m256i qhi = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), M);
        __m256i q = _mm256_blend_epi32(qlo, qhi, 0xAA);
        __m256i red = _mm256_sub_epi32(x, _mm256_mullo_epi32(q, P));
        red = _mm256_min_epu32(red, _mm256_sub_epi32(red, P));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(row + j), red);
    }
    axpy_scalar(row, src, f, j, cols, p);
}

} // namespace gdg::modp::detail
