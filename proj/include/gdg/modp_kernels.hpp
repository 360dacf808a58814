// Dense row reduction over F_p. Scalar reference plus an AVX2 variant chosen at runtime.
#pragma once

#include "gdg/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gdg::modp {

// In-place reduced row echelon form of a row-major rows x cols matrix with
// entries in [0, p). Returns the rank. Results are identical across variants.
std::size_t rref_scalar(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p);
std::size_t rref_avx2(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p);
std::size_t rref(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p);

bool avx2_available();
const char* active_variant();

// Heuristic: dense elimination pays off for moderately filled matrices.
bool dense_preferred(std::uint64_t p, const std::vector<SparseVec>& vectors);
int rank_sparse(const Field& F, const std::vector<SparseVec>& vectors);

namespace detail {
// x^(p-2) mod p; used by both variants for pivot normalization.
std::uint32_t inverse(std::uint32_t a, std::uint32_t p);
// row[j] = (row[j] + f * src[j]) mod p for j in [from, cols), scalar reference.
void axpy_scalar(std::uint32_t* row, const std::uint32_t* src, std::uint32_t f, std::size_t from,
                 std::size_t cols, std::uint32_t p);
void axpy_avx2(std::uint32_t* row, const std::uint32_t* src, std::uint32_t f, std::size_t from,
               std::size_t cols, std::uint32_t p);
} // namespace detail

} // namespace gdg::modp
