#include "gdg/modp_kernels.hpp"

#include <algorithm>
#include <map>

namespace gdg::modp {

namespace detail {

std::uint32_t inverse(std::uint32_t a, std::uint32_t p)
{
    std::uint64_t base = a % p, result = 1;
    std::uint64_t e = p - 2;
    while (e) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

void axpy_scalar(std::uint32_t* row, const std::uint32_t* src, std::uint32_t f, std::size_t from,
                 std::size_t cols, std::uint32_t p)
{
    for (std::size_t j = from; j < cols; ++j)
        row[j] = static_cast<std::uint32_t>((row[j] + static_cast<std::uint64_t>(f) * src[j]) % p);
}

} // namespace detail

namespace {

using Axpy = void (*)(std::uint32_t*, const std::uint32_t*, std::uint32_t, std::size_t, std::size_t,
                      std::uint32_t);

std::size_t rref_with(Axpy axpy, std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p)
{
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (m[r * cols + c] != 0) {
                piv = r;
                break;
            }
        if (piv == rows) continue;
        if (piv != rank)
            std::swap_ranges(m + piv * cols, m + (piv + 1) * cols, m + rank * cols);
        std::uint32_t* prow = m + rank * cols;
        std::uint32_t inv = detail::inverse(prow[c], p);
        for (std::size_t j = c; j < cols; ++j)
            prow[j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(prow[j]) * inv % p);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            std::uint32_t f = m[r * cols + c];
            if (f == 0) continue;
            axpy(m + r * cols, prow, p - f, c, cols, p);
        }
        ++rank;
    }
    return rank;
}

} // namespace

std::size_t rref_scalar(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p)
{
    return rref_with(detail::axpy_scalar, m, rows, cols, p);
}

std::size_t rref_avx2(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p)
{
    return rref_with(detail::axpy_avx2, m, rows, cols, p);
}

bool avx2_available()
{
#if defined(__x86_64__) || defined(__i386__)
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

const char* active_variant()
{
    return avx2_available() ? "avx2" : "scalar";
}

std::size_t rref(std::uint32_t* m, std::size_t rows, std::size_t cols, std::uint32_t p)
{
    return avx2_available() ? rref_avx2(m, rows, cols, p) : rref_scalar(m, rows, cols, p);
}

bool dense_preferred(std::uint64_t p, const std::vector<SparseVec>& vectors)
{
    if (p < 2 || vectors.size() < 8) return false;
    std::size_t nnz = 0;
    int maxcol = 0;
    for (const auto& v : vectors) {
        nnz += v.size();
        if (!v.empty()) maxcol = std::max(maxcol, v.back().first);
    }
    std::size_t cells = vectors.size() * static_cast<std::size_t>(maxcol + 1);
    return cells <= (std::size_t{1} << 24) && nnz * 16 >= cells;
}

int rank_sparse(const Field& F, const std::vector<SparseVec>& vectors)
{
    std::map<int, std::size_t> colmap;
    for (const auto& v : vectors)
        for (const auto& e : v) colmap.emplace(e.first, 0);
    std::size_t cols = 0;
    for (auto& kv : colmap) kv.second = cols++;
    if (cols == 0) return 0;
    std::size_t rows = vectors.size();
    std::vector<std::uint32_t> m(rows * cols, 0);
    for (std::size_t r = 0; r < rows; ++r)
        for (const auto& [i, a] : vectors[r]) m[r * cols + colmap[i]] = F.residue(a);
    return static_cast<int>(rref(m.data(), rows, cols, static_cast<std::uint32_t>(F.characteristic())));
}

} // namespace gdg::modp
