#include "doctest.h"
#include "support.hpp"

#include "gdg/linalg.hpp"
#include "gdg/modp_kernels.hpp"

using namespace gdg;

namespace {

std::vector<SparseVec> random_vectors(test::Rng& rng, int count, int dim, const Field& F, int fill)
{
    std::vector<SparseVec> out;
    for (int i = 0; i < count; ++i) {
        std::map<int, Scalar> m;
        for (int j = 0; j < dim; ++j)
            if (rng.range(0, 99) < fill) m[j] = Scalar(rng.range(-5, 5), F.is_rational() ? rng.range(1, 4) : 1);
        out.push_back(sparse_from_map(F, m));
    }
    // Plant dependencies.
    if (count >= 3) out.push_back(sparse_axpy(F, Scalar(2), out[0], sparse_scale(F, Scalar(-3), out[1])));
    return out;
}

} // namespace

TEST_CASE("echelon rank, reduce and relations")
{
    Field Q;
    test::Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto vs = random_vectors(rng, rng.range(1, 8), rng.range(1, 9), Q, 40);
        Echelon E(Q, true);
        for (const auto& v : vs) {
            SparseVec rel;
            bool fresh = E.insert(v, &rel);
            if (!fresh) {
                // rel combines inserted vectors (including v) to zero.
                SparseVec sum;
                for (const auto& [i, c] : rel) sum = sparse_axpy(Q, c, vs[i], sum);
                CHECK(sum.empty());
            }
        }
        CHECK(E.rank() == rank_of(Q, vs));
        for (const auto& v : vs) CHECK(E.contains(v));
        auto K = kernel_basis(Q, vs);
        CHECK(static_cast<int>(K.size()) + E.rank() == static_cast<int>(vs.size()));
        for (const auto& k : K) {
            SparseVec img;
            for (const auto& [i, c] : k) img = sparse_axpy(Q, c, vs[i], img);
            CHECK(img.empty());
        }
    }
}

TEST_CASE("rank over F_p: sparse elimination and dense kernel agree")
{
    for (std::uint32_t p : {2u, 3u, 7u, 65521u}) {
        Field F(p);
        test::Rng rng(p);
        for (int trial = 0; trial < 30; ++trial) {
            auto vs = random_vectors(rng, rng.range(1, 30), rng.range(1, 40), F, rng.range(10, 90));
            CHECK(modp::rank_sparse(F, vs) == rank_of(F, vs));
        }
    }
}

TEST_CASE("dense mod-p kernels: scalar and AVX2 give identical results")
{
    if (!modp::avx2_available()) {
        MESSAGE("AVX2 not available; only the scalar kernel runs");
    }
    for (std::uint32_t p : {2u, 3u, 5u, 251u, 32749u, 65521u, 2147483629u}) {
        test::Rng rng(p * 31 + 1);
        for (int trial = 0; trial < 25; ++trial) {
            std::size_t rows = rng.range(1, 40), cols = rng.range(1, 70);
            std::vector<std::uint32_t> m(rows * cols);
            for (auto& x : m) x = rng.range(0, 3) == 0 ? static_cast<std::uint32_t>(rng.next() % p) : 0;
            auto a = m, b = m;
            auto ra = modp::rref_scalar(a.data(), rows, cols, p);
            CHECK(ra <= std::min(rows, cols));
            if (modp::avx2_available()) {
                auto rb = modp::rref_avx2(b.data(), rows, cols, p);
                CHECK(ra == rb);
                CHECK(a == b);
            }
            // Row spaces agree with the exact sparse rank.
            Field F(p);
            std::vector<SparseVec> vs;
            for (std::size_t r = 0; r < rows; ++r) {
                std::map<int, Scalar> row;
                for (std::size_t c = 0; c < cols; ++c)
                    if (m[r * cols + c]) row[static_cast<int>(c)] = Scalar(m[r * cols + c]);
                vs.push_back(sparse_from_map(F, row));
            }
            CHECK(static_cast<int>(ra) == rank_of(F, vs));
        }
    }
}

TEST_CASE("axpy kernels agree on ragged lengths")
{
    if (!modp::avx2_available()) return;
    test::Rng rng(99);
    for (std::uint32_t p : {3u, 32749u, 65521u, 2147483629u})
        for (std::size_t cols = 1; cols < 40; ++cols)
            for (std::size_t from = 0; from < cols; from += 3) {
                std::vector<std::uint32_t> row(cols), src(cols);
                for (auto& x : row) x = static_cast<std::uint32_t>(rng.next() % p);
                for (auto& x : src) x = static_cast<std::uint32_t>(rng.next() % p);
                auto f = static_cast<std::uint32_t>(rng.next() % p);
                auto a = row, b = row;
                modp::detail::axpy_scalar(a.data(), src.data(), f, from, cols, p);
                modp::detail::axpy_avx2(b.data(), src.data(), f, from, cols, p);
                CHECK(a == b);
            }
}

TEST_CASE("prime-field inverse")
{
    for (std::uint32_t p : {3u, 7u, 65521u})
        for (std::uint32_t a = 1; a < std::min(p, 200u); ++a)
            CHECK(static_cast<std::uint64_t>(a) * modp::detail::inverse(a, p) % p == 1);
}
