// Sparse exact linear algebra over a Field.
#pragma once

#include "gdg/field.hpp"

#include <map>
#include <utility>
#include <vector>

namespace gdg {

// Sorted by index, no stored zeros.
using SparseVec = std::vector<std::pair<int, Scalar>>;

SparseVec sparse_unit(int i);
SparseVec sparse_axpy(const Field& F, const Scalar& a, const SparseVec& x, const SparseVec& y);
SparseVec sparse_scale(const Field& F, const Scalar& a, const SparseVec& x);
SparseVec sparse_from_map(const Field& F, const std::map<int, Scalar>& m);

// Row echelon basis with the largest index as pivot. Optionally every stored
// row carries a tag: its expression in terms of the inserted vectors.
class Echelon {
public:
    explicit Echelon(Field F, bool tagged = false) : F_(std::move(F)), tagged_(tagged) {}

    // Inserts v (tag defaults to the unit vector of the insertion count).
    // Returns true when v was independent of the rows so far. When v is
    // dependent and the echelon is tagged, *relation receives a tag vector
    // that combines inserted vectors to zero.
    bool insert(const SparseVec& v, SparseVec* relation = nullptr);
    bool insert_tagged(const SparseVec& v, const SparseVec& tag, SparseVec* relation = nullptr);

    // Residual of x modulo the span; coeffs (tagged only) satisfy
    // x = residual + sum coeffs[i] * inserted_i.
    SparseVec reduce(const SparseVec& x, SparseVec* coeffs = nullptr) const;
    bool contains(const SparseVec& x) const { return reduce(x).empty(); }

    int rank() const { return static_cast<int>(rows_.size()); }
    int inserted() const { return inserted_; }
    const std::map<int, SparseVec>& rows() const { return rows_; }
    std::vector<int> pivots() const;
    const Field& field() const { return F_; }

private:
    Field F_;
    bool tagged_;
    int inserted_ = 0;
    std::map<int, SparseVec> rows_;
    std::map<int, SparseVec> tags_;
};

// Kernel of the map sending unit vector i to images[i].
std::vector<SparseVec> kernel_basis(const Field& F, const std::vector<SparseVec>& images);
int rank_of(const Field& F, const std::vector<SparseVec>& vectors);
// dim(span(a) + span(b)).
int rank_of_union(const Field& F, const std::vector<SparseVec>& a, const std::vector<SparseVec>& b);

// Image of vectors under a linear map given by columns.
SparseVec apply_columns(const Field& F, const std::vector<SparseVec>& columns, const SparseVec& x);

} // namespace gdg
