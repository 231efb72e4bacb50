// Sparse exact linear algebra over Q: rref, solve, nullspace.
//
// Pivoting is deterministic: columns are scanned left to right in the order
// they were given (callers lay columns out in the global basis-key order),
// and within a column the topmost unused row wins. No magnitude pivoting;
// over Q none is needed, and reproducible certificates require none.
#pragma once

#include "forma/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace forma {

class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Optional opaque basis keys for the columns, used only in reports.
    std::vector<std::string> col_labels;

    const Rational& at(int r, int c) const;
    void set(int r, int c, const Rational& v);
    void add(int r, int c, const Rational& v);
    const std::map<int, Rational>& row(int r) const { return data_[r]; }

    bool is_zero() const;
    int nnz() const;

    SparseMatrix transpose() const;

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator*(const Rational& s, const SparseMatrix& a);
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

    std::vector<Rational> apply(const std::vector<Rational>& x) const;

private:
    int rows_, cols_;
    std::vector<std::map<int, Rational>> data_;  // row -> {col -> nonzero}
};

struct RrefResult {
    SparseMatrix mat;
    std::vector<int> pivots;  // strictly increasing pivot columns
};

RrefResult rref(const SparseMatrix& m);

int rank(const SparseMatrix& m);

/// Some exact solution of M x = b if consistent (free variables zeroed),
/// std::nullopt otherwise. Throws on dimension mismatch.
std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b);

/// Deterministically ordered exact basis of ker M, one vector per free column
/// in increasing column order.
std::vector<std::vector<Rational>> nullspace(const SparseMatrix& m);

/// Inverse of a square invertible matrix; throws if singular.
SparseMatrix inverse(const SparseMatrix& m);

SparseMatrix from_columns(int rows, const std::vector<std::vector<Rational>>& cols);

}  // namespace forma
