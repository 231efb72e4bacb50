#include "forma/sparse_matrix.hpp"

namespace forma {

namespace {
const Rational kZero;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.set(i, i, Rational(1));
    return m;
}

const Rational& SparseMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw error("SparseMatrix::at: index out of range");
    auto it = data_[r].find(c);
    return it == data_[r].end() ? kZero : it->second;
}

void SparseMatrix::set(int r, int c, const Rational& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw error("SparseMatrix::set: index out of range");
    if (v.is_zero())
        data_[r].erase(c);
    else
        data_[r][c] = v;
}

void SparseMatrix::add(int r, int c, const Rational& v) {
    if (v.is_zero())
        return;
    auto it = data_[r].find(c);
    if (it == data_[r].end()) {
        data_[r][c] = v;
    } else {
        it->second += v;
        if (it->second.is_zero())
            data_[r].erase(it);
    }
}

bool SparseMatrix::is_zero() const {
    for (const auto& row : data_)
        if (!row.empty())
            return false;
    return true;
}

int SparseMatrix::nnz() const {
    int n = 0;
    for (const auto& row : data_)
        n += static_cast<int>(row.size());
    return n;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            t.data_[c][r] = v;
    return t;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_)
        throw error("SparseMatrix: product shape mismatch");
    SparseMatrix out(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
        for (const auto& [k, av] : a.data_[r])
            for (const auto& [c, bv] : b.data_[k])
                out.add(r, c, av * bv);
    return out;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw error("SparseMatrix: sum shape mismatch");
    SparseMatrix out = a;
    for (int r = 0; r < b.rows_; ++r)
        for (const auto& [c, v] : b.data_[r])
            out.add(r, c, v);
    return out;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    return a + Rational(-1) * b;
}

SparseMatrix operator*(const Rational& s, const SparseMatrix& a) {
    SparseMatrix out(a.rows_, a.cols_);
    if (s.is_zero())
        return out;
    for (int r = 0; r < a.rows_; ++r)
        for (const auto& [c, v] : a.data_[r])
            out.data_[r][c] = s * v;
    return out;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw error("SparseMatrix::apply: dimension mismatch");
    std::vector<Rational> y(rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, v] : data_[r])
            y[r] += v * x[c];
    return y;
}

namespace {

// Gauss-Jordan on a row-major copy; returns pivot columns. `aug` marks how
// many trailing columns are an augmented part excluded from pivot search.
std::vector<int> eliminate(std::vector<std::map<int, Rational>>& rows, int ncols, int aug) {
    std::vector<int> pivots;
    int next_row = 0;
    int nrows = static_cast<int>(rows.size());
    for (int c = 0; c < ncols - aug && next_row < nrows; ++c) {
        int pr = -1;
        for (int r = next_row; r < nrows; ++r) {
            auto it = rows[r].find(c);
            if (it != rows[r].end()) {
                pr = r;
                break;
            }
        }
        if (pr < 0)
            continue;
        std::swap(rows[pr], rows[next_row]);
        Rational inv = rows[next_row].at(c).inv();
        for (auto& [cc, v] : rows[next_row])
            v *= inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == next_row)
                continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end())
                continue;
            Rational f = it->second;
            for (const auto& [cc, v] : rows[next_row]) {
                Rational delta = f * v;
                auto jt = rows[r].find(cc);
                if (jt == rows[r].end()) {
                    rows[r][cc] = -delta;
                } else {
                    jt->second -= delta;
                    if (jt->second.is_zero())
                        rows[r].erase(jt);
                }
            }
        }
        pivots.push_back(c);
        ++next_row;
    }
    return pivots;
}

std::vector<std::map<int, Rational>> copy_rows(const SparseMatrix& m) {
    std::vector<std::map<int, Rational>> rows(m.rows());
    for (int r = 0; r < m.rows(); ++r)
        rows[r] = m.row(r);
    return rows;
}

}  // namespace

RrefResult rref(const SparseMatrix& m) {
    auto rows = copy_rows(m);
    auto pivots = eliminate(rows, m.cols(), 0);
    SparseMatrix out(m.rows(), m.cols());
    out.col_labels = m.col_labels;
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : rows[r])
            out.set(r, c, v);
    return {std::move(out), std::move(pivots)};
}

int rank(const SparseMatrix& m) {
    return static_cast<int>(rref(m).pivots.size());
}

std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != m.rows())
        throw error("solve: rhs length does not match row count");
    auto rows = copy_rows(m);
    int bc = m.cols();
    for (int r = 0; r < m.rows(); ++r)
        if (!b[r].is_zero())
            rows[r][bc] = b[r];
    auto pivots = eliminate(rows, bc + 1, 1);
    // Inconsistent iff some row is zero except in the augmented column.
    for (int r = static_cast<int>(pivots.size()); r < m.rows(); ++r)
        if (!rows[r].empty())
            return std::nullopt;
    std::vector<Rational> x(m.cols());
    for (int k = 0; k < static_cast<int>(pivots.size()); ++k) {
        auto it = rows[k].find(bc);
        if (it != rows[k].end())
            x[pivots[k]] = it->second;
    }
    return x;
}

std::vector<std::vector<Rational>> nullspace(const SparseMatrix& m) {
    auto rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    std::vector<int> pivot_row(m.cols(), -1);
    for (int k = 0; k < static_cast<int>(rr.pivots.size()); ++k) {
        is_pivot[rr.pivots[k]] = true;
        pivot_row[rr.pivots[k]] = k;
    }
    std::vector<std::vector<Rational>> basis;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        std::vector<Rational> v(m.cols());
        v[c] = Rational(1);
        for (int p = 0; p < m.cols(); ++p)
            if (is_pivot[p])
                v[p] = -rr.mat.at(pivot_row[p], c);
        basis.push_back(std::move(v));
    }
    return basis;
}

SparseMatrix inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols())
        throw error("inverse: matrix not square");
    int n = m.rows();
    auto rows = copy_rows(m);
    for (int r = 0; r < n; ++r)
        rows[r][n + r] = Rational(1);
    auto pivots = eliminate(rows, 2 * n, n);
    if (static_cast<int>(pivots.size()) != n)
        throw error("inverse: matrix singular");
    SparseMatrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (const auto& [c, v] : rows[r])
            if (c >= n)
                out.set(r, c - n, v);
    return out;
}

SparseMatrix from_columns(int rows, const std::vector<std::vector<Rational>>& cols) {
    SparseMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        if (static_cast<int>(cols[c].size()) != rows)
            throw error("from_columns: column length mismatch");
        for (int r = 0; r < rows; ++r)
            m.set(r, c, cols[c][r]);
    }
    return m;
}

}  // namespace forma
