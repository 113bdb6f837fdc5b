#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace pgram {

/// Dense matrix as row-major vector of rows. Exact Gaussian elimination with
/// deterministic pivoting: first nonzero entry in column order, rows scanned
/// top to bottom. Reproducible kernels across runs by construction.
using fe_matrix = std::vector<std::vector<field_element>>;

struct echelon_result {
    fe_matrix reduced;            // reduced row echelon form
    std::vector<int> pivot_col;   // pivot column of each pivot row
    std::size_t rank = 0;
};

inline echelon_result reduced_row_echelon(fe_matrix m) {
    echelon_result res;
    if (m.empty()) return res;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t pr = 0;  // next pivot row
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t r = pr; r < rows; ++r) {
            if (!m[r][c].is_zero()) { sel = r; break; }
        }
        if (sel == rows) continue;
        std::swap(m[pr], m[sel]);
        field_element inv = m[pr][c].inv();
        for (std::size_t j = c; j < cols; ++j) m[pr][j] = m[pr][j] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || m[r][c].is_zero()) continue;
            field_element f = m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] - f * m[pr][j];
        }
        res.pivot_col.push_back(static_cast<int>(c));
        ++pr;
    }
    res.rank = pr;
    res.reduced = std::move(m);
    return res;
}

inline std::size_t rank(const fe_matrix& m) { return reduced_row_echelon(m).rank; }

/// Exact basis of the right kernel of an r x c matrix; empty iff the kernel
/// is trivial. One basis vector per free column, in column order.
inline std::vector<std::vector<field_element>> nullspace(const fe_matrix& m,
                                                         const field_ptr& ctx) {
    if (m.empty()) return {};
    const std::size_t cols = m[0].size();
    echelon_result ech = reduced_row_echelon(m);
    std::vector<bool> is_pivot(cols, false);
    for (int c : ech.pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;

    std::vector<std::vector<field_element>> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<field_element> v(cols, field_element::zero(ctx));
        v[fc] = field_element::one(ctx);
        for (std::size_t pr = 0; pr < ech.pivot_col.size(); ++pr) {
            std::size_t pc = static_cast<std::size_t>(ech.pivot_col[pr]);
            v[pc] = -ech.reduced[pr][fc];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace pgram
