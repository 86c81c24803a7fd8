#pragma once

// Exact dense linear algebra over the rationals: reduced row echelon form
// with a particular solution and a kernel basis.  Systems here are small
// (tens of unknowns: linear-ODE ansatz solves), so plain fraction-based
// Gaussian elimination with partial support for rank deficiency is enough.

#include "dp3/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace dp3 {

struct LinearSolution {
    bool consistent = false;
    std::vector<Rat> particular;            // one solution (empty if inconsistent)
    std::vector<std::vector<Rat>> kernel;   // basis of the homogeneous solutions
};

/// Solve A x = b exactly.  A is row-major, rows may exceed or undershoot the
/// number of unknowns.
inline LinearSolution solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (const auto& row : a)
        if (row.size() != cols) throw std::domain_error("solve_linear: ragged matrix");
    if (b.size() != rows) throw std::domain_error("solve_linear: rhs size mismatch");

    std::vector<long> pivot_col_of_row(rows, -1);
    std::vector<long> pivot_row_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        // Pick the first nonzero pivot at or below `rank`.
        std::size_t sel = rank;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        std::swap(b[sel], b[rank]);
        const Rat inv = rat(1) / a[rank][col];
        for (std::size_t j = col; j < cols; ++j) a[rank][j] *= inv;
        b[rank] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            const Rat f = a[r][col];
            for (std::size_t j = col; j < cols; ++j) a[r][j] -= f * a[rank][j];
            b[r] -= f * b[rank];
        }
        pivot_col_of_row[rank] = static_cast<long>(col);
        pivot_row_of_col[col] = static_cast<long>(rank);
        ++rank;
    }

    LinearSolution sol;
    for (std::size_t r = rank; r < rows; ++r)
        if (b[r] != 0) return sol;  // inconsistent
    sol.consistent = true;
    sol.particular.assign(cols, rat(0));
    for (std::size_t r = 0; r < rank; ++r) sol.particular[static_cast<std::size_t>(pivot_col_of_row[r])] = b[r];
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_row_of_col[col] != -1) continue;
        std::vector<Rat> basis(cols, rat(0));
        basis[col] = rat(1);
        for (std::size_t r = 0; r < rank; ++r)
            basis[static_cast<std::size_t>(pivot_col_of_row[r])] = -a[r][col];
        sol.kernel.push_back(std::move(basis));
    }
    return sol;
}

}  // namespace dp3
