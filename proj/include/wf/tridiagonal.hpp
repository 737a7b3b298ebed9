#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wf/errors.hpp"

namespace wf {

/// Symmetric tridiagonal matrix: diag has dimension n, off has n-1.
struct TridiagonalMatrix {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t dim() const { return diag.size(); }
};

/// LDL^T solve for a symmetric positive definite tridiagonal system.
/// No pivoting; a non-positive pivot throws SingularHessianError.
inline std::vector<double> solve_spd(const TridiagonalMatrix& m, std::vector<double> rhs) {
    const std::size_t n = m.dim();
    if (rhs.size() != n || (n > 0 && m.off.size() != n - 1))
        throw ContractError("solve_spd: dimension mismatch");
    if (n == 0) return rhs;
    std::vector<double> d(n), l(n > 1 ? n - 1 : 0);
    d[0] = m.diag[0];
    if (!(d[0] > 0.0) || !std::isfinite(d[0]))
        throw SingularHessianError("non-positive pivot in tridiagonal factorization");
    for (std::size_t i = 1; i < n; ++i) {
        l[i - 1] = m.off[i - 1] / d[i - 1];
        d[i] = m.diag[i] - l[i - 1] * m.off[i - 1];
        if (!(d[i] > 0.0) || !std::isfinite(d[i]))
            throw SingularHessianError("non-positive pivot in tridiagonal factorization");
    }
    // forward substitution L z = rhs (in place)
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= l[i - 1] * rhs[i - 1];
    // diagonal and back substitution L^T x = z
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= l[i] * rhs[i + 1];
    return rhs;
}

}  // namespace wf
