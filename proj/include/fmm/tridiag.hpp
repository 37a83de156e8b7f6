#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fmm {

// Thomas algorithm for a single tridiagonal system. sub[i] multiplies x[i-1] in row i,
// sup[i] multiplies x[i+1]; sub[0] and sup[n-1] are ignored. Solves in place into rhs.
inline void tridiag_solve(const std::vector<double>& sub, const std::vector<double>& diag,
                          const std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (sub.size() != n || sup.size() != n || rhs.size() != n)
        throw std::invalid_argument("tridiag: size mismatch");
    if (n == 0) return;
    std::vector<double> cp(n);
    double piv = diag[0];
    if (piv == 0.0) throw std::domain_error("tridiag: zero pivot");
    cp[0] = sup[0] / piv;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - sub[i] * cp[i - 1];
        if (piv == 0.0) throw std::domain_error("tridiag: zero pivot");
        cp[i] = sup[i] / piv;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
}

}  // namespace fmm
