#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fcs/matrix.hpp"

namespace fcs {

// Exchange statistics of the injected particles. Determines which matrix
// functional weighs the many-body interference terms: permanent for bosons,
// determinant for fermions. Distinguishable particles carry no exchange
// terms at all and are handled by classical per-particle weights.
enum class StatisticsKind { Boson, Fermion, Distinguishable };

inline std::string to_string(StatisticsKind k) {
    switch (k) {
        case StatisticsKind::Boson: return "boson";
        case StatisticsKind::Fermion: return "fermion";
        case StatisticsKind::Distinguishable: return "dp";
    }
    return "?";
}

inline constexpr std::size_t kMaxDeterminantSize = 64;
inline constexpr std::size_t kMaxPermanentSize = 24;

// Determinant by LU factorization with partial pivoting.
inline cd determinant(const ComplexMatrix& m) {
    if (!m.is_square()) throw dimension_error("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n > kMaxDeterminantSize) throw size_error("determinant limited to 64x64");
    if (n == 0) return cd(1.0);

    std::vector<cd> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);

    cd det(1.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return cd(0.0);
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            det = -det;
        }
        const cd p = a[col * n + col];
        det *= p;
        for (std::size_t r = col + 1; r < n; ++r) {
            const cd f = a[r * n + col] / p;
            if (f == cd(0.0)) continue;
            for (std::size_t j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
        }
    }
    return det;
}

// Permanent by Ryser's inclusion-exclusion formula with Gray-code updates
// of the running row sums: per(A) = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij.
// Each step flips one column in or out, so the row sums update in O(n).
inline cd permanent(const ComplexMatrix& m) {
    if (!m.is_square()) throw dimension_error("permanent of a non-square matrix");
    const std::size_t n = m.rows();
    if (n > kMaxPermanentSize) throw size_error("permanent limited to 24x24");
    if (n == 0) return cd(1.0);

    std::vector<cd> rowsum(n, cd(0.0));
    cd total(0.0);
    int popc = 0;
    const std::uint64_t end = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < end; ++k) {
        const int j = std::countr_zero(k);
        const std::uint64_t gray = k ^ (k >> 1);
        if (gray & (std::uint64_t(1) << j)) {
            for (std::size_t i = 0; i < n; ++i) rowsum[i] += m(i, j);
            ++popc;
        } else {
            for (std::size_t i = 0; i < n; ++i) rowsum[i] -= m(i, j);
            --popc;
        }
        cd prod(1.0);
        for (std::size_t i = 0; i < n; ++i) prod *= rowsum[i];
        if ((int(n) - popc) & 1) total -= prod; else total += prod;
    }
    return total;
}

// The statistics functional: permanent for bosons, determinant for fermions.
// Distinguishable particles never enter through a matrix functional.
inline cd stat_functional(const ComplexMatrix& m, StatisticsKind kind) {
    switch (kind) {
        case StatisticsKind::Boson: return permanent(m);
        case StatisticsKind::Fermion: return determinant(m);
        default: break;
    }
    throw unsupported_kind_error("stat_functional is defined for boson and fermion kinds only");
}

namespace detail {

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
// Values only; plenty for the matrix sizes in this project.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(at(i, i)));
    scale = std::max(scale, 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(at(i, j)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace detail

// Eigenvalues of the Hermitian part (M + M^dag)/2, ascending. Computed on
// the real symmetric embedding [[X, -Y], [Y, X]] of H = X + iY, whose
// spectrum is that of H with every eigenvalue doubled.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (!m.is_square()) throw dimension_error("eigenvalues of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return {};

    std::vector<double> b(4 * n * n, 0.0);
    const std::size_t d = 2 * n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cd h = 0.5 * (m(i, j) + std::conj(m(j, i)));
            b[i * d + j] = h.real();
            b[(n + i) * d + (n + j)] = h.real();
            b[i * d + (n + j)] = -h.imag();
            b[(n + i) * d + j] = h.imag();
        }
    const std::vector<double> all = detail::symmetric_eigenvalues(std::move(b), d);
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = all[2 * i];
    return ev;
}

// True iff all eigenvalues of the Hermitized matrix are >= -tol.
inline bool is_psd(const ComplexMatrix& m, double tol = 1e-10) {
    if (!m.is_square()) throw dimension_error("is_psd of a non-square matrix");
    if (m.max_hermiticity_defect() > tol)
        throw shape_error("is_psd: matrix is not Hermitian within tolerance");
    const std::vector<double> ev = hermitian_eigenvalues(m);
    return ev.empty() || ev.front() >= -tol;
}

} // namespace fcs
