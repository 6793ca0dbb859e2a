#pragma once

// Test-only helpers: an independent dense Jacobi-rotation eigensolver used as
// a brute-force oracle for small matrices, and a tiny deterministic RNG for
// property-style sweeps. Kept free of any sshchain solver code on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace testsupport {

// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
    std::sort(values.begin(), values.end());
    return values;
}

inline std::vector<std::vector<double>> dense_tridiagonal(const std::vector<double>& diag,
                                                          const std::vector<double>& offdiag) {
    const std::size_t n = diag.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = diag[i];
        if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = offdiag[i];
    }
    return a;
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double uniform(double lo, double hi) {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }
    int uniform_int(int lo, int hi) { // inclusive
        int span = hi - lo + 1;
        int k = static_cast<int>(uniform(0.0, 1.0) * span);
        return lo + std::min(k, span - 1);
    }
};

} // namespace testsupport
