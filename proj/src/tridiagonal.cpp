#include "sshchain/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "sshchain/errors.hpp"

namespace sshchain {

double TridiagonalHamiltonian::inf_norm() const {
    const std::size_t n = size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::fabs(diagonal[i]);
        if (i > 0) row += std::fabs(offdiagonal[i - 1]);
        if (i + 1 < n) row += std::fabs(offdiagonal[i]);
        best = std::max(best, row);
    }
    return best;
}

TridiagonalHamiltonian assemble_chain(const std::vector<double>& t_plus,
                                      const std::vector<double>& t_minus,
                                      double mu_plus, double mu_minus,
                                      bool truncated) {
    const std::size_t n_cells = t_plus.size();
    if (t_minus.size() != n_cells) throw std::invalid_argument("assemble_chain: t+ and t- must have equal length");
    if (n_cells == 0) throw std::invalid_argument("assemble_chain: need at least one cell");

    const std::size_t size = truncated ? 2 * n_cells : 2 * n_cells + 1;
    TridiagonalHamiltonian H;
    H.diagonal.resize(size);
    H.offdiagonal.resize(size - 1);
    for (std::size_t i = 0; i < size; ++i) H.diagonal[i] = (i % 2 == 0) ? mu_plus : mu_minus;
    for (std::size_t b = 0; b < size - 1; ++b) {
        double t = (b % 2 == 0) ? t_plus[b / 2] : t_minus[b / 2];
        if (t == 0.0 && !truncated)
            throw std::domain_error("assemble_chain: zero coupling at bond " + std::to_string(b));
        H.offdiagonal[b] = t;
    }
    // Truncation exists precisely because t-_{N-1} = 0 decouples the last site;
    // any other vanishing bond is still an error.
    if (truncated)
        for (std::size_t b = 0; b + 1 < size; ++b)
            if (H.offdiagonal[b] == 0.0)
                throw std::domain_error("assemble_chain: zero coupling at bond " + std::to_string(b));
    return H;
}

namespace {

double pivmin_for(const TridiagonalHamiltonian& H) {
    double max_e2 = std::numeric_limits<double>::min();
    for (double e : H.offdiagonal) max_e2 = std::max(max_e2, e * e);
    return std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() * max_e2;
}

int sturm_count_impl(const TridiagonalHamiltonian& H, double sigma, double pivmin) {
    const std::size_t n = H.size();
    int count = 0;
    double d = H.diagonal[0] - sigma;
    if (std::fabs(d) < pivmin) d = -pivmin; // force zero pivots negative before counting
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        double e = H.offdiagonal[i - 1];
        d = (H.diagonal[i] - sigma) - e * e / d;
        if (std::fabs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

// Deterministic splitmix64, for inverse-iteration start vectors.
struct SplitMix64 {
    std::uint64_t state;
    double next_unit() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

// Solves (H - sigma I) x = b by LU with partial pivoting for tridiagonal
// matrices (three-band storage with a second superdiagonal fill-in).
void shifted_solve(const TridiagonalHamiltonian& H, double sigma, std::vector<double>& x) {
    const std::size_t n = H.size();
    std::vector<double> dl(n, 0.0), dd(n, 0.0), du(n, 0.0), du2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        dd[i] = H.diagonal[i] - sigma;
        if (i + 1 < n) {
            du[i] = H.offdiagonal[i];
            dl[i + 1] = H.offdiagonal[i];
        }
    }
    const double tiny = std::numeric_limits<double>::min() * 4.0;
    std::vector<int> swapped(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(dl[i + 1]) > std::fabs(dd[i])) {
            std::swap(dd[i], dl[i + 1]);
            std::swap(du[i], dd[i + 1]);
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = 0.0;
            }
            std::swap(x[i], x[i + 1]);
            swapped[i] = 1;
        }
        if (dd[i] == 0.0) dd[i] = tiny;
        double m = dl[i + 1] / dd[i];
        dd[i + 1] -= m * du[i];
        if (i + 2 < n) du[i + 1] -= m * du2[i];
        x[i + 1] -= m * x[i];
    }
    if (dd[n - 1] == 0.0) dd[n - 1] = tiny;
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        if (ii + 1 < n) s -= du[ii] * x[ii + 1];
        if (ii + 2 < n) s -= du2[ii] * x[ii + 2];
        x[ii] = s / dd[ii];
    }
    (void)swapped;
}

void normalize(std::vector<double>& v) {
    long double s = 0.0L;
    for (double c : v) s += static_cast<long double>(c) * c;
    double nrm = std::sqrt(static_cast<double>(s));
    if (nrm == 0.0) return;
    for (double& c : v) c /= nrm;
}

} // namespace

int sturm_count(const TridiagonalHamiltonian& H, double sigma) {
    if (H.size() == 0) throw std::invalid_argument("sturm_count: empty matrix");
    return sturm_count_impl(H, sigma, pivmin_for(H));
}

std::vector<double> eig_oracle_values(const TridiagonalHamiltonian& H, double tol) {
    const std::size_t n = H.size();
    if (n == 0) throw std::invalid_argument("eig_oracle: empty matrix");
    const double norm = H.inf_norm();
    if (tol <= 0.0) tol = 1e-12 * std::max(norm, 1.0);
    const double pivmin = pivmin_for(H);

    // Gershgorin bounds.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(H.offdiagonal[i - 1]);
        if (i + 1 < n) r += std::fabs(H.offdiagonal[i]);
        lo = std::min(lo, H.diagonal[i] - r);
        hi = std::max(hi, H.diagonal[i] + r);
    }
    double pad = std::max(tol, 1e-14 * std::max(1.0, std::fabs(lo) + std::fabs(hi)));
    lo -= pad;
    hi += pad;

    std::vector<double> values(n);
    const int max_iter = 200;
    for (std::size_t j = 0; j < n; ++j) {
        double a = lo, b = hi;
        int it = 0;
        while (b - a > tol) {
            if (++it > max_iter)
                throw convergence_error("eig_oracle: bisection failed to converge in [" + std::to_string(a) + ", " +
                                        std::to_string(b) + "]");
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break; // interval at rounding resolution
            if (static_cast<std::size_t>(sturm_count_impl(H, mid, pivmin)) > j)
                b = mid;
            else
                a = mid;
        }
        values[j] = 0.5 * (a + b);
    }
    std::sort(values.begin(), values.end());
    return values;
}

EigenSystem eig_oracle(const TridiagonalHamiltonian& H, double tol) {
    const std::size_t n = H.size();
    EigenSystem sys;
    sys.eigenvalues = eig_oracle_values(H, tol);
    sys.eigenvectors.assign(n, std::vector<double>(n, 0.0));
    const double norm = std::max(H.inf_norm(), std::numeric_limits<double>::min());
    const double cluster_gap = 1e-8 * norm;

    if (n == 1) {
        sys.eigenvectors[0][0] = 1.0;
        sys.residual_bound = 0.0;
        return sys;
    }

    std::size_t cluster_begin = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double lambda = sys.eigenvalues[j];
        if (j > 0 && lambda - sys.eigenvalues[j - 1] > cluster_gap) cluster_begin = j;

        SplitMix64 rng{0x9d2c5680u + 0x100000001b3ULL * j};
        std::vector<double>& v = sys.eigenvectors[j];
        for (double& c : v) c = 2.0 * rng.next_unit() - 1.0;
        normalize(v);

        // Tiny shift off the exact eigenvalue keeps the solve well posed.
        double shift = lambda + 1e-13 * norm;
        const int iters = 3;
        for (int it = 0; it < iters; ++it) {
            shifted_solve(H, shift, v);
            for (std::size_t c = cluster_begin; c < j; ++c) {
                long double dot = 0.0L;
                for (std::size_t i = 0; i < n; ++i)
                    dot += static_cast<long double>(sys.eigenvectors[c][i]) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= static_cast<double>(dot) * sys.eigenvectors[c][i];
            }
            normalize(v);
        }
        // Deterministic sign: largest-magnitude component positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
        if (v[arg] < 0.0)
            for (double& c : v) c = -c;
    }

    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, residual(H, sys.eigenvalues[j], sys.eigenvectors[j]));
    sys.residual_bound = worst;
    return sys;
}

double residual(const TridiagonalHamiltonian& H, double x, const std::vector<double>& v) {
    const std::size_t n = H.size();
    if (v.size() != n) throw std::invalid_argument("residual: vector length does not match matrix size");
    double vmax = 0.0;
    for (double c : v) vmax = std::max(vmax, std::fabs(c));
    if (vmax == 0.0) throw std::invalid_argument("residual: zero vector");

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (H.diagonal[i] - x) * v[i];
        if (i > 0) r += H.offdiagonal[i - 1] * v[i - 1];
        if (i + 1 < n) r += H.offdiagonal[i] * v[i + 1];
        worst = std::max(worst, std::fabs(r));
    }
    return worst / (std::max(H.inf_norm(), std::numeric_limits<double>::min()) * vmax);
}

} // namespace sshchain
