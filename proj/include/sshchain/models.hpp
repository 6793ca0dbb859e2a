#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sshchain/doubling.hpp"
#include "sshchain/qracah.hpp"
#include "sshchain/tridiagonal.hpp"

namespace sshchain {

enum class ModelKind { ssh, ssh_mu, krawtchouk, qracah1, qracah2 };

struct ChebyshevSSHParams {
    int N = 1;           // chain has 2N+1 sites
    double delta = 0.0;  // |delta| < 1
    double mu_plus = 0.0;
    double mu_minus = 0.0;
};

struct KrawtchoukSSHParams {
    int N = 1;
    double p = 0.5; // 0 < p < 1
};

struct QRacahSSHParams {
    int N = 1;
    double q = 0.5; // 0 < q < 1
    double alpha = 0.3;
    double beta = 0.4;
    double delta = -0.5;
    int model = 1; // 1: odd chain (2N+1 sites), 2: even chain (2N sites)
};

/// An exactly solvable chain: the doubled sequence plus the model-specific
/// closed forms (spectrum, eigenvector components, norms) and bookkeeping for
/// reports.
struct Model {
    ModelKind kind = ModelKind::ssh;
    std::string label;
    std::vector<std::pair<std::string, double>> parameters;
    QSequence seq;

    // Sign of the renormalization prefactor, extended through index N; feeds
    // the single-polynomial eigenvector closed forms.
    std::vector<int> prefactor_sign;

    struct QRacahData {
        int model = 1;
        int N = 1;
        double q = 0.5, alpha = 0.0, beta = 0.0, delta = 0.0;
        qracah::Tuple rho, rho_dual, rho_bar, rho_bar_dual;
        double even_prefactor_sq = 0.0; // the k-independent radicand factor of Q_{2n}
    };
    std::optional<QRacahData> qr;

    int site_count() const { return seq.site_count(); }
    TridiagonalHamiltonian hamiltonian() const;
};

Model chebyshev_model(const ChebyshevSSHParams& params);
Model krawtchouk_model(const KrawtchoukSSHParams& params);
Model qracah_model(const QRacahSSHParams& params);

/// Spectrum from the model's own closed-form expressions (not the generic
/// grid route), sorted ascending.
std::vector<double> closed_spectrum(const Model& model);

/// Single-polynomial closed forms for the even eigenvector components
/// Q_{2n}(x_k^+-); k = nullopt selects the zero mode. Available for the
/// Krawtchouk and q-Racah models.
bool has_closed_eigvec_even(const Model& model);
double closed_form_eigvec_even(const Model& model, int n, std::optional<int> k);

/// Closed-form squared eigenvector norms Q(x)^t Q(x); k = nullopt selects the
/// zero mode. Available for the Krawtchouk and q-Racah models.
bool has_closed_norms(const Model& model);
double eigvec_norm_closed(const Model& model, std::optional<int> k);

struct DualityReport {
    double max_poly_deviation = 0.0;   // P_n(lambda_x; rho) vs P_x(lambda_n^d; rho^d)
    double max_weight_deviation = 0.0; // w(n; rho^d) vs prod_k A_k / C_{k+1}
    bool nu_sign_consistent = true;    // sign of prod_k A_k vs parity of negative count
};

/// Duality and dual-weight identities (q-Racah models only).
DualityReport duality_check(const Model& model);

/// Max scaled residual of the model's contiguity relation over all degrees
/// and grid points (Krawtchouk and q-Racah models).
double contiguity_max_residual(const Model& model);

/// Max |K_n(x) - K_x(n)| deviation over integer arguments (Krawtchouk only).
double self_duality_max_deviation(const Model& model);

/// Copy of the model with off-diagonal coupling `bond` (index into the
/// assembled off-diagonal) multiplied by (1 + rel). Closed forms are left
/// untouched, so verification must flag the mismatch.
Model corrupt_coupling(const Model& model, int bond, double rel);

// ---- q-Racah admissibility scan -------------------------------------------

struct ScanPoint {
    double alpha, beta, delta;
};

/// The shipped (alpha, beta, delta) lattice probed by the default scan.
std::vector<ScanPoint> qracah_default_lattice();

struct ScanEntry {
    QRacahSSHParams params;
    bool admissible = false;
    std::string reason; // empty when admissible
};

/// Tries to construct the model at every lattice point; inadmissible points
/// carry the constructor's reason.
std::vector<ScanEntry> qracah_scan(int model, double q, int N);

/// Known-good parameter sets found by the default scan, shipped for tests and
/// documentation.
std::vector<QRacahSSHParams> qracah_known_good(int model);

} // namespace sshchain
