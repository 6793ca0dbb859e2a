#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sshchain/models.hpp"

namespace sshchain {

/// Centralized thresholds for the verification pipeline. tighten() applies a
/// uniform override: any threshold may be made stricter, but none may be
/// loosened past 1e-6.
struct VerifyOptions {
    double tol_constraints = 1e-12;
    double tol_spectrum_abs = 1e-10;  // ssh / krawtchouk metric
    double tol_spectrum_rel = 1e-8;   // q-Racah metric, relative to the spectral radius
    double tol_eigen_relation = 1e-11;
    double tol_orthogonality = 1e-9;
    double tol_norms = 1e-8;
    double tol_christoffel = 1e-10;
    double tol_family_orthogonality = 1e-10;
    double tol_contiguity = 1e-10;
    double tol_duality = 1e-10;
    double tol_self_duality = 1e-12;
    int christoffel_samples = 50;
    std::uint64_t seed = 0x53534843u;
    double oracle_tol_factor = 1e-12; // bisection tolerance, times ||H||_inf

    void override_tolerance(double tol);
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct VerificationReport {
    std::string model_label;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<CheckResult> checks;
    bool overall = false; // conjunction of all non-skipped pass flags
};

/// Runs the whole identity pipeline on one model: constraints, spectrum vs
/// oracle, eigen-relation residuals, pairwise orthogonality, closed-form
/// norms, Christoffel identities, family orthogonality, and the
/// model-specific checks. A failing check is recorded, never thrown.
VerificationReport run_all(const Model& model, const VerifyOptions& opts = VerifyOptions{});

struct SweepCase {
    std::vector<std::pair<std::string, double>> parameters;
    std::function<Model()> make;
};

struct SweepEntry {
    std::vector<std::pair<std::string, double>> parameters;
    std::optional<VerificationReport> report;
    std::string skip_reason; // inadmissible construction, recorded not raised
};

std::vector<SweepEntry> sweep(const std::vector<SweepCase>& cases, const VerifyOptions& opts = VerifyOptions{});

/// Sweep over the shipped q-Racah lattice at fixed (q, N).
std::vector<SweepEntry> sweep_qracah_lattice(int model, double q, int N,
                                             const VerifyOptions& opts = VerifyOptions{});

/// Deterministic Christoffel sample points for a model (seeded, singularities
/// rejected).
std::vector<double> christoffel_sample_points(const Model& model, int count, std::uint64_t seed);

} // namespace sshchain
