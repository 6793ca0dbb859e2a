#include "sshchain/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sshchain/errors.hpp"
#include "sshchain/tridiagonal.hpp"

namespace sshchain {

namespace {

constexpr double kLoosenCap = 1e-6;

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

} // namespace

void VerifyOptions::override_tolerance(double tol) {
    double t = std::min(tol, kLoosenCap);
    tol_constraints = t;
    tol_spectrum_abs = t;
    tol_spectrum_rel = t;
    tol_eigen_relation = t;
    tol_orthogonality = t;
    tol_norms = t;
    tol_christoffel = t;
    tol_family_orthogonality = t;
    tol_contiguity = t;
    tol_duality = t;
    tol_self_duality = t;
}

std::vector<double> christoffel_sample_points(const Model& model, int count, std::uint64_t seed) {
    std::vector<double> spectrum = closed_spectrum(model);
    double lo = spectrum.front(), hi = spectrum.back();
    double span = std::max(hi - lo, 1.0);
    lo -= 0.1 * span;
    hi += 0.1 * span;

    const double tau0 = model.seq.solution.tau0;
    double guard = 1e-3 * std::max(1.0, std::fabs(tau0));

    SplitMix64 rng{seed};
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>(count));
    int attempts = 0;
    while (static_cast<int>(samples.size()) < count && attempts < 100 * count + 1000) {
        ++attempts;
        double x = lo + rng.next_unit() * (hi - lo);
        if (std::fabs(model.seq.pi(x) - tau0) < guard) continue;
        samples.push_back(x);
    }
    return samples;
}

VerificationReport run_all(const Model& model, const VerifyOptions& opts) {
    VerificationReport report;
    report.model_label = model.label;
    report.parameters = model.parameters;
    report.overall = true;

    auto add = [&report](CheckResult r) {
        if (!r.skipped) report.overall = report.overall && r.pass;
        report.checks.push_back(std::move(r));
    };
    auto run_check = [&add](const std::string& name, double threshold, auto&& fn) {
        CheckResult r;
        r.name = name;
        r.threshold = threshold;
        try {
            r.residual = fn();
            r.pass = r.residual <= threshold;
        } catch (const std::exception& e) {
            r.pass = false;
            r.residual = std::numeric_limits<double>::infinity();
            r.note = e.what();
        }
        add(std::move(r));
    };

    const QSequence& seq = model.seq;
    TridiagonalHamiltonian H = model.hamiltonian();
    const bool qracah = model.kind == ModelKind::qracah1 || model.kind == ModelKind::qracah2;

    // 1. doubling constraints
    run_check("constraints", opts.tol_constraints,
              [&] { return check_constraints(seq, opts.tol_constraints).max_scaled_residual; });

    // 2. closed-form spectrum against the Sturm-bisection oracle
    std::vector<double> analytic = closed_spectrum(model);
    run_check("spectrum_vs_oracle", qracah ? opts.tol_spectrum_rel : opts.tol_spectrum_abs, [&] {
        std::vector<double> oracle = eig_oracle_values(H, opts.oracle_tol_factor * std::max(1.0, H.inf_norm()));
        double worst = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i)
            worst = std::max(worst, std::fabs(analytic[i] - oracle[i]));
        if (qracah) {
            double radius = std::max(std::fabs(analytic.front()), std::fabs(analytic.back()));
            worst /= std::max(radius, 1e-300);
        }
        return worst;
    });

    // 3. eigen-relation residuals of the analytic eigenvectors
    std::vector<double> generic_spectrum;
    std::vector<std::vector<double>> vectors;
    try {
        generic_spectrum = eigenvalues(seq);
        for (double x : generic_spectrum) vectors.push_back(eigenvector(seq, x));
    } catch (const std::exception& e) {
        add({"eigen_relation", std::numeric_limits<double>::infinity(), opts.tol_eigen_relation, false, false,
             e.what()});
    }
    if (!vectors.empty()) {
        run_check("eigen_relation", opts.tol_eigen_relation, [&] {
            double worst = 0.0;
            for (std::size_t i = 0; i < vectors.size(); ++i)
                worst = std::max(worst, residual(H, generic_spectrum[i], vectors[i]));
            return worst;
        });

        // 4. pairwise eigenvector orthogonality
        run_check("eigenvector_orthogonality", opts.tol_orthogonality, [&] {
            std::vector<double> norms(vectors.size());
            for (std::size_t i = 0; i < vectors.size(); ++i) {
                long double s = 0.0L;
                for (double c : vectors[i]) s += static_cast<long double>(c) * c;
                norms[i] = std::sqrt(static_cast<double>(s));
            }
            double worst = 0.0;
            for (std::size_t a = 0; a < vectors.size(); ++a)
                for (std::size_t b = a + 1; b < vectors.size(); ++b) {
                    long double dot = 0.0L;
                    for (std::size_t i = 0; i < vectors[a].size(); ++i)
                        dot += static_cast<long double>(vectors[a][i]) * vectors[b][i];
                    worst = std::max(worst, std::fabs(static_cast<double>(dot)) / (norms[a] * norms[b]));
                }
            return worst;
        });
    }

    // 5. closed-form norms against direct dot products
    if (has_closed_norms(model)) {
        run_check("closed_form_norms", opts.tol_norms, [&] {
            const auto& sol = seq.solution;
            double worst = 0.0;
            auto dot_self = [](const std::vector<double>& v) {
                long double s = 0.0L;
                for (double c : v) s += static_cast<long double>(c) * c;
                return static_cast<double>(s);
            };
            for (int k = 0; k < seq.N(); ++k) {
                double s = (seq.family.base.grid[k] - sol.tau0) / sol.tau2;
                double x = std::sqrt(s);
                double direct = dot_self(eigenvector(seq, x));
                double closed = eigvec_norm_closed(model, k);
                worst = std::max(worst, std::fabs(direct - closed) / std::fabs(closed));
            }
            if (!sol.truncated) {
                double direct = dot_self(eigenvector(seq, seq.mu_plus));
                double closed = eigvec_norm_closed(model, std::nullopt);
                worst = std::max(worst, std::fabs(direct - closed) / std::fabs(closed));
            }
            return worst;
        });
    } else {
        add({"closed_form_norms", 0.0, opts.tol_norms, true, true, "no closed-form norms for this model"});
    }

    // 6. Christoffel identities
    run_check("christoffel", opts.tol_christoffel, [&] {
        std::vector<double> samples = christoffel_sample_points(model, opts.christoffel_samples, opts.seed);
        ChristoffelReport c = christoffel_identity_check(seq, samples, opts.tol_christoffel);
        return std::max({c.max_even_residual, c.max_odd_residual, c.max_ratio_residual});
    });

    // 7. family orthogonality
    run_check("family_orthogonality", opts.tol_family_orthogonality,
              [&] { return check_orthogonality(seq.family.base).max_deviation; });

    // 8. model-specific identities
    if (model.kind == ModelKind::krawtchouk || qracah)
        run_check("contiguity", opts.tol_contiguity, [&] { return contiguity_max_residual(model); });
    if (model.kind == ModelKind::krawtchouk)
        run_check("self_duality", opts.tol_self_duality, [&] { return self_duality_max_deviation(model); });
    if (qracah) {
        DualityReport dual;
        bool dual_ok = true;
        std::string dual_note;
        try {
            dual = duality_check(model);
        } catch (const std::exception& e) {
            dual_ok = false;
            dual_note = e.what();
        }
        if (dual_ok) {
            add({"duality", dual.max_poly_deviation, opts.tol_duality, dual.max_poly_deviation <= opts.tol_duality,
                 false, ""});
            double weight_res = dual.nu_sign_consistent ? dual.max_weight_deviation : 2.0;
            add({"dual_weight_product", weight_res, opts.tol_duality, weight_res <= opts.tol_duality, false, ""});
        } else {
            add({"duality", std::numeric_limits<double>::infinity(), opts.tol_duality, false, false, dual_note});
            add({"dual_weight_product", std::numeric_limits<double>::infinity(), opts.tol_duality, false, false,
                 dual_note});
        }
    }

    return report;
}

std::vector<SweepEntry> sweep(const std::vector<SweepCase>& cases, const VerifyOptions& opts) {
    std::vector<SweepEntry> entries;
    entries.reserve(cases.size());
    for (const SweepCase& c : cases) {
        SweepEntry entry;
        entry.parameters = c.parameters;
        try {
            Model model = c.make();
            entry.report = run_all(model, opts);
        } catch (const admissibility_error& e) {
            entry.skip_reason = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<SweepEntry> sweep_qracah_lattice(int model, double q, int N, const VerifyOptions& opts) {
    std::vector<SweepCase> cases;
    for (const ScanPoint& pt : qracah_default_lattice()) {
        QRacahSSHParams params{N, q, pt.alpha, pt.beta, pt.delta, model};
        cases.push_back({{{"N", static_cast<double>(N)},
                          {"q", q},
                          {"alpha", pt.alpha},
                          {"beta", pt.beta},
                          {"qr_delta", pt.delta}},
                         [params] { return qracah_model(params); }});
    }
    return sweep(cases, opts);
}

} // namespace sshchain
