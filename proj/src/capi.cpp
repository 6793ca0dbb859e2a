#include "sshchain/sshchain.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "sshchain/errors.hpp"
#include "sshchain/models.hpp"
#include "sshchain/tridiagonal.hpp"
#include "sshchain/verification.hpp"

using namespace sshchain;

struct sshc_model {
    Model model;
};

struct sshc_report {
    VerificationReport report;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const admissibility_error& e) {
        return fail(SSHC_ERR_INADMISSIBLE, e.what());
    } catch (const convergence_error& e) {
        return fail(SSHC_ERR_NUMERIC, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SSHC_ERR_INDEX, e.what());
    } catch (const std::domain_error& e) {
        return fail(SSHC_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SSHC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(SSHC_ERR_INTERNAL, e.what());
    }
}

VerifyOptions to_options(const sshc_verify_options* o) {
    if (!o) return VerifyOptions{};
    VerifyOptions opts;
    opts.tol_constraints = o->tol_constraints;
    opts.tol_spectrum_abs = o->tol_spectrum_abs;
    opts.tol_spectrum_rel = o->tol_spectrum_rel;
    opts.tol_eigen_relation = o->tol_eigen_relation;
    opts.tol_orthogonality = o->tol_orthogonality;
    opts.tol_norms = o->tol_norms;
    opts.tol_christoffel = o->tol_christoffel;
    opts.tol_family_orthogonality = o->tol_family_orthogonality;
    opts.tol_contiguity = o->tol_contiguity;
    opts.tol_duality = o->tol_duality;
    opts.tol_self_duality = o->tol_self_duality;
    opts.christoffel_samples = o->christoffel_samples;
    opts.seed = o->seed;
    opts.oracle_tol_factor = o->oracle_tol_factor;
    return opts;
}

} // namespace

extern "C" {

int sshc_model_params_init(sshc_model_params* params) {
    if (!params) return fail(SSHC_ERR_NULL_POINTER, "params is NULL");
    params->kind = SSHC_MODEL_SSH;
    params->N = 1;
    params->delta = 0.0;
    params->mu_plus = 0.0;
    params->mu_minus = 0.0;
    params->p = 0.5;
    params->q = 0.5;
    params->alpha = 0.3;
    params->beta = 0.4;
    params->qr_delta = -0.5;
    return SSHC_OK;
}

int sshc_model_create(const sshc_model_params* params, sshc_model** out) {
    if (!params || !out) return fail(SSHC_ERR_NULL_POINTER, "params or out is NULL");
    return guarded([&] {
        Model model;
        switch (params->kind) {
        case SSHC_MODEL_SSH:
            model = chebyshev_model({params->N, params->delta, 0.0, 0.0});
            break;
        case SSHC_MODEL_SSH_MU:
            model = chebyshev_model({params->N, params->delta, params->mu_plus, params->mu_minus});
            break;
        case SSHC_MODEL_KRAWTCHOUK:
            model = krawtchouk_model({params->N, params->p});
            break;
        case SSHC_MODEL_QRACAH1:
            model = qracah_model({params->N, params->q, params->alpha, params->beta, params->qr_delta, 1});
            break;
        case SSHC_MODEL_QRACAH2:
            model = qracah_model({params->N, params->q, params->alpha, params->beta, params->qr_delta, 2});
            break;
        default:
            return fail(SSHC_ERR_INVALID_ARGUMENT, "unknown model kind");
        }
        *out = new sshc_model{std::move(model)};
        return SSHC_OK;
    });
}

void sshc_model_free(sshc_model* model) { delete model; }

int sshc_model_site_count(const sshc_model* model, size_t* out) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    *out = static_cast<size_t>(model->model.site_count());
    return SSHC_OK;
}

int sshc_model_truncated(const sshc_model* model, int* out) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    *out = model->model.seq.solution.truncated ? 1 : 0;
    return SSHC_OK;
}

int sshc_model_cell_count(const sshc_model* model, size_t* out) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    *out = static_cast<size_t>(model->model.seq.N());
    return SSHC_OK;
}

int sshc_model_spectrum(const sshc_model* model, double* out, size_t capacity) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    return guarded([&] {
        std::vector<double> values = closed_spectrum(model->model);
        if (capacity < values.size()) return fail(SSHC_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::memcpy(out, values.data(), values.size() * sizeof(double));
        return SSHC_OK;
    });
}

int sshc_model_oracle_spectrum(const sshc_model* model, double tol, double* out, size_t capacity) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    return guarded([&] {
        std::vector<double> values = eig_oracle_values(model->model.hamiltonian(), tol);
        if (capacity < values.size()) return fail(SSHC_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::memcpy(out, values.data(), values.size() * sizeof(double));
        return SSHC_OK;
    });
}

int sshc_model_couplings(const sshc_model* model, double* t_plus, double* t_minus, size_t capacity) {
    if (!model) return fail(SSHC_ERR_NULL_POINTER, "model is NULL");
    const auto& sol = model->model.seq.solution;
    if ((t_plus || t_minus) && capacity < sol.t_plus.size())
        return fail(SSHC_ERR_INVALID_ARGUMENT, "output buffer too small");
    if (t_plus) std::memcpy(t_plus, sol.t_plus.data(), sol.t_plus.size() * sizeof(double));
    if (t_minus) std::memcpy(t_minus, sol.t_minus.data(), sol.t_minus.size() * sizeof(double));
    return SSHC_OK;
}

int sshc_model_diagonal(const sshc_model* model, double* diag, size_t capacity) {
    if (!model || !diag) return fail(SSHC_ERR_NULL_POINTER, "model or diag is NULL");
    return guarded([&] {
        TridiagonalHamiltonian H = model->model.hamiltonian();
        if (capacity < H.diagonal.size()) return fail(SSHC_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::memcpy(diag, H.diagonal.data(), H.diagonal.size() * sizeof(double));
        return SSHC_OK;
    });
}

int sshc_model_eigenvector(const sshc_model* model, size_t index, double* eigenvalue,
                           double* components, size_t capacity, double* norm_sq, double* residual_out) {
    if (!model || !components) return fail(SSHC_ERR_NULL_POINTER, "model or components is NULL");
    return guarded([&] {
        const Model& m = model->model;
        std::vector<double> spectrum = eigenvalues(m.seq);
        if (index >= spectrum.size()) return fail(SSHC_ERR_INDEX, "eigenvalue index out of range");
        if (capacity < spectrum.size()) return fail(SSHC_ERR_INVALID_ARGUMENT, "output buffer too small");
        double x = spectrum[index];
        std::vector<double> v = eigenvector(m.seq, x);
        std::memcpy(components, v.data(), v.size() * sizeof(double));
        if (eigenvalue) *eigenvalue = x;
        if (norm_sq) {
            double value;
            if (has_closed_norms(m)) {
                // map the sorted index back to a grid index / zero mode
                const auto& sol = m.seq.solution;
                bool zero_mode = !sol.truncated && std::fabs(x - m.seq.mu_plus) <= 1e-12;
                if (zero_mode) {
                    value = eigvec_norm_closed(m, std::nullopt);
                } else {
                    int best_k = 0;
                    double best = std::numeric_limits<double>::infinity();
                    for (int k = 0; k < m.seq.N(); ++k) {
                        double s = (m.seq.family.base.grid[k] - sol.tau0) / sol.tau2;
                        double d = std::fabs(std::sqrt(s) - std::fabs(x));
                        if (d < best) {
                            best = d;
                            best_k = k;
                        }
                    }
                    value = eigvec_norm_closed(m, best_k);
                }
            } else {
                long double s = 0.0L;
                for (double c : v) s += static_cast<long double>(c) * c;
                value = static_cast<double>(s);
            }
            *norm_sq = value;
        }
        if (residual_out) *residual_out = residual(m.hamiltonian(), x, v);
        return SSHC_OK;
    });
}

int sshc_model_corrupt_coupling(const sshc_model* model, size_t bond, double rel, sshc_model** out) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    return guarded([&] {
        *out = new sshc_model{corrupt_coupling(model->model, static_cast<int>(bond), rel)};
        return SSHC_OK;
    });
}

int sshc_verify_options_init(sshc_verify_options* options) {
    if (!options) return fail(SSHC_ERR_NULL_POINTER, "options is NULL");
    VerifyOptions d;
    options->tol_constraints = d.tol_constraints;
    options->tol_spectrum_abs = d.tol_spectrum_abs;
    options->tol_spectrum_rel = d.tol_spectrum_rel;
    options->tol_eigen_relation = d.tol_eigen_relation;
    options->tol_orthogonality = d.tol_orthogonality;
    options->tol_norms = d.tol_norms;
    options->tol_christoffel = d.tol_christoffel;
    options->tol_family_orthogonality = d.tol_family_orthogonality;
    options->tol_contiguity = d.tol_contiguity;
    options->tol_duality = d.tol_duality;
    options->tol_self_duality = d.tol_self_duality;
    options->christoffel_samples = d.christoffel_samples;
    options->seed = d.seed;
    options->oracle_tol_factor = d.oracle_tol_factor;
    return SSHC_OK;
}

int sshc_verify_options_override(sshc_verify_options* options, double tol) {
    if (!options) return fail(SSHC_ERR_NULL_POINTER, "options is NULL");
    VerifyOptions opts = to_options(options);
    opts.override_tolerance(tol);
    options->tol_constraints = opts.tol_constraints;
    options->tol_spectrum_abs = opts.tol_spectrum_abs;
    options->tol_spectrum_rel = opts.tol_spectrum_rel;
    options->tol_eigen_relation = opts.tol_eigen_relation;
    options->tol_orthogonality = opts.tol_orthogonality;
    options->tol_norms = opts.tol_norms;
    options->tol_christoffel = opts.tol_christoffel;
    options->tol_family_orthogonality = opts.tol_family_orthogonality;
    options->tol_contiguity = opts.tol_contiguity;
    options->tol_duality = opts.tol_duality;
    options->tol_self_duality = opts.tol_self_duality;
    return SSHC_OK;
}

int sshc_verify_run(const sshc_model* model, const sshc_verify_options* options, sshc_report** out) {
    if (!model || !out) return fail(SSHC_ERR_NULL_POINTER, "model or out is NULL");
    return guarded([&] {
        *out = new sshc_report{run_all(model->model, to_options(options))};
        return SSHC_OK;
    });
}

void sshc_report_free(sshc_report* report) { delete report; }

int sshc_report_overall(const sshc_report* report, int* out) {
    if (!report || !out) return fail(SSHC_ERR_NULL_POINTER, "report or out is NULL");
    *out = report->report.overall ? 1 : 0;
    return SSHC_OK;
}

int sshc_report_check_count(const sshc_report* report, size_t* out) {
    if (!report || !out) return fail(SSHC_ERR_NULL_POINTER, "report or out is NULL");
    *out = report->report.checks.size();
    return SSHC_OK;
}

int sshc_report_check(const sshc_report* report, size_t index, const char** name, double* residual,
                      double* threshold, int* passed, int* skipped) {
    if (!report) return fail(SSHC_ERR_NULL_POINTER, "report is NULL");
    if (index >= report->report.checks.size()) return fail(SSHC_ERR_INDEX, "check index out of range");
    const CheckResult& c = report->report.checks[index];
    if (name) *name = c.name.c_str();
    if (residual) *residual = c.residual;
    if (threshold) *threshold = c.threshold;
    if (passed) *passed = c.pass ? 1 : 0;
    if (skipped) *skipped = c.skipped ? 1 : 0;
    return SSHC_OK;
}

int sshc_report_check_note(const sshc_report* report, size_t index, const char** note) {
    if (!report || !note) return fail(SSHC_ERR_NULL_POINTER, "report or note is NULL");
    if (index >= report->report.checks.size()) return fail(SSHC_ERR_INDEX, "check index out of range");
    *note = report->report.checks[index].note.c_str();
    return SSHC_OK;
}

int sshc_qracah_lattice_size(size_t* out) {
    if (!out) return fail(SSHC_ERR_NULL_POINTER, "out is NULL");
    *out = qracah_default_lattice().size();
    return SSHC_OK;
}

int sshc_qracah_lattice_point(size_t index, double* alpha, double* beta, double* qr_delta) {
    auto lattice = qracah_default_lattice();
    if (index >= lattice.size()) return fail(SSHC_ERR_INDEX, "lattice index out of range");
    if (alpha) *alpha = lattice[index].alpha;
    if (beta) *beta = lattice[index].beta;
    if (qr_delta) *qr_delta = lattice[index].delta;
    return SSHC_OK;
}

int sshc_qracah_sample_count(sshc_model_kind kind, size_t* out) {
    if (!out) return fail(SSHC_ERR_NULL_POINTER, "out is NULL");
    if (kind != SSHC_MODEL_QRACAH1 && kind != SSHC_MODEL_QRACAH2)
        return fail(SSHC_ERR_INVALID_ARGUMENT, "known-good samples exist for q-Racah models only");
    *out = qracah_known_good(kind == SSHC_MODEL_QRACAH1 ? 1 : 2).size();
    return SSHC_OK;
}

int sshc_qracah_sample(sshc_model_kind kind, size_t index, sshc_model_params* out) {
    if (!out) return fail(SSHC_ERR_NULL_POINTER, "out is NULL");
    if (kind != SSHC_MODEL_QRACAH1 && kind != SSHC_MODEL_QRACAH2)
        return fail(SSHC_ERR_INVALID_ARGUMENT, "known-good samples exist for q-Racah models only");
    auto samples = qracah_known_good(kind == SSHC_MODEL_QRACAH1 ? 1 : 2);
    if (index >= samples.size()) return fail(SSHC_ERR_INDEX, "sample index out of range");
    sshc_model_params_init(out);
    out->kind = kind;
    out->N = samples[index].N;
    out->q = samples[index].q;
    out->alpha = samples[index].alpha;
    out->beta = samples[index].beta;
    out->qr_delta = samples[index].delta;
    return SSHC_OK;
}

const char* sshc_last_error(void) { return g_last_error.c_str(); }

const char* sshc_version(void) { return "1.0.0"; }

} // extern "C"
