// sshchain command-line front end. Talks to the library exclusively through
// the C API in sshchain/sshchain.h; emits machine-readable JSON or CSV.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshchain/sshchain.h"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr const char* kSchemaVersion = "1";

struct Options {
    std::string model = "ssh";
    int N = 1;
    double delta = 0.0;
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    double p = 0.5;
    double q = 0.5;
    double alpha = 0.3;
    double beta = 0.4;
    double qr_delta = -0.5;
    std::string format = "json";
    bool oracle = false;
    double tol = -1.0;
    std::string out;
    std::string which = "all";
    std::string scan;
    int corrupt_bond = -1;
    double corrupt_rel = 0.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

sshc_model_kind kind_from_name(const std::string& name) {
    if (name == "ssh") return SSHC_MODEL_SSH;
    if (name == "ssh-mu") return SSHC_MODEL_SSH_MU;
    if (name == "krawtchouk") return SSHC_MODEL_KRAWTCHOUK;
    if (name == "qracah1") return SSHC_MODEL_QRACAH1;
    if (name == "qracah2") return SSHC_MODEL_QRACAH2;
    throw UsageError("unknown model '" + name + "' (expected ssh|ssh-mu|krawtchouk|qracah1|qracah2)");
}

sshc_model_params to_params(const Options& opt) {
    sshc_model_params params;
    sshc_model_params_init(&params);
    params.kind = kind_from_name(opt.model);
    params.N = opt.N;
    params.delta = opt.delta;
    params.mu_plus = opt.mu_plus;
    params.mu_minus = opt.mu_minus;
    params.p = opt.p;
    params.q = opt.q;
    params.alpha = opt.alpha;
    params.beta = opt.beta;
    params.qr_delta = opt.qr_delta;
    return params;
}

ordered_json parameter_echo(const Options& opt) {
    ordered_json j;
    j["model"] = opt.model;
    j["N"] = opt.N;
    switch (kind_from_name(opt.model)) {
    case SSHC_MODEL_SSH:
        j["delta"] = opt.delta;
        break;
    case SSHC_MODEL_SSH_MU:
        j["delta"] = opt.delta;
        j["mu_plus"] = opt.mu_plus;
        j["mu_minus"] = opt.mu_minus;
        break;
    case SSHC_MODEL_KRAWTCHOUK:
        j["p"] = opt.p;
        break;
    case SSHC_MODEL_QRACAH1:
    case SSHC_MODEL_QRACAH2:
        j["q"] = opt.q;
        j["alpha"] = opt.alpha;
        j["beta"] = opt.beta;
        j["qr_delta"] = opt.qr_delta;
        break;
    }
    if (opt.corrupt_bond >= 0) {
        j["corrupt_bond"] = opt.corrupt_bond;
        j["corrupt_rel"] = opt.corrupt_rel;
    }
    return j;
}

class ModelHandle {
public:
    explicit ModelHandle(const Options& opt) {
        sshc_model_params params = to_params(opt);
        check(sshc_model_create(&params, &model_));
        if (opt.corrupt_bond >= 0) {
            sshc_model* corrupted = nullptr;
            check(sshc_model_corrupt_coupling(model_, static_cast<size_t>(opt.corrupt_bond), opt.corrupt_rel,
                                              &corrupted));
            sshc_model_free(model_);
            model_ = corrupted;
        }
    }
    ~ModelHandle() { sshc_model_free(model_); }
    ModelHandle(const ModelHandle&) = delete;
    ModelHandle& operator=(const ModelHandle&) = delete;

    sshc_model* get() const { return model_; }

    static void check(int status) {
        if (status != SSHC_OK) throw UsageError(sshc_last_error());
    }

private:
    sshc_model* model_ = nullptr;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + opt.out + "'");
    file << text;
}

void emit_json(const Options& opt, const std::string& command, const ordered_json& payload) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["parameters"] = parameter_echo(opt);
    doc["payload"] = payload;
    emit(opt, doc.dump(2) + "\n");
}

// ---- subcommands ------------------------------------------------------------

int cmd_spectrum(const Options& opt) {
    if (opt.format != "json" && opt.format != "csv") throw UsageError("format must be json or csv");
    ModelHandle model(opt);
    size_t sites = 0;
    ModelHandle::check(sshc_model_site_count(model.get(), &sites));
    std::vector<double> spectrum(sites);
    ModelHandle::check(sshc_model_spectrum(model.get(), spectrum.data(), sites));

    std::vector<double> oracle;
    double max_dev = 0.0;
    if (opt.oracle) {
        oracle.resize(sites);
        ModelHandle::check(sshc_model_oracle_spectrum(model.get(), opt.tol, oracle.data(), sites));
        for (size_t i = 0; i < sites; ++i) max_dev = std::max(max_dev, std::fabs(spectrum[i] - oracle[i]));
    }

    if (opt.format == "csv") {
        std::string text = "k,eigenvalue\n";
        for (size_t i = 0; i < sites; ++i) text += std::to_string(i) + "," + format_double(spectrum[i]) + "\n";
        emit(opt, text);
        return 0;
    }
    ordered_json payload;
    payload["eigenvalues"] = spectrum;
    if (opt.oracle) {
        payload["oracle_eigenvalues"] = oracle;
        payload["max_abs_deviation"] = max_dev;
    }
    emit_json(opt, "spectrum", payload);
    return 0;
}

int cmd_eigvecs(const Options& opt) {
    if (opt.format != "json" && opt.format != "csv") throw UsageError("format must be json or csv");
    ModelHandle model(opt);
    size_t sites = 0;
    ModelHandle::check(sshc_model_site_count(model.get(), &sites));
    std::vector<double> spectrum(sites);
    ModelHandle::check(sshc_model_spectrum(model.get(), spectrum.data(), sites));

    std::vector<size_t> selection;
    if (opt.which == "all") {
        for (size_t i = 0; i < sites; ++i) selection.push_back(i);
    } else if (opt.which == "zero") {
        double target = opt.model == "ssh-mu" ? opt.mu_plus : 0.0;
        size_t best = 0;
        for (size_t i = 1; i < sites; ++i)
            if (std::fabs(spectrum[i] - target) < std::fabs(spectrum[best] - target)) best = i;
        if (std::fabs(spectrum[best] - target) > 1e-9)
            throw UsageError("this chain has no zero mode (even number of sites)");
        selection.push_back(best);
    } else {
        int index = -1;
        try {
            index = std::stoi(opt.which);
        } catch (...) {
            throw UsageError("--which expects 'all', 'zero', or an eigenvalue index");
        }
        if (index < 0 || static_cast<size_t>(index) >= sites) throw UsageError("--which index out of range");
        selection.push_back(static_cast<size_t>(index));
    }

    struct Row {
        double eigenvalue, norm_sq, residual;
        std::vector<double> components;
    };
    std::vector<Row> rows;
    for (size_t index : selection) {
        Row row;
        row.components.resize(sites);
        ModelHandle::check(sshc_model_eigenvector(model.get(), index, &row.eigenvalue, row.components.data(), sites,
                                                  &row.norm_sq, &row.residual));
        rows.push_back(std::move(row));
    }

    if (opt.format == "csv") {
        std::string text = "site";
        for (size_t j = 0; j < rows.size(); ++j) text += ",lambda_" + std::to_string(selection[j]);
        text += "\n";
        for (size_t i = 0; i < sites; ++i) {
            text += std::to_string(i);
            for (const Row& row : rows) text += "," + format_double(row.components[i]);
            text += "\n";
        }
        emit(opt, text);
        return 0;
    }
    ordered_json vectors = ordered_json::array();
    for (const Row& row : rows) {
        ordered_json v;
        v["eigenvalue"] = row.eigenvalue;
        v["components"] = row.components;
        v["norm_sq"] = row.norm_sq;
        v["residual"] = row.residual;
        vectors.push_back(std::move(v));
    }
    ordered_json payload;
    payload["vectors"] = std::move(vectors);
    emit_json(opt, "eigvecs", payload);
    return 0;
}

int cmd_couplings(const Options& opt) {
    if (opt.format != "json" && opt.format != "csv") throw UsageError("format must be json or csv");
    ModelHandle model(opt);
    size_t sites = 0, cells = 0;
    ModelHandle::check(sshc_model_site_count(model.get(), &sites));
    ModelHandle::check(sshc_model_cell_count(model.get(), &cells));
    int truncated = 0;
    ModelHandle::check(sshc_model_truncated(model.get(), &truncated));

    std::vector<double> t_plus(cells), t_minus(cells), diag(sites);
    ModelHandle::check(sshc_model_couplings(model.get(), t_plus.data(), t_minus.data(), cells));
    ModelHandle::check(sshc_model_diagonal(model.get(), diag.data(), sites));

    if (opt.format == "csv") {
        std::string text = "n,t_plus,t_minus,mu\n";
        for (size_t n = 0; n < cells; ++n)
            text += std::to_string(n) + "," + format_double(t_plus[n]) + "," + format_double(t_minus[n]) + "," +
                    format_double(diag[2 * n]) + "\n";
        emit(opt, text);
        return 0;
    }
    ordered_json rows = ordered_json::array();
    for (size_t n = 0; n < cells; ++n) {
        ordered_json row;
        row["n"] = n;
        row["t_plus"] = t_plus[n];
        row["t_minus"] = t_minus[n];
        row["mu"] = diag[2 * n]; // diagonal entry at site 2n
        rows.push_back(std::move(row));
    }
    ordered_json payload;
    payload["rows"] = std::move(rows);
    payload["truncated"] = truncated != 0;
    emit_json(opt, "couplings", payload);
    return 0;
}

ordered_json report_to_json(const sshc_report* report) {
    ordered_json checks = ordered_json::array();
    size_t count = 0;
    ModelHandle::check(sshc_report_check_count(report, &count));
    for (size_t i = 0; i < count; ++i) {
        const char* name = nullptr;
        const char* note = nullptr;
        double residual = 0.0, threshold = 0.0;
        int passed = 0, skipped = 0;
        ModelHandle::check(sshc_report_check(report, i, &name, &residual, &threshold, &passed, &skipped));
        ModelHandle::check(sshc_report_check_note(report, i, &note));
        ordered_json c;
        c["name"] = name;
        c["residual"] = residual;
        c["threshold"] = threshold;
        c["pass"] = passed != 0;
        c["skipped"] = skipped != 0;
        if (note && note[0] != '\0') c["note"] = note;
        checks.push_back(std::move(c));
    }
    int overall = 0;
    ModelHandle::check(sshc_report_overall(report, &overall));
    ordered_json j;
    j["checks"] = std::move(checks);
    j["overall"] = overall != 0;
    return j;
}

int cmd_verify(const Options& opt) {
    if (opt.format != "json") throw UsageError("verify emits json only");

    sshc_verify_options options;
    sshc_verify_options_init(&options);
    if (opt.tol > 0.0) sshc_verify_options_override(&options, opt.tol);

    if (!opt.scan.empty()) {
        if (opt.scan != "default") throw UsageError("--scan accepts only 'default'");
        sshc_model_kind kind = kind_from_name(opt.model);
        if (kind != SSHC_MODEL_QRACAH1 && kind != SSHC_MODEL_QRACAH2)
            throw UsageError("--scan is available for the q-Racah models only");

        size_t lattice = 0;
        ModelHandle::check(sshc_qracah_lattice_size(&lattice));
        ordered_json reports = ordered_json::array();
        ordered_json skipped = ordered_json::array();
        bool all_pass = true;
        for (size_t i = 0; i < lattice; ++i) {
            Options point = opt;
            ModelHandle::check(sshc_qracah_lattice_point(i, &point.alpha, &point.beta, &point.qr_delta));
            sshc_model_params params = to_params(point);
            sshc_model* model = nullptr;
            int status = sshc_model_create(&params, &model);
            if (status == SSHC_ERR_INADMISSIBLE) {
                ordered_json entry;
                entry["parameters"] = parameter_echo(point);
                entry["reason"] = sshc_last_error();
                skipped.push_back(std::move(entry));
                continue;
            }
            ModelHandle::check(status);
            sshc_report* report = nullptr;
            int verify_status = sshc_verify_run(model, &options, &report);
            sshc_model_free(model);
            ModelHandle::check(verify_status);
            ordered_json entry;
            entry["parameters"] = parameter_echo(point);
            ordered_json rep = report_to_json(report);
            sshc_report_free(report);
            all_pass = all_pass && rep["overall"].get<bool>();
            entry["report"] = std::move(rep);
            reports.push_back(std::move(entry));
        }
        ordered_json payload;
        payload["reports"] = std::move(reports);
        payload["skipped"] = std::move(skipped);
        payload["overall"] = all_pass;
        emit_json(opt, "verify", payload);
        return all_pass ? 0 : kExitVerifyFailure;
    }

    ModelHandle model(opt);
    sshc_report* report = nullptr;
    ModelHandle::check(sshc_verify_run(model.get(), &options, &report));
    ordered_json payload = report_to_json(report);
    sshc_report_free(report);
    bool overall = payload["overall"].get<bool>();
    emit_json(opt, "verify", payload);
    return overall ? 0 : kExitVerifyFailure;
}

void add_model_flags(CLI::App* app, Options& opt) {
    app->add_option("--model", opt.model, "ssh|ssh-mu|krawtchouk|qracah1|qracah2");
    app->add_option("--N", opt.N, "number of unit cells (chain has 2N+1 sites, 2N for qracah2)");
    app->add_option("--delta", opt.delta, "ssh dimerization, |delta| < 1");
    app->add_option("--mu-plus", opt.mu_plus, "even-site chemical potential (ssh-mu)");
    app->add_option("--mu-minus", opt.mu_minus, "odd-site chemical potential (ssh-mu)");
    app->add_option("--p", opt.p, "Krawtchouk parameter, 0 < p < 1");
    app->add_option("--q", opt.q, "q-Racah base, 0 < q < 1");
    app->add_option("--alpha", opt.alpha, "q-Racah alpha");
    app->add_option("--beta", opt.beta, "q-Racah beta");
    app->add_option("--qr-delta", opt.qr_delta, "q-Racah delta");
    app->add_option("--format", opt.format, "json|csv");
    app->add_option("--tol", opt.tol, "oracle tolerance / verification threshold override");
    app->add_option("--out", opt.out, "write the document to this path instead of stdout");
    app->add_option("--corrupt-bond", opt.corrupt_bond, "debug: perturb this off-diagonal bond");
    app->add_option("--corrupt-rel", opt.corrupt_rel, "debug: relative perturbation for --corrupt-bond");
    // Config files are processed by the root app only; model flags live here
    // and subcommands fall through to them.
    app->set_config("--config", "", "flat key=value file merged under explicit flags");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exactly solvable inhomogeneous SSH chains via polynomial doubling"};
    app.require_subcommand(1);

    Options opt;
    add_model_flags(&app, opt);

    CLI::App* spectrum = app.add_subcommand("spectrum", "closed-form spectrum (optionally vs the numeric oracle)");
    spectrum->fallthrough();
    spectrum->add_flag("--oracle", opt.oracle, "also run the Sturm-bisection oracle and report the deviation");

    CLI::App* eigvecs = app.add_subcommand("eigvecs", "eigenvectors with norms and residuals");
    eigvecs->fallthrough();
    eigvecs->add_option("--which", opt.which, "'all', 'zero', or an eigenvalue index");

    CLI::App* couplings = app.add_subcommand("couplings", "coupling profile t+_n, t-_n and diagonal");
    couplings->fallthrough();

    CLI::App* verify = app.add_subcommand("verify", "run the verification pipeline");
    verify->fallthrough();
    verify->add_option("--scan", opt.scan, "'default': sweep the shipped q-Racah lattice");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (eigvecs->parsed()) return cmd_eigvecs(opt);
        if (couplings->parsed()) return cmd_couplings(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
