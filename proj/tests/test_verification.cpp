#include <doctest.h>

#include <cmath>

#include "sshchain/models.hpp"
#include "sshchain/verification.hpp"

using namespace sshchain;

namespace {

const CheckResult* find_check(const VerificationReport& report, const std::string& name) {
    for (const auto& c : report.checks)
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("run_all passes for the shipped models") {
    CHECK(run_all(chebyshev_model({20, 0.5, 0.0, 0.0})).overall);
    CHECK(run_all(chebyshev_model({8, -0.3, 0.3, -0.2})).overall);
    CHECK(run_all(krawtchouk_model({15, 0.7})).overall);
    CHECK(run_all(qracah_model({4, 0.5, 0.3, 0.4, -0.5, 1})).overall);
    CHECK(run_all(qracah_model({4, 0.5, 0.3, 0.4, -0.5, 2})).overall);
}

TEST_CASE("run_all report structure") {
    VerificationReport rep = run_all(krawtchouk_model({6, 0.3}));
    CHECK(rep.model_label == "krawtchouk");
    // fixed check order
    REQUIRE(rep.checks.size() >= 8);
    CHECK(rep.checks[0].name == "constraints");
    CHECK(rep.checks[1].name == "spectrum_vs_oracle");
    CHECK(rep.checks[2].name == "eigen_relation");
    CHECK(rep.checks[3].name == "eigenvector_orthogonality");
    CHECK(rep.checks[4].name == "closed_form_norms");
    CHECK(rep.checks[5].name == "christoffel");
    CHECK(rep.checks[6].name == "family_orthogonality");
    CHECK(rep.checks[7].name == "contiguity");
    CHECK(rep.checks[8].name == "self_duality");
    bool overall = true;
    for (const auto& c : rep.checks)
        if (!c.skipped) overall = overall && c.pass;
    CHECK(rep.overall == overall);

    // ssh has no closed norms: check recorded as skipped, not failed
    VerificationReport ssh_rep = run_all(chebyshev_model({5, 0.2, 0.0, 0.0}));
    const CheckResult* norms = find_check(ssh_rep, "closed_form_norms");
    REQUIRE(norms != nullptr);
    CHECK(norms->skipped);
    CHECK(ssh_rep.overall);

    // q-Racah adds duality checks
    VerificationReport qr_rep = run_all(qracah_model({4, 0.5, 0.3, 0.4, -0.5, 1}));
    CHECK(find_check(qr_rep, "duality") != nullptr);
    CHECK(find_check(qr_rep, "dual_weight_product") != nullptr);
    CHECK(find_check(qr_rep, "contiguity") != nullptr);
}

TEST_CASE("corrupting a coupling flips constraint and eigen-relation checks") {
    Model good = krawtchouk_model({5, 0.4});
    Model bad = corrupt_coupling(good, 6, 1e-3); // t+_3 * (1 + 1e-3)
    VerificationReport rep = run_all(bad);
    CHECK_FALSE(rep.overall);
    const CheckResult* cons = find_check(rep, "constraints");
    const CheckResult* eig = find_check(rep, "eigen_relation");
    REQUIRE(cons != nullptr);
    REQUIRE(eig != nullptr);
    CHECK_FALSE(cons->pass);
    CHECK_FALSE(eig->pass);
}

TEST_CASE("fault sensitivity: any single-coupling perturbation >= 1e-6 is caught") {
    std::vector<Model> models;
    models.push_back(chebyshev_model({2, 0.5, 0.0, 0.0}));
    models.push_back(chebyshev_model({3, 0.2, 0.4, -0.1}));
    models.push_back(krawtchouk_model({3, 0.3}));
    models.push_back(qracah_model({3, 0.5, 0.3, 0.4, -0.5, 1}));
    models.push_back(qracah_model({3, 0.5, 0.3, 0.4, -0.5, 2}));
    for (const Model& m : models) {
        const int bonds = m.site_count() - 1;
        for (int b = 0; b < bonds; ++b) {
            Model bad = corrupt_coupling(m, b, 1e-6);
            VerificationReport rep = run_all(bad);
            INFO("model ", m.label, " bond ", b);
            CHECK_FALSE(rep.overall);
        }
    }
}

TEST_CASE("tolerance override tightens freely but loosens at most to 1e-6") {
    VerifyOptions opts;
    opts.override_tolerance(1e-14);
    CHECK(opts.tol_norms == 1e-14);
    CHECK(opts.tol_constraints == 1e-14);

    VerifyOptions loose;
    loose.override_tolerance(1e-3);
    CHECK(loose.tol_constraints == 1e-6);
    CHECK(loose.tol_norms == 1e-6);
}

TEST_CASE("reports are deterministic") {
    VerificationReport a = run_all(krawtchouk_model({8, 0.45}));
    VerificationReport b = run_all(krawtchouk_model({8, 0.45}));
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].residual == b.checks[i].residual); // bitwise
    }
}

TEST_CASE("sweep over parameter grids") {
    std::vector<SweepCase> cases;
    for (double delta : {-0.9, -0.5, 0.0, 0.5, 0.9})
        for (int n_cells : {2, 10, 50})
            cases.push_back({{{"N", static_cast<double>(n_cells)}, {"delta", delta}},
                             [=] { return chebyshev_model({n_cells, delta, 0.0, 0.0}); }});
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (int n_cells : {3, 10, 30})
            cases.push_back({{{"N", static_cast<double>(n_cells)}, {"p", p}},
                             [=] { return krawtchouk_model({n_cells, p}); }});
    auto entries = sweep(cases);
    CHECK(entries.size() == 30);
    for (const auto& e : entries) {
        REQUIRE(e.report.has_value());
        CHECK(e.report->overall);
    }
}

TEST_CASE("run_all passes for large q-racah chains") {
    for (int kind : {1, 2})
        for (double q : {0.5, 0.8}) CHECK(run_all(qracah_model({30, q, 0.3, 0.4, -0.5, kind})).overall);
}

TEST_CASE("q-racah lattice sweep records skips and no failures") {
    auto entries = sweep_qracah_lattice(1, 0.5, 3);
    int passed = 0, skipped = 0;
    for (const auto& e : entries) {
        if (e.report.has_value()) {
            CHECK(e.report->overall);
            ++passed;
        } else {
            CHECK_FALSE(e.skip_reason.empty());
            ++skipped;
        }
    }
    CHECK(passed > 0);
    CHECK(skipped > 0);
}
