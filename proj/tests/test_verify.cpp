#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>

#include "rcga/verify.hpp"

using namespace rcga;

namespace {

VerifyOptions reduced_options() {
    VerifyOptions opt;
    opt.n_grid = {10};
    opt.r_grid = {2, 3};
    opt.K = 1000.0;
    opt.pzero_samples = 20'000;
    opt.drift_samples = 5'000;
    opt.random_matrices = 4;
    opt.model_updates = 2'000;
    opt.seed = 1;
    return opt;
}

}  // namespace

TEST_CASE("random frequency states respect their mode's invariants", "[verify]") {
    Rng rng(6);
    SECTION("plain rows are stochastic") {
        for (int t = 0; t < 50; ++t) {
            const std::vector<double> row = random_stochastic_row(4, rng);
            double sum = 0.0;
            for (double v : row) {
                REQUIRE(v >= 0.0);
                sum += v;
            }
            REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("bordered rows live inside the box") {
        const int n = 10, r = 3;
        const auto [lo, hi] = frequency_borders(n, r);
        for (int t = 0; t < 50; ++t) {
            const std::vector<double> row = random_bordered_row(n, r, rng);
            double sum = 0.0;
            for (double v : row) {
                REQUIRE(v >= lo - 1e-12);
                REQUIRE(v <= hi + 1e-12);
                sum += v;
            }
            REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("matrices validate against from_rows") {
        REQUIRE_NOTHROW(random_matrix(10, 3, 997.0, BorderMode::unbordered, rng));
        REQUIRE_NOTHROW(random_matrix(10, 3, 997.0, BorderMode::bordered, rng));
    }
}

TEST_CASE("reduced verification grid passes every check", "[verify]") {
    const std::vector<CheckResult> results = run_verification(reduced_options());
    REQUIRE_FALSE(results.empty());
    REQUIRE(all_checks_pass(results));
    std::set<std::string> names;
    for (const CheckResult& check : results) {
        REQUIRE(check.status != CheckStatus::fail);
        REQUIRE(check.name.find(',') == std::string::npos);
        REQUIRE(check.params.find(',') == std::string::npos);
        names.insert(check.name);
    }
    // every check family must be represented
    for (const char* expected :
         {"model_row_sum", "model_border_containment", "model_exact_multiples",
          "model_winner_floor", "analysis_oracle_mass", "analysis_mc_exact_agreement",
          "analysis_oracle_symmetry", "analysis_pzero_floor", "analysis_drift_floor",
          "analysis_phi_exponent_sum", "analysis_mgf_grid"})
        REQUIRE(names.count(expected) == 1);
}

TEST_CASE("verification marks asymptotic floors below n = 10", "[verify]") {
    VerifyOptions opt = reduced_options();
    opt.n_grid = {2};
    opt.r_grid = {2};
    const std::vector<CheckResult> results = run_verification(opt);
    bool saw_small_n = false;
    for (const CheckResult& check : results)
        if (check.name == "analysis_pzero_floor") {
            REQUIRE(check.status == CheckStatus::small_n);
            saw_small_n = true;
        }
    REQUIRE(saw_small_n);
    // small-n rows are advisory: the report still counts as passing
    REQUIRE(all_checks_pass(results));
}

TEST_CASE("corrupted bounds make the harness fail loudly", "[verify]") {
    VerifyOptions opt = reduced_options();
    opt.n_grid = {10};
    opt.r_grid = {2};
    opt.corrupt_bounds = true;
    const std::vector<CheckResult> results = run_verification(opt);
    int failures = 0;
    for (const CheckResult& check : results) failures += check.status == CheckStatus::fail;
    REQUIRE(failures > 0);
    REQUIRE_FALSE(all_checks_pass(results));
}

TEST_CASE("verification rejects malformed grids", "[verify]") {
    VerifyOptions opt = reduced_options();
    opt.r_grid = {1};
    REQUIRE_THROWS_AS(run_verification(opt), std::invalid_argument);
    opt = reduced_options();
    opt.n_grid = {0};
    REQUIRE_THROWS_AS(run_verification(opt), std::invalid_argument);
}

TEST_CASE("check statuses render their report tokens", "[verify]") {
    REQUIRE(std::string(to_string(CheckStatus::pass)) == "pass");
    REQUIRE(std::string(to_string(CheckStatus::fail)) == "fail");
    REQUIRE(std::string(to_string(CheckStatus::small_n)) == "small-n");
}
