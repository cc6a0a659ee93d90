#include <catch2/catch_amalgamated.hpp>

#include "rcga/fitness.hpp"

using namespace rcga;

TEST_CASE("top-value count scores r-onemax", "[fitness]") {
    const FitnessFunction f(FitnessId::r_onemax, 5, 4);
    SECTION("counts positions at r-1") {
        const std::vector<int> values{3, 0, 3, 2, 3};
        REQUIRE(evaluate(f, std::span<const int>(values)) == 3.0);
    }
    SECTION("optimum is the all-top string") {
        const std::vector<int> values{3, 3, 3, 3, 3};
        REQUIRE(evaluate(f, std::span<const int>(values)) == f.max_fitness());
        REQUIRE(f.max_fitness() == 5.0);
        REQUIRE(f.is_optimal(5.0));
        REQUIRE_FALSE(f.is_optimal(4.0));
    }
    SECTION("per-value contribution is the top indicator") {
        REQUIRE(f.contribution(3) == 1);
        REQUIRE(f.contribution(2) == 0);
        REQUIRE(f.contribution(0) == 0);
    }
}

TEST_CASE("value sum scores g-onemax", "[fitness]") {
    const FitnessFunction f(FitnessId::g_onemax, 4, 3);
    SECTION("sums the values") {
        const std::vector<int> values{2, 0, 1, 2};
        REQUIRE(evaluate(f, std::span<const int>(values)) == 5.0);
    }
    SECTION("maximum is n(r-1)") {
        REQUIRE(f.max_fitness() == 8.0);
        const std::vector<int> values{2, 2, 2, 2};
        REQUIRE(f.is_optimal(evaluate(f, std::span<const int>(values))));
    }
    SECTION("per-value contribution is the identity") {
        REQUIRE(f.contribution(0) == 0);
        REQUIRE(f.contribution(1) == 1);
        REQUIRE(f.contribution(2) == 2);
    }
}

TEST_CASE("the two fitness functions coincide for r = 2", "[fitness]") {
    const FitnessFunction a(FitnessId::r_onemax, 6, 2);
    const FitnessFunction b(FitnessId::g_onemax, 6, 2);
    const std::vector<int> values{1, 0, 1, 1, 0, 1};
    REQUIRE(evaluate(a, std::span<const int>(values)) ==
            evaluate(b, std::span<const int>(values)));
    REQUIRE(a.max_fitness() == b.max_fitness());
}

TEST_CASE("fitness ids round-trip through their names", "[fitness]") {
    REQUIRE(parse_fitness_id("r-onemax") == FitnessId::r_onemax);
    REQUIRE(parse_fitness_id("g-onemax") == FitnessId::g_onemax);
    REQUIRE(std::string(to_string(FitnessId::r_onemax)) == "r-onemax");
    REQUIRE(std::string(to_string(FitnessId::g_onemax)) == "g-onemax");
    REQUIRE_THROWS_AS(parse_fitness_id("onemax"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_fitness_id(""), std::invalid_argument);
}

TEST_CASE("evaluation rejects malformed individuals", "[fitness]") {
    const FitnessFunction f(FitnessId::g_onemax, 3, 3);
    SECTION("length mismatch") {
        const std::vector<int> values{1, 2};
        REQUIRE_THROWS_AS(evaluate(f, std::span<const int>(values)), std::invalid_argument);
    }
    SECTION("value out of range") {
        const std::vector<int> high{1, 2, 3};
        REQUIRE_THROWS_AS(evaluate(f, std::span<const int>(high)), std::invalid_argument);
        const std::vector<int> low{1, -1, 2};
        REQUIRE_THROWS_AS(evaluate(f, std::span<const int>(low)), std::invalid_argument);
    }
    SECTION("constructor rejects degenerate shapes") {
        REQUIRE_THROWS_AS(FitnessFunction(FitnessId::r_onemax, 0, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(FitnessFunction(FitnessId::r_onemax, 3, 1), std::invalid_argument);
    }
}

TEST_CASE("evaluating an individual stores its fitness", "[fitness]") {
    const FitnessFunction f(FitnessId::r_onemax, 3, 3);
    Individual ind;
    ind.values = {2, 2, 0};
    REQUIRE(evaluate(f, ind) == 2.0);
    REQUIRE(ind.fitness == 2.0);
}
