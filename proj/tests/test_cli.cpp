#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#endif

namespace {

// Runs the installed binary with the given arguments, captures combined
// output into a scratch file, and returns the process exit code.
struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string path = "cli_capture_" + std::to_string(counter++) + ".txt";
    const std::string cmd = std::string(RCGA_CLI) + " " + args + " > " + path + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult res;
#ifdef __unix__
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    res.exit_code = status;
#endif
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    res.output = buffer.str();
    std::remove(path.c_str());
    return res;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("help exits cleanly and usage errors do not", "[cli]") {
    REQUIRE(run_cli("--help").exit_code == 0);
    REQUIRE(run_cli("run --help").exit_code == 0);
    REQUIRE(run_cli("").exit_code != 0);                      // subcommand required
    REQUIRE(run_cli("run --r 1").exit_code != 0);             // r below 2
    REQUIRE(run_cli("run --n 3 --trace-pos 5").exit_code != 0);
    REQUIRE(run_cli("run --fitness onemax").exit_code != 0);  // unknown fitness
    REQUIRE(run_cli("run --no-such-flag").exit_code != 0);
    REQUIRE(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("single runs report key=value results", "[cli]") {
    const CliResult res =
        run_cli("run --n 5 --r 3 --k 60 --fitness g-onemax --seed 9 --max-iters 100000");
    REQUIRE(res.exit_code == 0);
    REQUIRE(contains(res.output, "n=5\n"));
    REQUIRE(contains(res.output, "r=3\n"));
    REQUIRE(contains(res.output, "k=60\n"));
    REQUIRE(contains(res.output, "fitness=g-onemax\n"));
    REQUIRE(contains(res.output, "borders=0\n"));
    REQUIRE(contains(res.output, "seed=9\n"));
    REQUIRE(contains(res.output, "found_optimum="));
    REQUIRE(contains(res.output, "iterations="));
    REQUIRE(contains(res.output, "evaluations="));
    REQUIRE(contains(res.output, "best_fitness="));
    REQUIRE(contains(res.output, "negative_clamp_events="));
    SECTION("the bordered flag is echoed") {
        const CliResult bordered = run_cli("run --n 5 --r 3 --k 60 --borders --max-iters 50");
        REQUIRE(bordered.exit_code == 0);
        REQUIRE(contains(bordered.output, "borders=1\n"));
    }
}

TEST_CASE("frequency traces land in the requested file", "[cli]") {
    const std::string path = "cli_trace.csv";
    const CliResult res = run_cli("run --n 4 --r 3 --k 30 --seed 4 --max-iters 50 "
                                  "--trace-pos 1 --trace-stride 10 --out " + path);
    REQUIRE(res.exit_code == 0);
    const std::string trace = read_file(path);
    REQUIRE(first_line(trace) == "iteration,value,frequency");
    // initial state: three rows for iteration 0 at the uniform frequency
    REQUIRE(contains(trace, "0,0,0.3333333333"));
    REQUIRE(contains(trace, "0,1,0.3333333333"));
    REQUIRE(contains(trace, "0,2,0.3333333333"));
    SECTION("identical invocations produce identical bytes") {
        const std::string again = "cli_trace_again.csv";
        run_cli("run --n 4 --r 3 --k 30 --seed 4 --max-iters 50 "
                "--trace-pos 1 --trace-stride 10 --out " + again);
        REQUIRE(read_file(again) == trace);
        std::remove(again.c_str());
    }
    std::remove(path.c_str());
}

TEST_CASE("sweeps emit the pinned table format deterministically", "[cli]") {
    const std::string args = "sweep --r 2 --fitness r-onemax --replications 5 --seed 3 "
                             "--n-min 1 --n-max 1 --n-step 1 "
                             "--k-min 2 --k-max 4 --k-step 2 --max-iters 500 --out ";
    const std::string path_a = "cli_sweep_a.csv";
    const std::string path_b = "cli_sweep_b.csv";
    REQUIRE(run_cli(args + path_a).exit_code == 0);
    REQUIRE(run_cli(args + path_b).exit_code == 0);
    const std::string table = read_file(path_a);
    REQUIRE(read_file(path_b) == table);
    REQUIRE(first_line(table) ==
            "n,r,K,fitness,borders,replications,success_rate,mean_iterations,"
            "std_iterations,median_iterations");
    // one data row per K cell, in grid order
    REQUIRE(contains(table, "\n1,2,2,r-onemax,0,5,"));
    REQUIRE(contains(table, "\n1,2,4,r-onemax,0,5,"));
    // the trivial instance succeeds every time
    REQUIRE(contains(table, ",1.0000,"));
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
    SECTION("bad grids are rejected") {
        REQUIRE(run_cli("sweep --k-min 10 --k-max 5").exit_code != 0);
        REQUIRE(run_cli("sweep --n-min 0").exit_code != 0);
    }
}

TEST_CASE("verification reports and exit codes track check outcomes", "[cli]") {
    const std::string reduced = "verify --n-list 2 --r-list 2 --pzero-samples 2000 "
                                "--drift-samples 1000 --random-matrices 2 --model-updates 300";
    SECTION("clean run exits zero with the pinned header") {
        const CliResult res = run_cli(reduced);
        REQUIRE(res.exit_code == 0);
        REQUIRE(first_line(res.output) == "check_name,params,estimate,bound,pass");
        REQUIRE(contains(res.output, "model_row_sum,"));
        REQUIRE(contains(res.output, ",pass\n"));
        // asymptotic floors below n = 10 are flagged, not failed
        REQUIRE(contains(res.output, "analysis_pzero_floor,"));
        REQUIRE(contains(res.output, ",small-n\n"));
        REQUIRE_FALSE(contains(res.output, ",fail\n"));
    }
    SECTION("corrupted bounds flip the exit code") {
        const CliResult res = run_cli(reduced + " --corrupt-bounds");
        REQUIRE(res.exit_code == 1);
        REQUIRE(contains(res.output, ",fail\n"));
    }
}
