#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "bellkit/bounds.hpp"
#include "bellkit/coefficients.hpp"
#include "bellkit/scenario.hpp"

// Benchmarks the OpenMP deterministic-strategy enumeration against the serial
// reference kernel on the same scenario, and checks that both agree exactly
// (value and maximizing strategy id).

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    return elapsed.count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark: serial vs parallel classical-bound enumeration"};
    int n = 3, m = 3, d = 3;
    int repeats = 3;
    std::int64_t budget = bellkit::kDefaultStrategyBudget;
    app.add_option("--N", n, "Parties (default 3)");
    app.add_option("--m", m, "Settings per party (default 3)");
    app.add_option("--d", d, "Outcomes per measurement (default 3)");
    app.add_option("--repeats", repeats, "Timing repetitions (default 3)");
    app.add_option("--budget", budget, "Strategy-count budget");
    CLI11_PARSE(app, argc, argv);

    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
    std::printf("scenario: N=%d m=%d d=%d (%lld deterministic strategies)\n", n, m, d,
                static_cast<long long>(bellkit::ipow(d, n * m)));
    std::printf("threads: %d\n", omp_get_max_threads());

    double serial_best = 1e300, parallel_best = 1e300;
    bellkit::BoundReport serial_report{}, parallel_report{};
    for (int rep = 0; rep < repeats; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        serial_report = bellkit::classical_bound_bruteforce_serial(s, c.alpha_hat, budget);
        const double ts = seconds_since(t0);
        serial_best = std::min(serial_best, ts);

        t0 = std::chrono::steady_clock::now();
        parallel_report = bellkit::classical_bound_bruteforce(s, c.alpha_hat, budget);
        const double tp = seconds_since(t0);
        parallel_best = std::min(parallel_best, tp);

        std::printf("rep %d: serial %.3fs  parallel %.3fs\n", rep + 1, ts, tp);
    }

    std::printf("best: serial %.3fs  parallel %.3fs  speedup %.2fx\n", serial_best, parallel_best,
                serial_best / parallel_best);
    std::printf("value: serial %.17g  parallel %.17g\n", serial_report.value,
                parallel_report.value);
    const bool same_value = serial_report.value == parallel_report.value;
    const bool same_strategy = serial_report.strategy && parallel_report.strategy &&
                               serial_report.strategy->id() == parallel_report.strategy->id();
    if (!same_value || !same_strategy) {
        std::printf("MISMATCH between serial and parallel kernels\n");
        return 1;
    }
    std::printf("kernels agree (value and strategy id %lld)\n",
                static_cast<long long>(serial_report.strategy->id()));
    return 0;
}
