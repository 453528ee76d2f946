#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace eiko::util {

/// Worker count: min(hardware, EIKO_THREADS if set). At least 1.
int thread_count();

/// Deterministic parallel map: fn(i) for i in [0, n). Each index writes only
/// to its own output slot, so the result is independent of scheduling. Falls
/// back to a serial loop for small n or a single worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Kahan compensated accumulator; summation order is the caller's.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// Shortest round-trip decimal form of a double (17 significant digits).
std::string fmt17(double x);

}  // namespace eiko::util
