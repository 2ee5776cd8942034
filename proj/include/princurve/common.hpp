#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace princurve {

/// Raised when iterations produce non-finite values (divergent step size,
/// malformed inputs that slipped past validation). The CLI maps it to exit 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on malformed input files (CSV/JSON). The CLI maps it to exit 3.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic pairwise summation: fixed recursive halving, independent of
/// chunking or thread count.
double pairwise_sum(std::span<const double> values);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;   // sample variance (n-1 denominator)
    std::size_t count = 0;
    double std_error() const {
        return count > 1 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
    }
};

MeanVar mean_var(std::span<const double> values);

/// Thread cap from PRINCURVE_THREADS (>=1). Results never depend on it:
/// work is split into fixed-size chunks and reduced in chunk order.
int max_threads();

/// Runs fn(begin, end) over fixed 8192-element chunks, possibly on several
/// threads. fn must only write to per-index slots (no shared accumulation).
void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace princurve
