#include "princurve/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace princurve {

namespace {
constexpr std::size_t kChunk = 8192;

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

MeanVar mean_var(std::span<const double> values) {
    MeanVar mv;
    mv.count = values.size();
    if (mv.count == 0) return mv;
    mv.mean = pairwise_sum(values) / static_cast<double>(mv.count);
    if (mv.count < 2) return mv;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dif = values[i] - mv.mean;
        sq[i] = dif * dif;
    }
    mv.variance = pairwise_sum(sq) / static_cast<double>(mv.count - 1);
    return mv;
}

int max_threads() {
    if (const char* env = std::getenv("PRINCURVE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    return 1;
}

void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
    const int threads = max_threads();
    if (threads <= 1 || count <= kChunk) {
        for (std::size_t b = 0; b < count; b += kChunk) fn(b, std::min(b + kChunk, count));
        return;
    }
    std::vector<std::size_t> starts;
    for (std::size_t b = 0; b < count; b += kChunk) starts.push_back(b);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= starts.size()) return;
            fn(starts[i], std::min(starts[i] + kChunk, count));
        }
    };
    std::vector<std::thread> pool;
    const int nworkers = std::min<int>(threads, static_cast<int>(starts.size()));
    pool.reserve(nworkers);
    for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace princurve
