#pragma once

#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

namespace modcyl {

using complex = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double pi = std::numbers::pi;

/// Number of worker threads, capped by the MODCYL_THREADS environment variable.
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MODCYL_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(n));
    }
    return hw;
}

/// Run body(i) for i in [0, n), splitting the range across threads.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned nt = thread_budget();
    if (nt <= 1 || n < 2 * nt) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &failure, &failure_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace modcyl
