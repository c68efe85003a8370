#include "mlc/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mlc {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MLC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    const int k = static_cast<int>(std::min<long>(threads, n));
    pool.reserve(k);
    for (int t = 0; t < k; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace mlc
