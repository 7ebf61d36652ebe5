#include "mechlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mechlab {

std::size_t worker_count() {
    if (const char* env = std::getenv("MECHLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t items, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (chunk_size == 0)
        throw std::invalid_argument("parallel_chunks: chunk size must be positive");
    if (items == 0) return;

    const std::size_t chunks = (items + chunk_size - 1) / chunk_size;
    const std::size_t workers = std::min(worker_count(), chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            fn(c, c * chunk_size, std::min(items, (c + 1) * chunk_size));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= chunks) return;
                fn(c, c * chunk_size, std::min(items, (c + 1) * chunk_size));
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace mechlab
