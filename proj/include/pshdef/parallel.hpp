#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace pshdef {

/// Worker count: PSHDEF_THREADS caps parallelism; unset falls back to the
/// hardware count.
inline int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("PSHDEF_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

/// Index-parallel loop with deterministic semantics: fn(i) must write only
/// to position i of caller-owned storage.
template <class F>
void parallel_for(int n, F&& fn) {
    int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pshdef
