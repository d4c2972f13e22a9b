#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace cshell {

namespace detail {
inline int& thread_count_ref() {
    static int n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}
}  // namespace detail

inline void set_threads(int n) { detail::thread_count_ref() = std::max(1, n); }
inline int threads() { return detail::thread_count_ref(); }

// Runs body(r) for r in [0, nrows). Rows are handed out in contiguous blocks,
// so the caller controls determinism by writing into per-row slots.
template <class F>
void parallel_rows(int nrows, F&& body) {
    const int nt = std::min(threads(), nrows);
    if (nt <= 1) {
        for (int r = 0; r < nrows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nt);
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const int lo = nrows * t / nt, hi = nrows * (t + 1) / nt;
        pool.emplace_back([lo, hi, t, &body, &errs] {
            try {
                for (int r = lo; r < hi; ++r) body(r);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

// Sum of row(r) over all rows, accumulated in row order whatever the thread
// count, so results are bit-identical across --threads settings.
template <class F>
double reduce_rows(int nrows, F&& row) {
    std::vector<double> part(nrows, 0.0);
    parallel_rows(nrows, [&](int r) { part[r] = row(r); });
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

}  // namespace cshell
