#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace fuchs {

/// Evaluates fn(0..n-1) on a few worker threads and returns the results in
/// index order. Exceptions propagate from the first failing chunk.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
    const std::size_t chunk = (n + workers - 1) / std::max<std::size_t>(workers, 1);
    std::vector<std::future<std::vector<R>>> jobs;
    for (std::size_t start = 0; start < n; start += chunk) {
        const std::size_t stop = std::min(n, start + chunk);
        jobs.push_back(std::async(std::launch::async, [&fn, start, stop] {
            std::vector<R> part;
            part.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) part.push_back(fn(i));
            return part;
        }));
    }
    std::vector<R> out;
    out.reserve(n);
    for (auto& j : jobs)
        for (auto& r : j.get()) out.push_back(std::move(r));
    return out;
}

}  // namespace fuchs
