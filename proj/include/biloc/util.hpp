#pragma once

#include <cstdint>
#include <functional>

namespace biloc {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Worker count from BILOC_THREADS (default: hardware concurrency, at least 1).
int worker_count();

// Runs f(i) for i in [0, n) on up to worker_count() threads; f must only write to slot i.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace biloc
