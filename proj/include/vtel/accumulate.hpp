#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

namespace vtel {

// Streaming mean/variance (Welford) with associative merge (Chan et al.).
struct Accumulator {
    long n = 0;
    double mean = 0, m2 = 0;

    void add(double v) {
        ++n;
        double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    void merge(const Accumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        long N = n + o.n;
        double d = o.mean - mean;
        mean += d * o.n / N;
        m2 += o.m2 + d * d * double(n) * o.n / N;
        n = N;
    }
    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
    double std_error() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }
};

// Replicas are cut into fixed blocks; blocks run in parallel and merge in
// block order, so the result does not depend on the thread count.
constexpr long kReplicaBlock = 512;

template <class Body>
Accumulator parallel_replicas(long n, Body&& body) {
    long nb = (n + kReplicaBlock - 1) / kReplicaBlock;
    std::vector<Accumulator> parts(nb);
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < nb; ++b) {
        long lo = b * kReplicaBlock, hi = std::min(n, lo + kReplicaBlock);
        for (long i = lo; i < hi; ++i) parts[b].add(body(i));
    }
    Accumulator all;
    for (auto& p : parts) all.merge(p);
    return all;
}

template <class Body>
Accumulator serial_replicas(long n, Body&& body) {
    Accumulator a;
    for (long i = 0; i < n; ++i) a.add(body(i));
    return a;
}

}  // namespace vtel
