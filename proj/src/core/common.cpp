// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#include "common.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace uniqaudit {

uint64_t fnv1a64(std::string_view bytes, uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64(uint64_t value, uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t derive_seed(uint64_t base, std::string_view label) {
    return fnv1a64(label, fnv1a64(base, 0xcbf29ce484222325ULL));
}

uint64_t derive_seed(uint64_t base, std::string_view label, uint64_t n) {
    return fnv1a64(n, derive_seed(base, label));
}

uint64_t derive_seed(uint64_t base, std::string_view label, std::string_view key) {
    return fnv1a64(key, derive_seed(base, label));
}

uint64_t derive_seed(uint64_t base, std::string_view label, std::string_view key, uint64_t n) {
    return fnv1a64(n, derive_seed(base, label, key));
}

uint64_t Rng::uniform_index(uint64_t bound) {
    // rejection sampling on the top of the range keeps the draw unbiased
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform_double();
    double u2 = uniform_double();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

double Rng::lognormal(double log_mean, double log_sigma) {
    return std::exp(log_mean + log_sigma * normal());
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("UNIQ_AUDIT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(size_t n, unsigned threads, const std::function<void(size_t, size_t)>& fn) {
    if (n == 0) return;
    unsigned t = std::min<size_t>(resolve_threads(threads), n);
    if (t <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    size_t chunk = (n + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) {
        size_t begin = i * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

namespace {

template <typename T>
double quantile_impl(std::span<const T> sorted, double q) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    if (!(q > 0.0 && q < 100.0)) throw ConfigError("quantile must lie in (0, 100)");
    double h = (static_cast<double>(sorted.size()) - 1.0) * (q / 100.0);
    size_t lo = static_cast<size_t>(h);
    double g = h - static_cast<double>(lo);
    double a = static_cast<double>(sorted[lo]);
    if (g == 0.0 || lo + 1 >= sorted.size()) return a;
    return a + g * (static_cast<double>(sorted[lo + 1]) - a);
}

}  // namespace

double quantile_type7(std::span<const double> sorted, double q) { return quantile_impl(sorted, q); }
double quantile_type7(std::span<const uint32_t> sorted, double q) { return quantile_impl(sorted, q); }

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace uniqaudit
