// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The uniqaudit Authors

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniqaudit {

/// Invalid parameters, flags or configuration values.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Model fitting failed (degenerate, non-decaying or unstable).
class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a. Used to derive sub-seeds from (seed, label, ordinal)
// tuples so that every stochastic step is a pure function of its inputs
// and results do not depend on scheduling.
uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(uint64_t value, uint64_t h);

uint64_t derive_seed(uint64_t base, std::string_view label);
uint64_t derive_seed(uint64_t base, std::string_view label, uint64_t n);
uint64_t derive_seed(uint64_t base, std::string_view label, std::string_view key);
uint64_t derive_seed(uint64_t base, std::string_view label, std::string_view key, uint64_t n);

// Deterministic RNG. std::mt19937_64 is pinned by the standard; the
// distribution helpers are hand-rolled because the std distributions are
// implementation-defined and would break byte-identical reproducibility
// across toolchains.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, bound). bound must be > 0.
    uint64_t uniform_index(uint64_t bound);

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform_double() < p; }

    /// Standard normal via Box-Muller.
    double normal();

    double lognormal(double log_mean, double log_sigma) ;

    template <typename T>
    void shuffle(std::span<T> values) {
        for (size_t i = values.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Thread count resolution: explicit request, else UNIQ_AUDIT_THREADS,
/// else hardware concurrency. Always >= 1.
unsigned resolve_threads(unsigned requested = 0);

// Static block partition over [0, n). fn(begin, end) runs on disjoint
// ranges; callers must only write to per-index slots so that results are
// independent of the thread count.
void parallel_for(size_t n, unsigned threads, const std::function<void(size_t, size_t)>& fn);

/// Type-7 (linear interpolation) quantile of an ascending-sorted sample.
/// q is a percentile in (0, 100).
double quantile_type7(std::span<const double> sorted, double q);
double quantile_type7(std::span<const uint32_t> sorted, double q);

/// Shortest round-trip decimal form of a double (for CSV output).
std::string format_double(double v);

}  // namespace uniqaudit
