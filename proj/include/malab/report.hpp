#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace malab {

// Shared run plumbing: deterministic RNG streams, fixed-order parallel maps,
// and stable number formatting. Everything here exists so that a run with the
// same seed produces identical bytes at any worker count.

// splitmix64; also usable as a mix function to derive stream seeds
std::uint64_t mix64(std::uint64_t z);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent stream for one work item; results then do not depend on
    // which thread handles which index.
    static Rng for_index(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform(); // [0,1)
    double uniform(double a, double b);
    int uniform_int(int lo, int hi); // inclusive bounds
    double normal();

private:
    std::uint64_t state_;
};

// fn(i) for i in [0,n); tasks must be pure per-index, writing only slot i of
// any shared output
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// pairwise summation in index order; association independent of chunking
double stable_sum(const std::vector<double>& terms);

std::string format_double(double v); // %.17g
std::string csv_join(const std::vector<std::string>& cells);

} // namespace malab
