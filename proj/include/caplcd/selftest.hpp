#pragma once

// Seeded random instances and the embedded invariant suite run by
// `caplcd selftest`.

#include "caplcd/caps.hpp"
#include "caplcd/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace caplcd {

// Instance generators. All draws go through Rng so instances are reproducible.

/// `size` distinct nonzero points of F2^m.
[[nodiscard]] PointSet random_subset(int m, std::size_t size, Rng& rng);

/// A random union of cosets of a random subspace of dimension `period_dim`,
/// zero coset excluded. The period contains that subspace.
[[nodiscard]] PointSet random_periodic_set(int m, int period_dim, Rng& rng);

/// A random cap invariant under translation by `v`, grown greedily pair by pair.
[[nodiscard]] PointSet random_periodic_cap(int m, std::uint32_t v, Rng& rng);

/// A cap of size 2^{m-2} + 1 meeting the hyperplane <normal>^perp only in `h`:
/// h plus one point from each pair {a, a + h} of the complement.
[[nodiscard]] PointSet one_point_hyperplane_cap(int m, std::uint32_t normal, std::uint32_t h, Rng& rng);

/// A uniformly random subset of size `size` of the complement of <normal>^perp.
[[nodiscard]] PointSet random_complement_cap(int m, std::uint32_t normal, std::size_t size, Rng& rng);

/// A random nonzero vector of F2^m.
[[nodiscard]] std::uint32_t random_nonzero(int m, Rng& rng);

struct SelftestOptions {
    std::uint64_t seed = 1;
    int iterations = 200; // instances per property
    bool inject_gram_fault = false;
};

struct PropertyResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string first_violation;
};

struct SelftestReport {
    std::vector<PropertyResult> properties;

    [[nodiscard]] bool pass() const;
};

/// Throws PreconditionError when iterations < 1.
[[nodiscard]] SelftestReport run_selftest(const SelftestOptions& options);

} // namespace caplcd
