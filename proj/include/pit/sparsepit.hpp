#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pit/fp.hpp"

namespace pit {

// Blackbox hitting set for m-variate polynomials of per-variable degree <= delta:
// Kronecker substitution x_j -> y^{(delta+1)^{j-1}} keeps monomials distinct, so a
// nonzero input stays a nonzero univariate of degree (delta+1)^m - 1, and that many
// +1 distinct y-values must contain a non-root.
struct SparseHittingSpec {
    std::size_t m = 1;
    std::uint64_t delta = 1;
    std::uint64_t p = kDefaultPrime;
};

// per-variable Kronecker weights and the exact substituted degree
inline std::vector<std::uint64_t> kronecker_weights(const std::vector<std::uint64_t>& degs) {
    std::vector<std::uint64_t> w(degs.size());
    unsigned __int128 acc = 1;
    for (std::size_t j = 0; j < degs.size(); ++j) {
        if (acc > (unsigned __int128)1 << 62) throw TooLarge("Kronecker weights overflow");
        w[j] = static_cast<std::uint64_t>(acc);
        acc *= degs[j] + 1;
    }
    return w;
}

inline std::uint64_t substituted_degree(const std::vector<std::uint64_t>& degs) {
    unsigned __int128 acc = 1;
    for (auto d : degs) {
        acc *= d + 1;
        if (acc > (unsigned __int128)1 << 62) throw TooLarge("substituted degree overflow");
    }
    return static_cast<std::uint64_t>(acc - 1);
}

// grid for mixed per-variable degree bounds; substituted degree + 1 points
inline std::vector<std::vector<Fp>> hitting_points_mixed(const std::vector<std::uint64_t>& degs,
                                                         std::uint64_t p) {
    auto w = kronecker_weights(degs);
    std::uint64_t dsub = substituted_degree(degs);
    if (dsub + 1 > p) throw FieldTooSmall("grid larger than the field");
    std::vector<std::vector<Fp>> pts;
    pts.reserve(dsub + 1);
    for (std::uint64_t y = 0; y <= dsub; ++y) {
        std::vector<Fp> pt;
        pt.reserve(degs.size());
        Fp yv(y, p);
        for (std::size_t j = 0; j < degs.size(); ++j) pt.push_back(yv.pow(w[j]));
        pts.push_back(std::move(pt));
    }
    return pts;
}

inline std::vector<std::vector<Fp>> hitting_points(const SparseHittingSpec& spec) {
    return hitting_points_mixed(std::vector<std::uint64_t>(spec.m, spec.delta), spec.p);
}

// nonzero iff some grid point evaluates nonzero; exact for per-variable degree <= delta
inline bool low_variate_hitting(const std::function<Fp(const std::vector<Fp>&)>& blackbox,
                                std::size_t m, std::uint64_t delta, std::uint64_t p) {
    for (const auto& pt : hitting_points({m, delta, p}))
        if (!blackbox(pt).is_zero()) return true;
    return false;
}

}  // namespace pit
