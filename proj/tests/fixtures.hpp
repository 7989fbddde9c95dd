#pragma once

#include <linfty/dg_algebra.hpp>
#include <linfty/hodge.hpp>

#include <cstdlib>
#include <random>

namespace linfty::testing {

inline std::uint64_t suite_seed() {
    if (const char* s = std::getenv("LINFTY_SEED")) return std::strtoull(s, nullptr, 10);
    return 20240901ull;
}

/// Orthonormal-metric copy of an algebra (the default metric).
inline DgAlgebra with_orthonormal_metric(DgAlgebra a) {
    auto fresh = std::make_shared<GradedVectorSpace>(*a.space);
    fresh->set_orthonormal_inner_product();
    a.m1 = rebind(a.m1, fresh, fresh);
    a.m2 = rebind(a.m2, fresh, fresh);
    a.space = fresh;
    return a;
}

inline DgAlgebra corpus_algebra(std::uint64_t index, int max_dim = 8) {
    std::mt19937_64 rng(suite_seed() + 0x9e3779b97f4a7c15ull * (index + 1));
    return random_corpus_algebra(rng, max_dim);
}

inline RetractionData corpus_retraction(const DgAlgebra& a) { return retraction_from_inner_product(a); }

}  // namespace linfty::testing
