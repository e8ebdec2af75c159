#pragma once

#include <random>

#include "census/curve.hpp"

namespace census::testing {

inline HyperellipticCurve random_curve(const FieldPtr& f, int gamma, std::mt19937_64& rng) {
  while (true) {
    std::vector<uint64_t> c(gamma);
    for (auto& x : c) x = rng() % f->order();
    Poly F = Poly::monic_from_labels(*f, c);
    if (is_squarefree(F)) return HyperellipticCurve::make(f, F);
  }
}

}  // namespace census::testing
