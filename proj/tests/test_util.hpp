#pragma once

#include <random>
#include <vector>

#include "qinv/polymatrix.hpp"

namespace testutil {

inline qinv::Poly random_poly(const qinv::ContextPtr& c, std::mt19937_64& rng, int terms, unsigned max_deg) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<unsigned> exp(0, max_deg);
  std::vector<qinv::Term> out;
  for (int t = 0; t < terms; ++t) {
    std::vector<unsigned> e(c->size());
    unsigned total = 0;
    for (auto& x : e) {
      x = total < max_deg ? std::min(exp(rng) / 2, max_deg - total) : 0;
      total += x;
    }
    out.push_back({qinv::Monomial::from_exponents(e), qinv::Rational(coeff(rng))});
  }
  return qinv::Poly::from_terms(c, std::move(out));
}

inline std::vector<qinv::Rational> random_point(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-20, 20);
  std::vector<qinv::Rational> p(n);
  for (auto& x : p) x = d(rng);
  return p;
}

/// Skew matrix with random linear-form entries.
inline qinv::PolyMatrix random_skew(const qinv::ContextPtr& c, std::size_t n, std::mt19937_64& rng) {
  qinv::PolyMatrix m(c, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = random_poly(c, rng, 2, 1);
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace testutil
