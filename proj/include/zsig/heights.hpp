#ifndef ZSIG_HEIGHTS_HPP
#define ZSIG_HEIGHTS_HPP

#include <utility>
#include <vector>

#include <gmpxx.h>

#include "zsig/arith.hpp"
#include "zsig/geometry.hpp"

namespace zsig {

/// Weil height for the hyperplane class: log max |x_i| in normalized
/// coordinates.
double weil_height(const ProjectivePoint& P);

/// Finite-place local height along {F = 0}: ord_p(F(P)) * log p.
/// Throws on_divisor if F(P) = 0, not_prime for composite p.
double local_height(const ProjectivePoint& P, const HomogeneousForm& F, const mpz_class& p);

struct HeightEstimate {
    std::vector<std::pair<long, double>> values; // (n, d^{-n} h(f^n P))
    double final_estimate = 0.0;
    double cauchy_bound = 0.0; // max_n d^n |v_{n+1} - v_n|, an empirical stand-in for the O(1)
};

/// Partial canonical-height limit d^{-n} h(f^n P), n <= n_max.
HeightEstimate canonical_height_estimate(OrbitCache& orbit, long n_max);
HeightEstimate canonical_height_estimate(const Morphism& f, const ProjectivePoint& P, long n_max,
                                         std::uint64_t digit_ceiling = 1'000'000);

struct TruncatedCount {
    double sum = 0.0;       // sum of log p over distinct primes outside S
    bool complete = true;   // false when a composite cofactor remained
    double upper_bound = 0.0; // sum + log(cofactor) when incomplete, else sum
};

/// Truncated counting function over Z: each prime dividing value and outside
/// S contributes log p once. Throws zero_input.
TruncatedCount truncated_counting(const mpz_class& value, const std::vector<mpz_class>& s_primes,
                                  const FactorBudget& budget = {});

} // namespace zsig

#endif
