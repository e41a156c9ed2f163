#ifndef ZSIG_ARITH_HPP
#define ZSIG_ARITH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "zsig/error.hpp"

namespace zsig {

/// Effort limits for factor(). Budgets compare componentwise: a run with
/// larger bounds finds a superset of the factors of a run with smaller ones.
struct FactorBudget {
    std::uint64_t trial_bound = 1'000'000;   // trial division by primes up to this bound
    std::uint64_t rho_iterations = 2'000'000; // total Brent-rho iterations across all splits
};

/// Partial or complete factorization of a nonzero integer.
///
/// value = sign(value) * cofactor * prod(p_i^e_i). Listed primes are strong
/// probable primes in strictly increasing order. cofactor == 1 exactly when
/// the budget sufficed; otherwise cofactor is a composite remainder and
/// budget_exhausted is set.
struct Factorization {
    mpz_class value;
    std::vector<std::pair<mpz_class, unsigned>> factors;
    mpz_class cofactor = 1;
    bool budget_exhausted = false;

    mpz_class reassemble() const; // sign(value) * cofactor * prod p^e
};

/// Strong probable-prime test: fixed witness set 2..41 (deterministic below
/// 3.3e24) plus extra witnesses derived deterministically from n above.
bool is_probable_prime(const mpz_class& n);

/// Deterministic best-effort factorization. Trial division by sieved primes,
/// perfect-power splitting, then Brent rho seeded from the composite itself.
Factorization factor(const mpz_class& n, const FactorBudget& budget = {});

/// Exact exponent of the prime p in n. Throws zero_input / not_prime.
unsigned long ord_p(const mpz_class& n, const mpz_class& p);

} // namespace zsig

#endif
