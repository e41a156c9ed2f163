#include "zsig/arith.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "zsig/util.hpp"

namespace zsig {

namespace {

// Primes up to 2^20, sieved once; trial division walks this table and
// extends by a 2/4 wheel past its end when the budget asks for more.
const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        const std::uint32_t limit = 1u << 20;
        std::vector<bool> comp(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (!comp[i]) {
                out.push_back(i);
                for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= limit; j += i)
                    comp[j] = true;
            }
        }
        return out;
    }();
    return primes;
}

bool miller_rabin_witness(const mpz_class& n, const mpz_class& base, const mpz_class& d, unsigned long s) {
    mpz_class x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned p : small) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    // n - 1 = d * 2^s with d odd
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (unsigned p : small)
        if (!miller_rabin_witness(n, mpz_class(p), d, s)) return false;
    // The 13-witness set is deterministic below 3.317e24 (25 digits).
    if (mpz_sizeinbase(n.get_mpz_t(), 10) >= 25) {
        std::mt19937_64 gen(fnv1a64(n.get_str()));
        mpz_class span = n - 3;
        for (int round = 0; round < 32; ++round) {
            mpz_class base = 2 + mpz_class(gen()) % span;
            if (!miller_rabin_witness(n, base, d, s)) return false;
        }
    }
    return true;
}

mpz_class Factorization::reassemble() const {
    mpz_class acc = cofactor;
    for (const auto& [p, e] : factors) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        acc *= pe;
    }
    return sgn(value) < 0 ? mpz_class(-acc) : acc;
}

namespace {

// Brent's cycle variant of Pollard rho with batched gcds. Consumes from
// *iters_left; returns a nontrivial factor of n, or 0 if the budget ran out
// before one appeared. The (y0, c) parameters fix the whole trajectory, so a
// rerun with a larger budget retraces the same prefix.
mpz_class brent_rho(const mpz_class& n, unsigned long y0, unsigned long c, std::uint64_t* iters_left) {
    const unsigned batch = 128;
    mpz_class y = y0, x, ys, q = 1, g = 1;
    std::uint64_t r = 1;
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) {
            if (*iters_left == 0) return 0;
            --*iters_left;
            y = (y * y + c) % n;
        }
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            std::uint64_t m = std::min<std::uint64_t>(batch, r - k);
            for (std::uint64_t i = 0; i < m; ++i) {
                if (*iters_left == 0) return 0;
                --*iters_left;
                y = (y * y + c) % n;
                q = (q * abs(x - y)) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        // Batched gcd overshot; replay the last block one step at a time.
        do {
            ys = (ys * ys + c) % n;
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g == n ? mpz_class(0) : g;
}

// Nontrivial factor of composite n within the iteration budget, trying a
// deterministic (y0, c) ladder. 0 means the budget ran out.
mpz_class rho_factor(const mpz_class& n, std::uint64_t* iters_left) {
    for (unsigned long attempt = 0; *iters_left > 0; ++attempt) {
        mpz_class g = brent_rho(n, 2 + attempt, 1 + attempt, iters_left);
        if (g > 1) return g;
    }
    return 0;
}

} // namespace

Factorization factor(const mpz_class& n, const FactorBudget& budget) {
    if (sgn(n) == 0) fail(errc::zero_input, "factor: n must be nonzero");
    Factorization out;
    out.value = n;
    mpz_class work = abs(n);
    std::map<mpz_class, unsigned> found;
    // keep p*p inside 64 bits
    const std::uint64_t trial_bound = std::min<std::uint64_t>(budget.trial_bound, (1ull << 32) - 2);

    if (work > 1) {
        const auto strip = [&](std::uint64_t p) {
            if (mpz_divisible_ui_p(work.get_mpz_t(), p)) {
                unsigned long e = mpz_remove(work.get_mpz_t(), work.get_mpz_t(), mpz_class(p).get_mpz_t());
                found[p] += static_cast<unsigned>(e);
            }
        };
        const auto below_p_squared = [&](std::uint64_t p) {
            return mpz_cmp_ui(work.get_mpz_t(), p * p) < 0;
        };
        // Trial division by sieved primes up to the budget bound.
        for (std::uint32_t p : small_primes()) {
            if (p > trial_bound || below_p_squared(p)) break;
            strip(p);
        }
        if (trial_bound > (1u << 20)) {
            // Wheel past the sieve table.
            for (std::uint64_t p = (1u << 20) + 3; p <= trial_bound; p += 2) {
                if (p % 3 == 0 || p % 5 == 0) continue;
                if (below_p_squared(p)) break;
                strip(p);
            }
        }
        if (work > 1 && below_p_squared(trial_bound + 1)) {
            // Remainder below the square of the bound is prime.
            found[work] += 1;
            work = 1;
        }
    }

    std::uint64_t iters = budget.rho_iterations;
    std::deque<std::pair<mpz_class, unsigned>> pending; // composite, multiplicity
    if (work > 1) pending.emplace_back(work, 1);
    mpz_class cofactor = 1;
    bool exhausted = false;

    while (!pending.empty()) {
        auto [m, mult] = pending.front();
        pending.pop_front();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            found[m] += mult;
            continue;
        }
        if (mpz_perfect_power_p(m.get_mpz_t())) {
            for (unsigned long k = 2; k <= mpz_sizeinbase(m.get_mpz_t(), 2); ++k) {
                mpz_class root, rem;
                mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), m.get_mpz_t(), k);
                if (rem == 0) {
                    pending.emplace_front(root, mult * static_cast<unsigned>(k));
                    break;
                }
            }
            continue;
        }
        if (exhausted || iters == 0) {
            for (unsigned i = 0; i < mult; ++i) cofactor *= m;
            exhausted = true;
            continue;
        }
        mpz_class g = rho_factor(m, &iters);
        if (g == 0) {
            for (unsigned i = 0; i < mult; ++i) cofactor *= m;
            exhausted = true;
            continue;
        }
        pending.emplace_front(m / g, mult);
        pending.emplace_front(g, mult);
    }

    out.factors.assign(found.begin(), found.end());
    out.cofactor = cofactor;
    out.budget_exhausted = exhausted;
    return out;
}

unsigned long ord_p(const mpz_class& n, const mpz_class& p) {
    if (sgn(n) == 0) fail(errc::zero_input, "ord_p: n must be nonzero");
    if (!is_probable_prime(p)) fail(errc::not_prime, "ord_p: p = " + p.get_str() + " is not prime");
    mpz_class rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

} // namespace zsig
