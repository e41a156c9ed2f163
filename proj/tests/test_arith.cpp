#include <doctest.h>

#include <random>

#include "zsig/arith.hpp"
#include "zsig/util.hpp"

using namespace zsig;

namespace {

// Independent oracle: trial division by every integer up to bound.
std::vector<std::pair<mpz_class, unsigned>> trial_oracle(mpz_class n, unsigned long bound) {
    std::vector<std::pair<mpz_class, unsigned>> out;
    n = abs(n);
    for (unsigned long d = 2; mpz_class(d) * d <= n && d <= bound; ++d) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            n /= d;
            ++e;
        }
        if (e > 0) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool oracle_is_prime(const mpz_class& n) {
    if (n < 2) return false;
    for (mpz_class d = 2; d * d <= n; ++d)
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return false;
    return true;
}

} // namespace

TEST_CASE("factor: small composite") {
    Factorization f = factor(63);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == 3);
    CHECK(f.factors[0].second == 2);
    CHECK(f.factors[1].first == 7);
    CHECK(f.factors[1].second == 1);
    CHECK(f.cofactor == 1);
    CHECK_FALSE(f.budget_exhausted);
}

TEST_CASE("factor: units keep their sign in value") {
    Factorization f = factor(mpz_class(-1));
    CHECK(f.factors.empty());
    CHECK(f.cofactor == 1);
    CHECK(f.value == -1);
    CHECK_FALSE(f.budget_exhausted);
    CHECK(f.reassemble() == -1);
}

TEST_CASE("factor: 2^32 + 1 splits as the oracle says") {
    mpz_class n = (mpz_class(1) << 32) + 1;
    // oracle: trial division to 10^4 finds 641; the 2589-bounded oracle
    // certifies the cofactor prime
    auto oracle = trial_oracle(n, 10'000);
    REQUIRE(oracle.size() == 2);
    CHECK(oracle[0].first == 641);
    CHECK(oracle_is_prime(oracle[1].first));

    Factorization f = factor(n);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == 641);
    CHECK(f.factors[1].first == 6700417);
    CHECK(f.factors[1].first == oracle[1].first);
    CHECK(f.cofactor == 1);
}

TEST_CASE("factor: rejects zero") {
    CHECK_THROWS_WITH_AS(factor(0), doctest::Contains("nonzero"), error);
    try {
        factor(0);
    } catch (const error& e) {
        CHECK(e.code() == errc::zero_input);
    }
}

TEST_CASE("factor: exhausted budget leaves a composite cofactor") {
    // two 11-digit primes; 10 rho iterations cannot split the product
    mpz_class p("10000000019"), q("10000000033");
    FactorBudget tiny{100, 10};
    Factorization f = factor(p * q, tiny);
    CHECK(f.budget_exhausted);
    CHECK(f.cofactor == p * q);
    CHECK(f.factors.empty());
    CHECK(f.reassemble() == p * q);

    // enough iterations split it completely
    Factorization g = factor(p * q, FactorBudget{100, 10'000'000});
    CHECK_FALSE(g.budget_exhausted);
    CHECK(g.cofactor == 1);
    REQUIRE(g.factors.size() == 2);
    CHECK(g.factors[0].first == p);
    CHECK(g.factors[1].first == q);
}

TEST_CASE("factor: probable-prime cofactors are listed, never left behind") {
    mpz_class p("170141183460469231731687303715884105727"); // 2^127 - 1
    Factorization f = factor(6 * p, FactorBudget{100, 10});
    CHECK_FALSE(f.budget_exhausted);
    CHECK(f.cofactor == 1);
    REQUIRE(f.factors.size() == 3);
    CHECK(f.factors[2].first == p);
}

TEST_CASE("factor: reassembly reproduces the input exactly") {
    std::mt19937_64 gen(20240811);
    for (int i = 0; i < 150; ++i) {
        mpz_class n = 1 + mpz_class(gen() % 1000000);
        n *= 1 + mpz_class(gen() % 1000000);
        if (gen() % 4 == 0) n *= mpz_class(gen() % 100000) + 1;
        if (gen() % 2 == 0) n = -n;
        Factorization f = factor(n);
        CHECK(f.reassemble() == n);
        for (std::size_t k = 0; k < f.factors.size(); ++k) {
            CHECK(is_probable_prime(f.factors[k].first));
            CHECK(f.factors[k].second >= 1);
            if (k > 0) CHECK(f.factors[k].first > f.factors[k - 1].first);
        }
        CHECK((f.cofactor == 1) == !f.budget_exhausted);
    }
}

TEST_CASE("factor: idempotent under budget increase") {
    std::mt19937_64 gen(987654321);
    FactorBudget small{50, 300};
    FactorBudget large{1'000'000, 300'000};
    for (int i = 0; i < 60; ++i) {
        mpz_class n = 1 + mpz_class(gen() % 1000000000);
        n *= 1 + mpz_class(gen() % 1000000000);
        Factorization fs = factor(n, small);
        Factorization fl = factor(n, large);
        for (const auto& [p, e] : fs.factors) {
            bool present = false;
            for (const auto& [pl, el] : fl.factors)
                if (pl == p && el >= e) present = true;
            CHECK(present);
        }
    }
}

TEST_CASE("ord_p examples and additivity") {
    CHECK(ord_p(63, 3) == 2);
    CHECK(ord_p(63, 5) == 0);
    CHECK(ord_p(mpz_class(1024) * 7, 2) == 10);
    CHECK_THROWS_AS(ord_p(0, 3), error);
    CHECK_THROWS_AS(ord_p(63, 4), error);
    try {
        ord_p(63, 4);
    } catch (const error& e) {
        CHECK(e.code() == errc::not_prime);
    }

    std::mt19937_64 gen(5150);
    const long primes[] = {2, 3, 5, 7, 11, 13};
    for (int i = 0; i < 200; ++i) {
        mpz_class m = mpz_class(gen() % 100000) - 50000;
        mpz_class n = mpz_class(gen() % 100000) - 50000;
        if (m == 0 || n == 0) continue;
        mpz_class p = primes[gen() % 6];
        CHECK(ord_p(m * n, p) == ord_p(m, p) + ord_p(n, p));
    }
}

TEST_CASE("is_probable_prime: knowns") {
    CHECK(is_probable_prime(2));
    CHECK(is_probable_prime(3));
    CHECK_FALSE(is_probable_prime(1));
    CHECK_FALSE(is_probable_prime(0));
    CHECK_FALSE(is_probable_prime(-7));
    CHECK_FALSE(is_probable_prime(561));   // Carmichael
    CHECK_FALSE(is_probable_prime(341));   // 2-pseudoprime
    CHECK(is_probable_prime(mpz_class("2305843009213693951")));            // 2^61 - 1
    CHECK_FALSE(is_probable_prime(mpz_class("147573952589676412927")));    // 2^67 - 1
    CHECK(is_probable_prime(mpz_class("170141183460469231731687303715884105727"))); // 2^127 - 1
    // agreement with the brute-force oracle on a window
    for (long n = 2; n < 2000; ++n) CHECK(is_probable_prime(n) == oracle_is_prime(n));
}
