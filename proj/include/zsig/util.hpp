#ifndef ZSIG_UTIL_HPP
#define ZSIG_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace zsig {

/// Natural log of |n|; n must be nonzero.
inline double log_abs(const mpz_class& n) {
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * M_LN2;
}

/// Exact decimal digit count of |n| (0 counts as one digit).
inline std::size_t digit_count(const mpz_class& n) {
    if (sgn(n) == 0) return 1;
    std::size_t est = mpz_sizeinbase(n.get_mpz_t(), 10); // exact or one too big
    if (est <= 1) return est;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, est - 1);
    mpz_class a = abs(n);
    return a >= pow10 ? est : est - 1;
}

/// Fast digit estimate (exact or one too big); for resource ceilings.
inline std::size_t digit_estimate(const mpz_class& n) {
    if (sgn(n) == 0) return 1;
    return mpz_sizeinbase(n.get_mpz_t(), 10);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Bounded draw from a seeded engine. mt19937_64 output is fully specified
/// by the standard; std distributions are not, so we reduce by hand.
inline std::uint64_t draw(std::mt19937_64& gen, std::uint64_t n) {
    return gen() % n;
}

inline std::int64_t draw_range(std::mt19937_64& gen, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(draw(gen, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// 12-significant-digit decimal text used for all reals in reports.
std::string format_real(double x);

} // namespace zsig

#endif
