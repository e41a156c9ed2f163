#include "zsig/heights.hpp"

#include <algorithm>
#include <cmath>

#include "zsig/util.hpp"

namespace zsig {

double weil_height(const ProjectivePoint& P) {
    mpz_class best = 0;
    for (const auto& c : P.coords()) {
        mpz_class a = abs(c);
        if (a > best) best = a;
    }
    // normalized coordinates are not all zero, so best >= 1
    return best == 1 ? 0.0 : log_abs(best);
}

double local_height(const ProjectivePoint& P, const HomogeneousForm& F, const mpz_class& p) {
    if (!is_probable_prime(p)) fail(errc::not_prime, "local_height: p is not prime");
    mpz_class v = evaluate_form(F, P);
    if (sgn(v) == 0) fail(errc::on_divisor, "local_height: point lies on the divisor");
    unsigned long e = ord_p(v, p);
    return e == 0 ? 0.0 : static_cast<double>(e) * log_abs(p);
}

HeightEstimate canonical_height_estimate(OrbitCache& orbit, long n_max) {
    if (n_max < 0) fail(errc::index_out_of_range, "canonical_height_estimate: negative horizon");
    HeightEstimate est;
    est.values.reserve(static_cast<std::size_t>(n_max) + 1);
    for (long n = 0; n <= n_max; ++n) {
        double h = weil_height(orbit.point(static_cast<std::size_t>(n)));
        double v = h / std::pow(static_cast<double>(orbit.morphism().degree()), static_cast<double>(n));
        est.values.emplace_back(n, v);
    }
    est.final_estimate = est.values.back().second;
    double dn = 1.0;
    const double d = static_cast<double>(orbit.morphism().degree());
    for (std::size_t i = 0; i + 1 < est.values.size(); ++i) {
        est.cauchy_bound = std::max(est.cauchy_bound,
                                    dn * std::fabs(est.values[i + 1].second - est.values[i].second));
        dn *= d;
    }
    return est;
}

HeightEstimate canonical_height_estimate(const Morphism& f, const ProjectivePoint& P, long n_max,
                                         std::uint64_t digit_ceiling) {
    OrbitCache orbit(f, P, digit_ceiling);
    return canonical_height_estimate(orbit, n_max);
}

TruncatedCount truncated_counting(const mpz_class& value, const std::vector<mpz_class>& s_primes,
                                  const FactorBudget& budget) {
    if (sgn(value) == 0) fail(errc::zero_input, "truncated_counting: value is zero");
    TruncatedCount out;
    if (abs(value) == 1) return out;
    Factorization fct = factor(value, budget);
    for (const auto& [p, e] : fct.factors) {
        if (std::find(s_primes.begin(), s_primes.end(), p) != s_primes.end()) continue;
        out.sum += log_abs(p);
    }
    out.complete = !fct.budget_exhausted;
    out.upper_bound = out.sum + (out.complete ? 0.0 : log_abs(fct.cofactor));
    return out;
}

} // namespace zsig
