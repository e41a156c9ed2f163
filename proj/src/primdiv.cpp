#include "zsig/primdiv.hpp"

#include <algorithm>

#include "zsig/util.hpp"

namespace zsig {

namespace {

// Removes from c all primes shared with h, full multiplicity.
void strip_by(mpz_class& c, const mpz_class& h) {
    mpz_class g = gcd(c, h);
    while (g > 1) {
        mpz_class q;
        // exact: g | c
        mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        c = std::move(q);
        g = gcd(c, g);
    }
}

} // namespace

void SupportBasis::insert(const mpz_class& t) {
    mpz_class rest = abs(t);
    if (rest <= 1) return;
    std::vector<mpz_class> split;
    for (std::size_t i = 0; i < gens_.size() && rest > 1; ++i) {
        mpz_class d = gcd(rest, gens_[i]);
        if (d == 1) continue;
        // shared primes go to d; the rest of the generator keeps the others
        mpz_class keep = gens_[i];
        strip_by(keep, d);
        gens_[i] = d;
        if (keep > 1) split.push_back(std::move(keep));
        strip_by(rest, d);
    }
    for (auto& g : split) gens_.push_back(std::move(g));
    if (rest > 1) gens_.push_back(std::move(rest));
}

mpz_class SupportBasis::strip(mpz_class c) const {
    for (const auto& g : gens_) {
        if (c == 1) break;
        strip_by(c, g);
    }
    return c;
}

mpz_class primitive_part(const mpz_class& a, const std::vector<mpz_class>& history,
                         const std::vector<mpz_class>& excluded) {
    if (sgn(a) == 0) fail(errc::zero_input, "primitive_part: term is zero");
    mpz_class c = abs(a);
    for (const auto& h : history) {
        if (sgn(h) == 0) continue; // zero terms never join the history
        if (c == 1) break;
        strip_by(c, h);
    }
    for (const auto& p : excluded) {
        if (c == 1) break;
        strip_by(c, p);
    }
    return c;
}

bool has_primitive_divisor(const mpz_class& a, const std::vector<mpz_class>& history,
                           const std::vector<mpz_class>& excluded) {
    if (sgn(a) == 0) return true; // divisible by every prime; fresh ones exist
    if (abs(a) == 1) return false;
    return primitive_part(a, history, excluded) > 1;
}

ZsigmondyReport zsigmondy_set(const SequenceSpec& spec, long n_max,
                              const std::vector<mpz_class>& excluded,
                              const ZsigmondyOptions& options) {
    TermStream stream(spec, options.digit_ceiling);
    return zsigmondy_run(stream, n_max, excluded, options);
}

ZsigmondyReport zsigmondy_run(TermStream& stream, long n_max,
                              const std::vector<mpz_class>& excluded,
                              const ZsigmondyOptions& options) {
    const SequenceSpec& spec = stream.spec();
    if (n_max < spec.first_index())
        fail(errc::index_out_of_range, "zsigmondy_set: horizon below the first index");
    for (const auto& p : excluded)
        if (!is_probable_prime(p))
            fail(errc::invalid_spec, "zsigmondy_set: excluded value " + p.get_str() + " is not prime");

    ZsigmondyReport report{spec, n_max, excluded, {}, {}, false, -1, std::nullopt};
    std::sort(report.excluded_primes.begin(), report.excluded_primes.end());
    report.excluded_primes.erase(
        std::unique(report.excluded_primes.begin(), report.excluded_primes.end()),
        report.excluded_primes.end());

    SupportBasis basis;
    double tail_max = 0;
    bool tail_seen = false;

    for (long n = spec.first_index(); n <= n_max; ++n) {
        mpz_class a;
        try {
            a = stream.term(n);
        } catch (const error& e) {
            if (e.code() == errc::resource_limit) {
                report.truncated = true;
                report.truncated_at = n;
                break;
            }
            throw;
        }
        TermRecord rec;
        rec.n = n;
        rec.value = a;
        if (sgn(a) == 0) {
            rec.primitive_part = 1;
            rec.has_primitive = true; // footnote rule
            rec.b_n = 0.0;
        } else {
            mpz_class c = basis.strip(abs(a));
            for (const auto& p : report.excluded_primes) {
                if (c == 1) break;
                strip_by(c, p);
            }
            rec.primitive_part = c;
            rec.has_primitive = c > 1;
            rec.b_n = c == 1 ? 0.0 : log_abs(c);
            if (options.fill_primitive_primes && digit_estimate(c) <= options.factor_digit_limit) {
                Factorization fct = factor(c, options.factor_budget);
                if (!fct.budget_exhausted) {
                    std::vector<mpz_class> primes;
                    primes.reserve(fct.factors.size());
                    for (const auto& [p, e] : fct.factors) primes.push_back(p);
                    rec.primitive_primes = std::move(primes);
                }
            }
            basis.insert(a);
            if (2 * n > n_max) {
                tail_max = std::max(tail_max, log_abs(a) / static_cast<double>(n));
                tail_seen = true;
            }
        }
        if (!rec.has_primitive) report.zsigmondy_set.push_back(n);
        report.records.push_back(std::move(rec));
    }
    if (tail_seen) report.tail_log_ratio = tail_max;
    return report;
}

double b_statistic(const ZsigmondyReport& report, long n) {
    const long first = report.spec.first_index();
    if (n < first || n > report.horizon ||
        static_cast<std::size_t>(n - first) >= report.records.size())
        fail(errc::index_out_of_range, "b_statistic: index outside the computed range");
    const TermRecord& rec = report.records[static_cast<std::size_t>(n - first)];
    if (sgn(rec.value) == 0) fail(errc::zero_term, "b_statistic: term is zero");
    return rec.b_n;
}

bool reduction_intersects(const ProjectivePoint& P, const HomogeneousForm& F, const mpz_class& p) {
    if (!is_probable_prime(p)) fail(errc::not_prime, "reduction_intersects: p is not prime");
    mpz_class v = evaluate_form(F, P);
    return mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t());
}

} // namespace zsig
