#ifndef ZSIG_PRIMDIV_HPP
#define ZSIG_PRIMDIV_HPP

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "zsig/arith.hpp"
#include "zsig/sequences.hpp"

namespace zsig {

/// Pairwise-coprime generators spanning the prime support of everything
/// inserted. Stripping against the basis is equivalent to stripping against
/// the full insertion history but touches O(distinct prime blocks) values.
class SupportBasis {
public:
    /// Adds the support of |t|; values 0 and +-1 contribute nothing.
    void insert(const mpz_class& t);

    /// Removes from c every prime shared with the basis, all multiplicity.
    mpz_class strip(mpz_class c) const;

    const std::vector<mpz_class>& generators() const { return gens_; }

private:
    std::vector<mpz_class> gens_;
};

/// |a| with every prime dividing a history term or an excluded prime fully
/// divided out. No factorization is involved. Throws zero_input.
mpz_class primitive_part(const mpz_class& a, const std::vector<mpz_class>& history,
                         const std::vector<mpz_class>& excluded = {});

/// Footnote rule: a == 0 has primitive divisors (fresh primes always exist);
/// |a| == 1 never does; otherwise primitive_part(a, ...) > 1 decides.
bool has_primitive_divisor(const mpz_class& a, const std::vector<mpz_class>& history,
                           const std::vector<mpz_class>& excluded = {});

struct TermRecord {
    long n = 0;
    mpz_class value;
    mpz_class primitive_part = 1; // c_n; 1 when value == 0
    bool has_primitive = false;
    double b_n = 0.0; // log c_n
    std::optional<std::vector<mpz_class>> primitive_primes; // set when factoring completed
};

struct ZsigmondyOptions {
    FactorBudget factor_budget{};
    std::size_t factor_digit_limit = 120; // attempt factoring c_n only below this size
    bool fill_primitive_primes = true;
    std::uint64_t digit_ceiling = 1'000'000; // orbit coordinate ceiling
};

struct ZsigmondyReport {
    SequenceSpec spec;
    long horizon = 0;
    std::vector<mpz_class> excluded_primes;
    std::vector<TermRecord> records;
    std::vector<long> zsigmondy_set; // indices with no primitive divisor
    bool truncated = false;          // a ResourceLimit stopped generation early
    long truncated_at = -1;
    /// max over horizon/2 < n <= horizon, a_n != 0 of log|a_n| / n.
    std::optional<double> tail_log_ratio;
};

/// Computes TermRecords up to n_max with an incrementally maintained
/// nonzero-term history. Excluded primes model inverting finitely many
/// primes in the base ring.
ZsigmondyReport zsigmondy_set(const SequenceSpec& spec, long n_max,
                              const std::vector<mpz_class>& excluded = {},
                              const ZsigmondyOptions& options = {});

/// Same computation over an existing stream (shares its orbit cache).
ZsigmondyReport zsigmondy_run(TermStream& stream, long n_max,
                              const std::vector<mpz_class>& excluded = {},
                              const ZsigmondyOptions& options = {});

/// b_n = log(primitive part of a_n). Throws zero_term if a_n = 0,
/// index_out_of_range past the horizon.
double b_statistic(const ZsigmondyReport& report, long n);

/// True iff the reduction of P mod p lies on the reduction of {F = 0},
/// i.e. p | F(P) in normalized coordinates. Throws not_prime.
bool reduction_intersects(const ProjectivePoint& P, const HomogeneousForm& F, const mpz_class& p);

} // namespace zsig

#endif
