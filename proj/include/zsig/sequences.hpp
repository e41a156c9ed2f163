#ifndef ZSIG_SEQUENCES_HPP
#define ZSIG_SEQUENCES_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "zsig/geometry.hpp"

namespace zsig {

// The six sequence families. Classical kinds index from n = 1, the
// orbit-valued kinds from n = 0.

struct PowerDiffSpec {
    mpz_class u, v; // u > v > 0, gcd(u, v) = 1
};

struct LucasSpec {
    mpz_class p, q; // p^2 - 4q != 0; a_1 = 1, a_2 = p, a_{n+1} = p a_n - q a_{n-1}
};

struct EdsSpec {
    mpz_class a1, a2, a3, a4; // a1 = 1, a2*a3 != 0, a2 | a4 (Ward integrality)
};

struct GcdGroupSpec {
    mpz_class u, v; // u, v >= 2; a_n = gcd(u^n - 1, v^n - 1)
};

struct DynValueSpec {
    Morphism f;
    HomogeneousForm form;
    ProjectivePoint start; // a_n = F(f^n(start))
};

struct WanderingNumeratorSpec {
    Morphism f;          // self-map of P^1
    mpq_class alpha;     // orbit start
    mpq_class beta;      // target; a_n = x_n * den(beta) - y_n * num(beta)
};

class SequenceSpec {
public:
    using Variant = std::variant<PowerDiffSpec, LucasSpec, EdsSpec, GcdGroupSpec, DynValueSpec,
                                 WanderingNumeratorSpec>;

    /// Validates the kind's invariants; throws invalid_spec.
    explicit SequenceSpec(Variant v);

    const Variant& value() const { return v_; }
    const char* kind() const;
    long first_index() const;

    template <class T> const T* get_if() const { return std::get_if<T>(&v_); }

private:
    Variant v_;
};

/// Memoized terms of one sequence. Concurrent term() calls are safe and each
/// index is computed exactly once.
class TermStream {
public:
    explicit TermStream(SequenceSpec spec, std::uint64_t digit_ceiling = 1'000'000);

    const SequenceSpec& spec() const { return spec_; }
    long first_index() const { return spec_.first_index(); }

    /// a_n. Throws index_out_of_range below the first index; non_integral if
    /// an EDS division fails; base_locus / resource_limit from orbits.
    mpz_class term(long n);

    /// Orbit backing the dynamical kinds (nullptr for classical kinds).
    OrbitCache* orbit() { return orbit_.get(); }

private:
    mpz_class compute(long n);
    mpz_class eds_term(long n);

    SequenceSpec spec_;
    std::mutex mu_;
    std::vector<mpz_class> terms_;            // terms_[i] = a_{first + i}
    std::map<long, mpz_class> eds_memo_;      // EDS duplication needs sparse indices
    std::unique_ptr<OrbitCache> orbit_;
    mpz_class pow_u_, pow_v_;                 // running powers for powerdiff / gcdgroup
    long pow_n_ = 0;
};

} // namespace zsig

#endif
