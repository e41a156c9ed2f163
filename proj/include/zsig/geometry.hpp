#ifndef ZSIG_GEOMETRY_HPP
#define ZSIG_GEOMETRY_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "zsig/error.hpp"

namespace zsig {

/// Point of P^N(Q) in normalized integer coordinates: not all zero,
/// gcd of coordinates 1, first nonzero coordinate positive.
class ProjectivePoint {
public:
    /// Normalizes a raw coordinate vector. Throws all_zero.
    static ProjectivePoint normalize(std::vector<mpz_class> raw);

    std::size_t num_coords() const { return coords_.size(); }
    int dim() const { return static_cast<int>(coords_.size()) - 1; }
    const mpz_class& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<mpz_class>& coords() const { return coords_; }

    bool operator==(const ProjectivePoint& o) const { return coords_ == o.coords_; }

private:
    explicit ProjectivePoint(std::vector<mpz_class> coords) : coords_(std::move(coords)) {}
    std::vector<mpz_class> coords_;
};

inline ProjectivePoint normalize(std::vector<mpz_class> raw) {
    return ProjectivePoint::normalize(std::move(raw));
}

/// Exponent vector of a monomial; entries sum to the form's degree.
using Monomial = std::vector<unsigned>;

/// Homogeneous polynomial in num_vars variables with integer coefficients,
/// stored primitive (content 1) with no zero terms.
class HomogeneousForm {
public:
    HomogeneousForm(int num_vars, std::map<Monomial, mpz_class> terms);

    /// Convenience: a linear form c0*x0 + ... + cN*xN.
    static HomogeneousForm linear(const std::vector<mpz_class>& coeffs);

    int num_vars() const { return num_vars_; }
    int degree() const { return degree_; }
    const std::map<Monomial, mpz_class>& terms() const { return terms_; }

    mpz_class evaluate(const std::vector<mpz_class>& coords) const;

    HomogeneousForm operator*(const HomogeneousForm& other) const;
    bool operator==(const HomogeneousForm& o) const {
        return num_vars_ == o.num_vars_ && terms_ == o.terms_;
    }

private:
    int num_vars_;
    int degree_;
    std::map<Monomial, mpz_class> terms_;
};

/// Self-map of P^N given by N+1 forms of common degree d >= 2 in N+1
/// variables. Common-factor freeness is checked at construction: exactly
/// (resultant) for N = 1, at pseudorandom points for N >= 2. A failed check
/// sets the base-locus warning rather than rejecting the forms; evaluation
/// at an actual common zero raises base_locus.
class Morphism {
public:
    explicit Morphism(std::vector<HomogeneousForm> forms);

    int dim() const { return static_cast<int>(forms_.size()) - 1; }
    int degree() const { return forms_[0].degree(); }
    const std::vector<HomogeneousForm>& forms() const { return forms_; }
    bool base_locus_warning() const { return base_locus_warning_; }

    bool operator==(const Morphism& o) const { return forms_ == o.forms_; }

private:
    std::vector<HomogeneousForm> forms_;
    bool base_locus_warning_ = false;
};

mpz_class evaluate_form(const HomogeneousForm& F, const ProjectivePoint& P);
ProjectivePoint apply_morphism(const Morphism& f, const ProjectivePoint& P);

/// Forward orbit of a start point with memoization. Concurrent orbit_point
/// calls are safe; each index is computed exactly once.
class OrbitCache {
public:
    OrbitCache(Morphism f, ProjectivePoint start, std::uint64_t digit_ceiling = 1'000'000);

    const Morphism& morphism() const { return f_; }
    const ProjectivePoint& start() const { return start_; }
    std::uint64_t digit_ceiling() const { return digit_ceiling_; }

    /// f^n(start); extends the cache as needed. Throws resource_limit when a
    /// coordinate exceeds the digit ceiling, base_locus from evaluation.
    const ProjectivePoint& point(std::size_t n);

    std::size_t computed() const;

    /// Replaces the cached prefix with externally stored points. points[0]
    /// must equal start; deeper consistency is the caller's contract.
    void seed(std::vector<ProjectivePoint> points);

    /// Snapshot of all computed points (index i = f^i(start)).
    std::vector<ProjectivePoint> snapshot() const;

private:
    Morphism f_;
    ProjectivePoint start_;
    std::uint64_t digit_ceiling_;
    mutable std::mutex mu_;
    std::deque<ProjectivePoint> points_;
};

inline const ProjectivePoint& orbit_point(OrbitCache& cache, std::size_t n) { return cache.point(n); }

struct ReducedDegree {
    int degree;  // degree of the squarefree part of (f^j)^* F
    bool exact;  // true when squarefreeness was decided exactly (N = 1)
};

/// Degree of the reduced (squarefree) part of F composed j times with f.
/// Throws resource_limit if deg(F) * d^j exceeds max_degree.
ReducedDegree reduced_pullback_degree(const Morphism& f, const HomogeneousForm& F, int j,
                                      int max_degree = 5000);

/// True iff the given linear forms are in general position: every subset of
/// size <= N+1 has full-rank coefficient matrix, so the union of hyperplanes
/// is a reduced normal-crossings divisor. Throws not_linear.
bool normal_crossings_linear_check(const std::vector<HomogeneousForm>& forms);

/// Stable text keys used for deterministic seeds and cache addressing.
std::string canonical_key(const HomogeneousForm& F);
std::string canonical_key(const Morphism& f);
std::string canonical_key(const ProjectivePoint& P);

} // namespace zsig

#endif
