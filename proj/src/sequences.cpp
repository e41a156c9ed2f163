#include "zsig/sequences.hpp"

#include "zsig/util.hpp"

namespace zsig {

namespace {

void validate(const PowerDiffSpec& s) {
    if (!(s.u > s.v && s.v > 0)) fail(errc::invalid_spec, "powerdiff: need u > v > 0");
    if (gcd(s.u, s.v) != 1) fail(errc::invalid_spec, "powerdiff: u and v must be coprime");
}

void validate(const LucasSpec& s) {
    if (s.p * s.p - 4 * s.q == 0) fail(errc::invalid_spec, "lucas: discriminant must be nonzero");
}

void validate(const EdsSpec& s) {
    if (s.a1 != 1) fail(errc::invalid_spec, "eds: a1 must be 1");
    if (sgn(s.a2) == 0 || sgn(s.a3) == 0) fail(errc::invalid_spec, "eds: a2 and a3 must be nonzero");
    if (!mpz_divisible_p(s.a4.get_mpz_t(), s.a2.get_mpz_t()))
        fail(errc::invalid_spec, "eds: a2 must divide a4");
}

void validate(const GcdGroupSpec& s) {
    if (s.u < 2 || s.v < 2) fail(errc::invalid_spec, "gcdgroup: need u, v >= 2");
}

void validate(const DynValueSpec& s) {
    if (s.form.num_vars() != s.f.dim() + 1 ||
        static_cast<int>(s.start.num_coords()) != s.f.dim() + 1)
        fail(errc::invalid_spec, "dynvalue: morphism, form and point dimensions differ");
}

void validate(const WanderingNumeratorSpec& s) {
    if (s.f.dim() != 1) fail(errc::invalid_spec, "wandering: morphism must act on P^1");
}

} // namespace

SequenceSpec::SequenceSpec(Variant v) : v_(std::move(v)) {
    std::visit([](const auto& s) { validate(s); }, v_);
}

const char* SequenceSpec::kind() const {
    switch (v_.index()) {
        case 0: return "powerdiff";
        case 1: return "lucas";
        case 2: return "eds";
        case 3: return "gcdgroup";
        case 4: return "dynvalue";
        default: return "wandering";
    }
}

long SequenceSpec::first_index() const {
    return v_.index() <= 3 ? 1 : 0;
}

TermStream::TermStream(SequenceSpec spec, std::uint64_t digit_ceiling)
    : spec_(std::move(spec)), pow_u_(1), pow_v_(1) {
    if (const auto* s = spec_.get_if<DynValueSpec>()) {
        orbit_ = std::make_unique<OrbitCache>(s->f, s->start, digit_ceiling);
    } else if (const auto* s = spec_.get_if<WanderingNumeratorSpec>()) {
        mpq_class a = s->alpha;
        a.canonicalize();
        ProjectivePoint start = normalize({a.get_num(), a.get_den()});
        orbit_ = std::make_unique<OrbitCache>(s->f, start, digit_ceiling);
    } else if (const auto* s = spec_.get_if<EdsSpec>()) {
        eds_memo_[0] = 0;
        eds_memo_[1] = s->a1;
        eds_memo_[2] = s->a2;
        eds_memo_[3] = s->a3;
        eds_memo_[4] = s->a4;
    }
}

mpz_class TermStream::term(long n) {
    if (n < first_index())
        fail(errc::index_out_of_range, "term: index " + std::to_string(n) + " below first index");
    std::lock_guard<std::mutex> lock(mu_);
    const std::size_t i = static_cast<std::size_t>(n - first_index());
    while (terms_.size() <= i) terms_.push_back(compute(first_index() + static_cast<long>(terms_.size())));
    return terms_[i];
}

mpz_class TermStream::compute(long n) {
    if (const auto* s = spec_.get_if<PowerDiffSpec>()) {
        while (pow_n_ < n) {
            pow_u_ *= s->u;
            pow_v_ *= s->v;
            ++pow_n_;
        }
        return pow_u_ - pow_v_;
    }
    if (const auto* s = spec_.get_if<LucasSpec>()) {
        if (n == 1) return 1;
        if (n == 2) return s->p;
        return s->p * terms_[n - 2] - s->q * terms_[n - 3];
    }
    if (spec_.get_if<EdsSpec>()) return eds_term(n);
    if (const auto* s = spec_.get_if<GcdGroupSpec>()) {
        while (pow_n_ < n) {
            pow_u_ *= s->u;
            pow_v_ *= s->v;
            ++pow_n_;
        }
        return gcd(pow_u_ - 1, pow_v_ - 1);
    }
    if (const auto* s = spec_.get_if<DynValueSpec>()) {
        return s->form.evaluate(orbit_->point(static_cast<std::size_t>(n)).coords());
    }
    const auto* s = spec_.get_if<WanderingNumeratorSpec>();
    mpq_class b = s->beta;
    b.canonicalize();
    const ProjectivePoint& pt = orbit_->point(static_cast<std::size_t>(n));
    return pt[0] * b.get_den() - pt[1] * b.get_num();
}

// Ward duplication: a_{2m+1} = a_{m+2} a_m^3 - a_{m+1}^3 a_{m-1},
//                   a_{2m} a_2 = a_m (a_{m+2} a_{m-1}^2 - a_{m-2} a_{m+1}^2).
mpz_class TermStream::eds_term(long n) {
    auto it = eds_memo_.find(n);
    if (it != eds_memo_.end()) return it->second;
    mpz_class r;
    if (n % 2 == 1) {
        const long m = n / 2; // n = 2m+1, m >= 2
        mpz_class am = eds_term(m), am1 = eds_term(m + 1);
        r = eds_term(m + 2) * am * am * am - am1 * am1 * am1 * eds_term(m - 1);
    } else {
        const long m = n / 2; // n = 2m, m >= 3
        mpz_class am_1 = eds_term(m - 1), am1 = eds_term(m + 1);
        mpz_class num = eds_term(m) * (eds_term(m + 2) * am_1 * am_1 - eds_term(m - 2) * am1 * am1);
        const mpz_class& a2 = eds_memo_.at(2);
        mpz_class q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), a2.get_mpz_t());
        if (sgn(rem) != 0)
            fail(errc::non_integral, "eds: division by a_2 not exact at index " + std::to_string(n));
        r = q;
    }
    eds_memo_.emplace(n, r);
    return r;
}

} // namespace zsig
