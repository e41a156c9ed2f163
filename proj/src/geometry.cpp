#include "zsig/geometry.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "zsig/util.hpp"

namespace zsig {

// ---------------------------------------------------------------------------
// ProjectivePoint

ProjectivePoint ProjectivePoint::normalize(std::vector<mpz_class> raw) {
    if (raw.empty()) fail(errc::all_zero, "normalize: empty coordinate vector");
    mpz_class g = 0;
    for (const auto& c : raw) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) fail(errc::all_zero, "normalize: all coordinates are zero");
    for (auto& c : raw) c /= g;
    for (const auto& c : raw) {
        if (sgn(c) != 0) {
            if (sgn(c) < 0)
                for (auto& x : raw) x = -x;
            break;
        }
    }
    return ProjectivePoint(std::move(raw));
}

// ---------------------------------------------------------------------------
// HomogeneousForm

HomogeneousForm::HomogeneousForm(int num_vars, std::map<Monomial, mpz_class> terms)
    : num_vars_(num_vars), degree_(0), terms_(std::move(terms)) {
    if (num_vars_ < 1) fail(errc::invalid_spec, "form: need at least one variable");
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (sgn(it->second) == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
    if (terms_.empty()) fail(errc::invalid_spec, "form: zero polynomial");
    bool first = true;
    for (const auto& [exps, coef] : terms_) {
        if (static_cast<int>(exps.size()) != num_vars_)
            fail(errc::invalid_spec, "form: exponent vector length != num_vars");
        long sum = 0;
        for (unsigned e : exps) sum += e;
        if (first) {
            degree_ = static_cast<int>(sum);
            first = false;
        } else if (sum != degree_) {
            fail(errc::invalid_spec, "form: mixed-degree terms");
        }
    }
    if (degree_ < 1) fail(errc::invalid_spec, "form: degree must be at least 1");
    mpz_class content = 0;
    for (const auto& [exps, coef] : terms_) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), coef.get_mpz_t());
    if (content > 1)
        for (auto& [exps, coef] : terms_) coef /= content;
}

HomogeneousForm HomogeneousForm::linear(const std::vector<mpz_class>& coeffs) {
    std::map<Monomial, mpz_class> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (sgn(coeffs[i]) == 0) continue;
        Monomial m(coeffs.size(), 0);
        m[i] = 1;
        terms.emplace(std::move(m), coeffs[i]);
    }
    return HomogeneousForm(static_cast<int>(coeffs.size()), std::move(terms));
}

mpz_class HomogeneousForm::evaluate(const std::vector<mpz_class>& coords) const {
    if (static_cast<int>(coords.size()) != num_vars_)
        fail(errc::dimension_mismatch, "evaluate: point has wrong number of coordinates");
    std::vector<std::vector<mpz_class>> pw(num_vars_);
    for (int i = 0; i < num_vars_; ++i) pw[i].push_back(1);
    const auto power = [&](int i, unsigned e) -> const mpz_class& {
        auto& v = pw[i];
        while (v.size() <= e) v.push_back(v.back() * coords[i]);
        return v[e];
    };
    mpz_class acc = 0, term;
    for (const auto& [exps, coef] : terms_) {
        term = coef;
        for (int i = 0; i < num_vars_; ++i)
            if (exps[i] > 0) term *= power(i, exps[i]);
        acc += term;
    }
    return acc;
}

namespace {

using TermMap = std::map<Monomial, mpz_class>;

TermMap map_mul(const TermMap& a, const TermMap& b, int num_vars) {
    TermMap out;
    Monomial m(num_vars);
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            for (int i = 0; i < num_vars; ++i) m[i] = ea[i] + eb[i];
            auto [it, inserted] = out.try_emplace(m, 0);
            it->second += ca * cb;
            if (sgn(it->second) == 0) out.erase(it);
        }
    return out;
}

} // namespace

HomogeneousForm HomogeneousForm::operator*(const HomogeneousForm& other) const {
    if (num_vars_ != other.num_vars_) fail(errc::dimension_mismatch, "form product: variable counts differ");
    return HomogeneousForm(num_vars_, map_mul(terms_, other.terms_, num_vars_));
}

std::string canonical_key(const HomogeneousForm& F) {
    std::ostringstream os;
    os << F.num_vars() << '/' << F.degree();
    for (const auto& [exps, coef] : F.terms()) {
        os << '|';
        for (unsigned e : exps) os << e << ',';
        os << ':' << coef.get_str();
    }
    return os.str();
}

std::string canonical_key(const Morphism& f) {
    std::string s = "morphism";
    for (const auto& F : f.forms()) {
        s += ';';
        s += canonical_key(F);
    }
    return s;
}

std::string canonical_key(const ProjectivePoint& P) {
    std::string s = "point";
    for (const auto& c : P.coords()) {
        s += ';';
        s += c.get_str();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Exact helpers: fraction-free rank, univariate gcd, binary forms

namespace {

int mpz_rank(std::vector<std::vector<mpz_class>> m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    mpz_class prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (sgn(m[i][col]) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

using Poly = std::vector<mpz_class>; // coeff of x^i; normalized: no trailing zeros

void poly_trim(Poly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; } // -1 for zero

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(mpz_class(static_cast<long>(i)) * p[i]);
    poly_trim(d);
    return d;
}

Poly poly_primitive(Poly p) {
    poly_trim(p);
    if (p.empty()) return p;
    mpz_class content = 0;
    for (const auto& c : p) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content > 1)
        for (auto& c : p) c /= content;
    if (sgn(p.back()) < 0)
        for (auto& c : p) c = -c;
    return p;
}

// Pseudo-remainder of a by b (b nonzero).
Poly poly_prem(Poly a, const Poly& b) {
    const mpz_class& lb = b.back();
    while (poly_deg(a) >= poly_deg(b) && !a.empty()) {
        const int shift = poly_deg(a) - poly_deg(b);
        mpz_class la = a.back();
        for (auto& c : a) c *= lb;
        for (int i = 0; i <= poly_deg(b); ++i) a[i + shift] -= la * b[i];
        poly_trim(a);
    }
    return a;
}

// Primitive PRS gcd; result is primitive with positive leading coefficient.
Poly poly_gcd(Poly a, Poly b) {
    a = poly_primitive(std::move(a));
    b = poly_primitive(std::move(b));
    if (poly_deg(a) < poly_deg(b)) std::swap(a, b);
    while (!b.empty()) {
        Poly r = poly_prem(a, b);
        a = std::move(b);
        b = poly_primitive(std::move(r));
    }
    return a;
}

// A binary form densely: c[k] = coeff of s^k t^(m-k), plus its exact s- and
// t-monomial valuations and the dehomogenized middle part.
struct BinaryForm {
    int s_val = 0;
    int t_val = 0;
    Poly middle; // middle(0) != 0, lc != 0 when nonzero

    static BinaryForm from_dense(const std::vector<mpz_class>& c) {
        const int m = static_cast<int>(c.size()) - 1;
        int lo = 0;
        while (sgn(c[lo]) == 0) ++lo;
        int hi = m;
        while (sgn(c[hi]) == 0) --hi;
        BinaryForm out;
        out.s_val = lo;
        out.t_val = m - hi;
        out.middle.assign(c.begin() + lo, c.begin() + hi + 1);
        return out;
    }

    int degree() const { return s_val + t_val + poly_deg(middle); }
};

// Degree of the squarefree part of a nonzero binary form.
int squarefree_degree_dense(const std::vector<mpz_class>& c) {
    BinaryForm f = BinaryForm::from_dense(c);
    const int extra = (f.s_val > 0 ? 1 : 0) + (f.t_val > 0 ? 1 : 0);
    if (poly_deg(f.middle) == 0) return extra;
    Poly g = poly_gcd(f.middle, poly_derivative(f.middle));
    return extra + poly_deg(f.middle) - poly_deg(g);
}

// Degree of the gcd of two binary forms (0 = coprime).
int binary_common_degree(const BinaryForm& a, const BinaryForm& b) {
    Poly g = poly_gcd(a.middle, b.middle);
    return std::min(a.s_val, b.s_val) + std::min(a.t_val, b.t_val) + poly_deg(g);
}

std::vector<mpz_class> binary_coeffs(const HomogeneousForm& F) {
    std::vector<mpz_class> c(F.degree() + 1, 0);
    for (const auto& [exps, coef] : F.terms()) c[exps[0]] = coef;
    return c;
}

// Restriction of F to the line x_i = a_i s + b_i t; empty result means the
// restriction is identically zero.
std::vector<mpz_class> restrict_to_line(const HomogeneousForm& F, const std::vector<long>& a,
                                        const std::vector<long>& b) {
    const int nv = F.num_vars();
    const int m = F.degree();
    std::vector<mpz_class> acc(m + 1, 0);
    for (const auto& [exps, coef] : F.terms()) {
        std::vector<mpz_class> prod{coef};
        for (int i = 0; i < nv; ++i) {
            for (unsigned e = 0; e < exps[i]; ++e) {
                std::vector<mpz_class> next(prod.size() + 1, 0);
                for (std::size_t k = 0; k < prod.size(); ++k) {
                    next[k + 1] += prod[k] * a[i]; // times a_i * s
                    next[k] += prod[k] * b[i];     // times b_i * t
                }
                prod = std::move(next);
            }
        }
        for (std::size_t k = 0; k < prod.size(); ++k) acc[k] += prod[k];
    }
    bool nonzero = false;
    for (const auto& x : acc)
        if (sgn(x) != 0) nonzero = true;
    if (!nonzero) acc.clear();
    return acc;
}

void draw_line(std::mt19937_64& gen, int nv, std::vector<long>& a, std::vector<long>& b) {
    a.resize(nv);
    b.resize(nv);
    for (int i = 0; i < nv; ++i) {
        a[i] = draw_range(gen, -9, 9);
        b[i] = draw_range(gen, -9, 9);
    }
}

// Resultant of two degree-d binary forms vanishes iff they share a
// projective root; rank of the Sylvester matrix decides that exactly.
bool binary_forms_coprime(const HomogeneousForm& A, const HomogeneousForm& B) {
    const int d = A.degree();
    auto a = binary_coeffs(A), b = binary_coeffs(B);
    const int n = 2 * d;
    std::vector<std::vector<mpz_class>> syl(n, std::vector<mpz_class>(n, 0));
    for (int r = 0; r < d; ++r)
        for (int k = 0; k <= d; ++k) {
            syl[r][r + k] = a[d - k];
            syl[d + r][r + k] = b[d - k];
        }
    return mpz_rank(std::move(syl)) == n;
}

// Restrict all forms to a pseudorandom line and intersect their root sets by
// exact binary gcds. A common root on the line is an actual base point, so a
// positive answer is never a false alarm; a codimension-1 base locus meets
// every line, so common factors are caught with overwhelming probability.
bool line_check_finds_base_point(const std::vector<HomogeneousForm>& forms, std::mt19937_64& gen) {
    const int nv = forms[0].num_vars();
    std::vector<long> a, b;
    for (int attempt = 0; attempt < 4; ++attempt) {
        draw_line(gen, nv, a, b);
        BinaryForm common;
        bool degenerate = false, first = true, coprime = false;
        for (const auto& F : forms) {
            auto dense = restrict_to_line(F, a, b);
            if (dense.empty()) {
                degenerate = true;
                break;
            }
            BinaryForm bf = BinaryForm::from_dense(dense);
            if (first) {
                common = std::move(bf);
                first = false;
            } else {
                Poly g = poly_gcd(common.middle, bf.middle);
                common.s_val = std::min(common.s_val, bf.s_val);
                common.t_val = std::min(common.t_val, bf.t_val);
                common.middle = std::move(g);
            }
            if (common.degree() == 0) {
                coprime = true;
                break;
            }
        }
        if (degenerate) continue;
        return !coprime && common.degree() > 0;
    }
    return false; // every line degenerated; give the forms the benefit of the doubt
}

} // namespace

// ---------------------------------------------------------------------------
// Morphism

Morphism::Morphism(std::vector<HomogeneousForm> forms) : forms_(std::move(forms)) {
    if (forms_.size() < 2) fail(errc::invalid_spec, "morphism: need at least two forms");
    const int nv = forms_[0].num_vars();
    const int d = forms_[0].degree();
    if (nv != static_cast<int>(forms_.size()))
        fail(errc::invalid_spec, "morphism: need exactly num_vars forms");
    for (const auto& F : forms_) {
        if (F.num_vars() != nv) fail(errc::invalid_spec, "morphism: mixed variable counts");
        if (F.degree() != d) fail(errc::invalid_spec, "morphism: mixed degrees");
    }
    if (d < 2) fail(errc::invalid_spec, "morphism: degree must be at least 2");

    if (dim() == 1) {
        base_locus_warning_ = !binary_forms_coprime(forms_[0], forms_[1]);
    } else {
        std::mt19937_64 gen(fnv1a64(canonical_key(*this)));
        base_locus_warning_ = line_check_finds_base_point(forms_, gen);
    }
}

mpz_class evaluate_form(const HomogeneousForm& F, const ProjectivePoint& P) {
    return F.evaluate(P.coords());
}

ProjectivePoint apply_morphism(const Morphism& f, const ProjectivePoint& P) {
    if (f.dim() + 1 != static_cast<int>(P.num_coords()))
        fail(errc::dimension_mismatch, "apply_morphism: dimensions differ");
    std::vector<mpz_class> image;
    image.reserve(f.forms().size());
    bool all_zero = true;
    for (const auto& F : f.forms()) {
        image.push_back(F.evaluate(P.coords()));
        if (sgn(image.back()) != 0) all_zero = false;
    }
    if (all_zero)
        fail(errc::base_locus, "apply_morphism: all forms vanish; point lies on the base locus");
    return ProjectivePoint::normalize(std::move(image));
}

// ---------------------------------------------------------------------------
// OrbitCache

OrbitCache::OrbitCache(Morphism f, ProjectivePoint start, std::uint64_t digit_ceiling)
    : f_(std::move(f)), start_(std::move(start)), digit_ceiling_(digit_ceiling) {
    if (f_.dim() + 1 != static_cast<int>(start_.num_coords()))
        fail(errc::dimension_mismatch, "orbit: start point dimension differs from morphism");
    points_.push_back(start_);
}

const ProjectivePoint& OrbitCache::point(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    while (points_.size() <= n) {
        ProjectivePoint next = apply_morphism(f_, points_.back());
        for (const auto& c : next.coords())
            if (digit_estimate(c) > digit_ceiling_)
                fail(errc::resource_limit,
                     "orbit: coordinate exceeds digit ceiling at index " + std::to_string(points_.size()));
        points_.push_back(std::move(next));
    }
    return points_[n];
}

std::size_t OrbitCache::computed() const {
    std::lock_guard<std::mutex> lock(mu_);
    return points_.size();
}

void OrbitCache::seed(std::vector<ProjectivePoint> points) {
    if (points.empty()) return;
    if (!(points[0] == start_)) fail(errc::invalid_spec, "orbit seed: first point differs from start");
    std::lock_guard<std::mutex> lock(mu_);
    if (points.size() <= points_.size()) return;
    points_.assign(points.begin(), points.end());
}

std::vector<ProjectivePoint> OrbitCache::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {points_.begin(), points_.end()};
}

// ---------------------------------------------------------------------------
// Reduced pullbacks and normal crossings

namespace {

HomogeneousForm compose_once(const HomogeneousForm& F, const Morphism& f) {
    const int nv = F.num_vars();
    // Cache powers of each coordinate form up to the largest exponent used.
    std::vector<unsigned> max_exp(nv, 0);
    for (const auto& [exps, coef] : F.terms())
        for (int i = 0; i < nv; ++i) max_exp[i] = std::max(max_exp[i], exps[i]);
    const Monomial unit(nv, 0);
    std::vector<std::vector<TermMap>> pows(nv);
    for (int i = 0; i < nv; ++i) {
        pows[i].push_back({{unit, 1}});
        const TermMap& base = f.forms()[i].terms();
        for (unsigned e = 1; e <= max_exp[i]; ++e) pows[i].push_back(map_mul(pows[i][e - 1], base, nv));
    }
    TermMap acc;
    for (const auto& [exps, coef] : F.terms()) {
        TermMap prod{{unit, coef}};
        for (int i = 0; i < nv; ++i)
            if (exps[i] > 0) prod = map_mul(prod, pows[i][exps[i]], nv);
        for (auto& [mono, c] : prod) {
            auto [it, inserted] = acc.try_emplace(mono, 0);
            it->second += c;
            if (sgn(it->second) == 0) acc.erase(it);
        }
    }
    return HomogeneousForm(nv, std::move(acc));
}

} // namespace

ReducedDegree reduced_pullback_degree(const Morphism& f, const HomogeneousForm& F, int j,
                                      int max_degree) {
    if (F.num_vars() != f.dim() + 1)
        fail(errc::dimension_mismatch, "reduced_pullback_degree: dimensions differ");
    if (j < 0) fail(errc::invalid_spec, "reduced_pullback_degree: j must be non-negative");
    long long composed_degree = F.degree();
    for (int i = 0; i < j; ++i) {
        composed_degree *= f.degree();
        if (composed_degree > max_degree)
            fail(errc::resource_limit, "reduced_pullback_degree: composed degree exceeds bound");
    }
    HomogeneousForm G = F;
    for (int i = 0; i < j; ++i) G = compose_once(G, f);

    if (G.num_vars() == 2) return {squarefree_degree_dense(binary_coeffs(G)), true};

    // One-sided probabilistic test by restriction to a pseudorandom line.
    std::mt19937_64 gen(fnv1a64(canonical_key(G)));
    std::vector<long> a, b;
    for (int attempt = 0; attempt < 8; ++attempt) {
        draw_line(gen, G.num_vars(), a, b);
        auto dense = restrict_to_line(G, a, b);
        if (dense.empty()) continue;
        return {squarefree_degree_dense(dense), false};
    }
    fail(errc::resource_limit, "reduced_pullback_degree: all line restrictions degenerated");
}

bool normal_crossings_linear_check(const std::vector<HomogeneousForm>& forms) {
    if (forms.empty()) return true;
    const int nv = forms[0].num_vars();
    std::vector<std::vector<mpz_class>> rows;
    rows.reserve(forms.size());
    for (const auto& F : forms) {
        if (F.num_vars() != nv)
            fail(errc::dimension_mismatch, "normal_crossings: mixed variable counts");
        if (F.degree() != 1) fail(errc::not_linear, "normal_crossings: form of degree > 1");
        std::vector<mpz_class> row(nv, 0);
        for (const auto& [exps, coef] : F.terms())
            for (int i = 0; i < nv; ++i)
                if (exps[i] == 1) row[i] = coef;
        rows.push_back(std::move(row));
    }
    const int r = static_cast<int>(rows.size());
    if (r <= nv) return mpz_rank(rows) == r;
    // r > N+1: every (N+1)-subset must be a basis; smaller subsets follow.
    std::vector<int> idx(nv);
    for (int i = 0; i < nv; ++i) idx[i] = i;
    while (true) {
        std::vector<std::vector<mpz_class>> sub;
        sub.reserve(nv);
        for (int i : idx) sub.push_back(rows[i]);
        if (mpz_rank(std::move(sub)) < nv) return false;
        int k = nv - 1;
        while (k >= 0 && idx[k] == r - nv + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int i = k + 1; i < nv; ++i) idx[i] = idx[i - 1] + 1;
    }
    return true;
}

} // namespace zsig
