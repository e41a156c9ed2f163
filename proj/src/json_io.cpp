#include "zsig/json_io.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "zsig/util.hpp"

namespace zsig {

using nlohmann::json;

namespace {

mpz_class mpz_from(const json& j, const char* what) {
    try {
        if (j.is_string()) return mpz_class(j.get<std::string>());
        if (j.is_number_integer()) return mpz_class(j.get<long>());
    } catch (const std::invalid_argument&) {
    }
    fail(errc::parse_error, std::string("expected integer for ") + what);
}

std::string trimmed(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

} // namespace

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const HomogeneousForm& F) {
    json terms = json::array();
    for (const auto& [exps, coef] : F.terms()) {
        json t;
        t["exps"] = exps;
        t["coef"] = coef.get_str();
        terms.push_back(std::move(t));
    }
    return json{{"num_vars", F.num_vars()}, {"terms", std::move(terms)}};
}

nlohmann::json to_json(const Morphism& f) {
    json forms = json::array();
    for (const auto& F : f.forms()) forms.push_back(to_json(F));
    return json{{"forms", std::move(forms)}};
}

nlohmann::json to_json(const ProjectivePoint& P) {
    json coords = json::array();
    for (const auto& c : P.coords()) coords.push_back(c.get_str());
    return coords;
}

nlohmann::json to_json(const SequenceSpec& spec) {
    json params;
    if (const auto* s = spec.get_if<PowerDiffSpec>()) {
        params["u"] = s->u.get_str();
        params["v"] = s->v.get_str();
    } else if (const auto* s = spec.get_if<LucasSpec>()) {
        params["p"] = s->p.get_str();
        params["q"] = s->q.get_str();
    } else if (const auto* s = spec.get_if<EdsSpec>()) {
        params["a1"] = s->a1.get_str();
        params["a2"] = s->a2.get_str();
        params["a3"] = s->a3.get_str();
        params["a4"] = s->a4.get_str();
    } else if (const auto* s = spec.get_if<GcdGroupSpec>()) {
        params["u"] = s->u.get_str();
        params["v"] = s->v.get_str();
    } else if (const auto* s = spec.get_if<DynValueSpec>()) {
        params["morphism"] = to_json(s->f);
        params["form"] = to_json(s->form);
        params["start"] = to_json(s->start);
    } else if (const auto* s = spec.get_if<WanderingNumeratorSpec>()) {
        params["morphism"] = to_json(s->f);
        params["alpha"] = s->alpha.get_str();
        params["beta"] = s->beta.get_str();
    }
    return json{{"kind", spec.kind()}, {"params", std::move(params)}};
}

nlohmann::json to_json(const TermRecord& record) {
    json j;
    j["n"] = record.n;
    j["value"] = record.value.get_str();
    j["digits"] = digit_count(record.value);
    j["primitive_part"] = record.primitive_part.get_str();
    j["c_n_digits"] = digit_count(record.primitive_part);
    j["has_primitive"] = record.has_primitive;
    j["b_n"] = format_real(record.b_n);
    if (record.primitive_primes) {
        json primes = json::array();
        for (const auto& p : *record.primitive_primes) primes.push_back(p.get_str());
        j["primitive_primes"] = std::move(primes);
    }
    return j;
}

nlohmann::json to_json(const ZsigmondyReport& report) {
    json j;
    j["spec"] = to_json(report.spec);
    j["horizon"] = report.horizon;
    json excluded = json::array();
    for (const auto& p : report.excluded_primes) excluded.push_back(p.get_str());
    j["excluded_primes"] = std::move(excluded);
    j["truncated"] = report.truncated;
    if (report.truncated) j["truncated_at"] = report.truncated_at;
    if (report.tail_log_ratio) j["tail_log_ratio"] = format_real(*report.tail_log_ratio);
    json records = json::array();
    for (const auto& r : report.records) records.push_back(to_json(r));
    j["records"] = std::move(records);
    j["zsigmondy"] = report.zsigmondy_set;
    return j;
}

std::string to_csv(const ZsigmondyReport& report) {
    std::ostringstream os;
    os << "n,digits,c_n_digits,has_primitive,b_n\n";
    for (const auto& r : report.records) {
        os << r.n << ',' << digit_count(r.value) << ',' << digit_count(r.primitive_part) << ','
           << (r.has_primitive ? "true" : "false") << ',' << format_real(r.b_n) << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const HeightEstimate& estimate) {
    json values = json::array();
    for (const auto& [n, v] : estimate.values)
        values.push_back(json{{"n", n}, {"value", format_real(v)}});
    return json{{"values", std::move(values)},
                {"final_estimate", format_real(estimate.final_estimate)},
                {"cauchy_bound", format_real(estimate.cauchy_bound)}};
}

nlohmann::json to_json(const ThresholdVerdict& verdict) {
    return json{{"which", threshold_kind_name(verdict.which)},
                {"satisfied", verdict.satisfied},
                {"lhs", verdict.lhs.get_str()},
                {"rhs", verdict.rhs.get_str()}};
}

nlohmann::json to_json(const ExperimentConfig& config) {
    json j;
    j["spec"] = to_json(config.spec);
    j["horizon"] = config.horizon;
    json excluded = json::array();
    for (const auto& p : config.excluded) excluded.push_back(p.get_str());
    j["excluded_primes"] = std::move(excluded);
    j["j"] = config.j;
    j["digit_ceiling"] = config.zsig_options.digit_ceiling;
    j["factor"] = json{{"trial_bound", config.zsig_options.factor_budget.trial_bound},
                       {"rho_iterations", config.zsig_options.factor_budget.rho_iterations},
                       {"digit_limit", config.zsig_options.factor_digit_limit}};
    j["max_pullback_degree"] = config.max_pullback_degree;
    if (config.linear_factors) {
        json arr = json::array();
        for (const auto& F : *config.linear_factors) arr.push_back(to_json(F));
        j["linear_factors"] = std::move(arr);
    }
    return j;
}

nlohmann::json to_json(const ExperimentReport& report) {
    json j;
    j["config"] = to_json(report.config);
    json verdicts = json::array();
    for (const auto& v : report.verdicts) verdicts.push_back(to_json(v));
    j["verdicts"] = std::move(verdicts);
    j["zsigmondy"] = report.zsig.zsigmondy_set;
    json terms = json::array();
    for (const auto& r : report.zsig.records)
        terms.push_back(json{{"n", r.n},
                             {"digits", digit_count(r.value)},
                             {"b_n", format_real(r.b_n)},
                             {"has_primitive", r.has_primitive}});
    j["terms"] = std::move(terms);
    j["height"] = to_json(report.height);
    json ratios = json::array();
    for (const auto& r : report.ratios)
        ratios.push_back(json{{"n", r.n}, {"value", format_real(r.b_over_dn)}});
    j["ratios"] = std::move(ratios);
    if (report.kappa_hat) j["kappa_hat"] = format_real(*report.kappa_hat);
    if (report.normal_crossings) j["normal_crossings"] = *report.normal_crossings;
    if (report.threshold_note) j["threshold_note"] = *report.threshold_note;
    if (report.delta_j)
        j["delta_j"] = json{{"degree", report.delta_j->degree}, {"exact", report.delta_j->exact}};
    if (report.min_j) j["min_j"] = *report.min_j;
    j["truncated"] = report.zsig.truncated;
    if (report.zsig.tail_log_ratio) j["tail_log_ratio"] = format_real(*report.zsig.tail_log_ratio);
    return j;
}

// ---------------------------------------------------------------------------
// Polynomial text parser

namespace {

struct PolyParser {
    std::string_view s;
    std::size_t pos = 0;
    int num_vars;

    using Map = std::map<Monomial, mpz_class>;

    explicit PolyParser(std::string_view text, int nv) : s(text), num_vars(nv) {}

    [[noreturn]] void err(const std::string& msg) const {
        fail(errc::parse_error, "polynomial: " + msg + " at position " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    static Map add(Map a, const Map& b) {
        for (const auto& [m, c] : b) {
            auto [it, inserted] = a.try_emplace(m, 0);
            it->second += c;
            if (sgn(it->second) == 0) a.erase(it);
        }
        return a;
    }

    Map mul(const Map& a, const Map& b) const {
        Map out;
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

    Map pow(Map base, unsigned long e) const {
        Map acc{{Monomial(num_vars, 0), 1}};
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            e >>= 1;
            if (e > 0) base = mul(base, base);
        }
        return acc;
    }

    unsigned long parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) err("expected a number");
        unsigned long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<unsigned long>(s[pos] - '0');
            if (v > 1'000'000) err("exponent or literal too large");
            ++pos;
        }
        return v;
    }

    mpz_class parse_bigint() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) err("expected a number");
        return mpz_class(std::string(s.substr(start, pos - start)));
    }

    int parse_var() {
        skip_ws();
        char c = s[pos];
        int idx = -1;
        if (c == 'x' || c == 'X') idx = 0;
        else if (c == 'y' || c == 'Y') idx = 1;
        else if (c == 'z' || c == 'Z') idx = 2;
        else if (c == 'w' || c == 'W') idx = 3;
        else err("expected a variable");
        ++pos;
        if ((c == 'x' || c == 'X') && pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            idx = static_cast<int>(parse_uint()); // x0, x1, ...
        }
        if (idx >= num_vars) err("variable index out of range");
        return idx;
    }

    bool starts_factor() {
        char c = peek();
        return c == '(' || std::isdigit(static_cast<unsigned char>(c)) ||
               std::isalpha(static_cast<unsigned char>(c));
    }

    Map parse_atom() {
        skip_ws();
        if (eat('(')) {
            Map inner = parse_expr();
            if (!eat(')')) err("missing ')'");
            return inner;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return Map{{Monomial(num_vars, 0), parse_bigint()}};
        }
        int v = parse_var();
        Monomial m(num_vars, 0);
        m[v] = 1;
        return Map{{std::move(m), 1}};
    }

    Map parse_factor() {
        Map a = parse_atom();
        if (eat('^')) a = pow(std::move(a), parse_uint());
        return a;
    }

    Map parse_term() {
        Map acc = parse_factor();
        while (true) {
            if (eat('*')) {
                acc = mul(acc, parse_factor());
            } else if (starts_factor()) {
                acc = mul(acc, parse_factor()); // juxtaposition, e.g. 2x or x y
            } else {
                break;
            }
        }
        return acc;
    }

    Map parse_expr() {
        Map acc;
        bool negative = false;
        if (eat('-')) negative = true;
        else eat('+');
        Map first = parse_term();
        if (negative)
            for (auto& [m, c] : first) c = -c;
        acc = std::move(first);
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                Map t = parse_term();
                if (c == '-')
                    for (auto& [m, coef] : t) coef = -coef;
                acc = add(std::move(acc), t);
            } else {
                break;
            }
        }
        return acc;
    }

    Map parse_all() {
        Map m = parse_expr();
        skip_ws();
        if (pos != s.size()) err("unexpected trailing input");
        return m;
    }
};

} // namespace

HomogeneousForm parse_form(std::string_view text, int num_vars) {
    if (num_vars < 1) fail(errc::parse_error, "polynomial: need at least one variable");
    PolyParser parser(text, num_vars);
    return HomogeneousForm(num_vars, parser.parse_all());
}

Morphism parse_morphism(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2) fail(errc::parse_error, "morphism: need at least two comma-separated forms");
    const int nv = static_cast<int>(parts.size());
    std::vector<HomogeneousForm> forms;
    forms.reserve(parts.size());
    for (const auto& p : parts) forms.push_back(parse_form(p, nv));
    return Morphism(std::move(forms));
}

ProjectivePoint parse_point(std::string_view text) {
    return normalize(parse_int_list(text));
}

mpz_class parse_integer(std::string_view text) {
    try {
        return mpz_class(trimmed(text));
    } catch (const std::invalid_argument&) {
        fail(errc::parse_error, "invalid integer: " + std::string(text));
    }
}

std::vector<mpz_class> parse_int_list(std::string_view text) {
    std::vector<mpz_class> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view piece = text.substr(start, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - start);
        out.push_back(parse_integer(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

mpq_class parse_rational(std::string_view text) {
    std::string t = trimmed(text);
    try {
        mpq_class q(t);
        if (sgn(q.get_den()) == 0) fail(errc::parse_error, "rational with zero denominator: " + t);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        fail(errc::parse_error, "invalid rational: " + t);
    }
}

// ---------------------------------------------------------------------------
// Deserialization

HomogeneousForm form_from_json(const nlohmann::json& j, int num_vars_hint) {
    if (j.is_string()) {
        if (num_vars_hint < 1) fail(errc::parse_error, "form text needs a variable count from context");
        return parse_form(j.get<std::string>(), num_vars_hint);
    }
    if (!j.is_object() || !j.contains("num_vars") || !j.contains("terms"))
        fail(errc::parse_error, "form: expected {num_vars, terms}");
    const int nv = j.at("num_vars").get<int>();
    std::map<Monomial, mpz_class> terms;
    for (const auto& t : j.at("terms")) {
        Monomial exps = t.at("exps").get<Monomial>();
        terms[std::move(exps)] = mpz_from(t.at("coef"), "coef");
    }
    return HomogeneousForm(nv, std::move(terms));
}

Morphism morphism_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_morphism(j.get<std::string>());
    if (!j.is_object() || !j.contains("forms")) fail(errc::parse_error, "morphism: expected {forms}");
    const auto& arr = j.at("forms");
    std::vector<HomogeneousForm> forms;
    forms.reserve(arr.size());
    for (const auto& f : arr) forms.push_back(form_from_json(f, static_cast<int>(arr.size())));
    return Morphism(std::move(forms));
}

ProjectivePoint point_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_point(j.get<std::string>());
    if (!j.is_array() || j.empty()) fail(errc::parse_error, "point: expected a coordinate array");
    std::vector<mpz_class> coords;
    coords.reserve(j.size());
    for (const auto& c : j) coords.push_back(mpz_from(c, "coordinate"));
    return normalize(std::move(coords));
}

namespace {

mpq_class mpq_from(const json& j, const char* what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    fail(errc::parse_error, std::string("expected rational for ") + what);
}

} // namespace

SequenceSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("params"))
        fail(errc::parse_error, "spec: expected {kind, params}");
    const std::string kind = j.at("kind").get<std::string>();
    const json& p = j.at("params");
    if (kind == "powerdiff")
        return SequenceSpec(PowerDiffSpec{mpz_from(p.at("u"), "u"), mpz_from(p.at("v"), "v")});
    if (kind == "lucas")
        return SequenceSpec(LucasSpec{mpz_from(p.at("p"), "p"), mpz_from(p.at("q"), "q")});
    if (kind == "eds")
        return SequenceSpec(EdsSpec{mpz_from(p.at("a1"), "a1"), mpz_from(p.at("a2"), "a2"),
                                    mpz_from(p.at("a3"), "a3"), mpz_from(p.at("a4"), "a4")});
    if (kind == "gcdgroup")
        return SequenceSpec(GcdGroupSpec{mpz_from(p.at("u"), "u"), mpz_from(p.at("v"), "v")});
    if (kind == "dynvalue") {
        Morphism f = morphism_from_json(p.at("morphism"));
        HomogeneousForm F = form_from_json(p.at("form"), f.dim() + 1);
        ProjectivePoint start = point_from_json(p.at("start"));
        return SequenceSpec(DynValueSpec{std::move(f), std::move(F), std::move(start)});
    }
    if (kind == "wandering") {
        Morphism f = morphism_from_json(p.at("morphism"));
        return SequenceSpec(WanderingNumeratorSpec{std::move(f), mpq_from(p.at("alpha"), "alpha"),
                                                   mpq_from(p.at("beta"), "beta")});
    }
    fail(errc::parse_error, "spec: unknown kind '" + kind + "'");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("spec"))
        fail(errc::parse_error, "experiment config: expected an object with a spec");
    ExperimentConfig cfg{spec_from_json(j.at("spec")), 1, {}, 0, {}, std::nullopt, 5000};
    if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<long>();
    if (j.contains("excluded_primes"))
        for (const auto& p : j.at("excluded_primes")) cfg.excluded.push_back(mpz_from(p, "excluded prime"));
    if (j.contains("j")) cfg.j = j.at("j").get<int>();
    if (j.contains("digit_ceiling"))
        cfg.zsig_options.digit_ceiling = j.at("digit_ceiling").get<std::uint64_t>();
    if (j.contains("factor")) {
        const json& f = j.at("factor");
        if (f.contains("trial_bound"))
            cfg.zsig_options.factor_budget.trial_bound = f.at("trial_bound").get<std::uint64_t>();
        if (f.contains("rho_iterations"))
            cfg.zsig_options.factor_budget.rho_iterations = f.at("rho_iterations").get<std::uint64_t>();
        if (f.contains("digit_limit"))
            cfg.zsig_options.factor_digit_limit = f.at("digit_limit").get<std::size_t>();
    }
    if (j.contains("max_pullback_degree")) cfg.max_pullback_degree = j.at("max_pullback_degree").get<int>();
    if (j.contains("linear_factors") && !j.at("linear_factors").is_null()) {
        int nv = 2;
        if (const auto* dyn = cfg.spec.get_if<DynValueSpec>()) nv = dyn->f.dim() + 1;
        std::vector<HomogeneousForm> factors;
        for (const auto& f : j.at("linear_factors")) factors.push_back(form_from_json(f, nv));
        cfg.linear_factors = std::move(factors);
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Orbit persistence

void save_orbit_jsonl(std::ostream& os, const std::vector<ProjectivePoint>& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        json j{{"n", i}, {"coords", to_json(points[i])}};
        os << j.dump() << '\n';
    }
}

std::vector<ProjectivePoint> load_orbit_jsonl(std::istream& is) {
    std::vector<ProjectivePoint> points;
    std::string line;
    std::size_t expect = 0;
    while (std::getline(is, line)) {
        if (trimmed(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("n") || !j.contains("coords"))
            fail(errc::parse_error, "orbit file: malformed record");
        if (j.at("n").get<std::size_t>() != expect)
            fail(errc::parse_error, "orbit file: records must have consecutive n starting at 0");
        points.push_back(point_from_json(j.at("coords")));
        ++expect;
    }
    return points;
}

} // namespace zsig
