// zsig: generate divisibility-type sequences, compute primitive parts and
// Zsigmondy sets, estimate canonical heights, and check degree thresholds.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zsig/cache_store.hpp"
#include "zsig/json_io.hpp"
#include "zsig/util.hpp"
#include "zsig/vojta.hpp"

namespace {

using nlohmann::json;

struct OutputOptions {
    std::string path;   // empty = stdout
    std::string format = "json";
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("-o,--output", out.path, "Write the report to a file instead of stdout");
    cmd->add_option("--format", out.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const OutputOptions& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out.path);
    if (!f) zsig::fail(zsig::errc::io_error, "cannot write " + out.path);
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

// Sequence selection shared by seq / zsigmondy / experiment. Flags overlay
// the config file: --kind rebuilds params from flags alone, individual
// flags replace single fields.
struct SpecFlags {
    std::optional<std::string> kind, u, v, p, q, init, morphism, form, point, alpha, beta;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--kind", kind,
                        "Sequence kind: powerdiff | lucas | eds | gcdgroup | dynvalue | wandering");
        cmd->add_option("--u", u, "Parameter u (powerdiff, gcdgroup)");
        cmd->add_option("--v", v, "Parameter v (powerdiff, gcdgroup)");
        cmd->add_option("--p", p, "Lucas coefficient p");
        cmd->add_option("--q", q, "Lucas coefficient q");
        cmd->add_option("--init", init, "EDS initial terms a1,a2,a3,a4");
        cmd->add_option("--morphism", morphism, "Morphism as comma-separated forms, e.g. \"x^2+y^2,y^2\"");
        cmd->add_option("--form", form, "Value form, e.g. \"x-3*y\"");
        cmd->add_option("--point", point, "Start point, e.g. \"1,1\"");
        cmd->add_option("--alpha", alpha, "Wandering orbit start (rational)");
        cmd->add_option("--beta", beta, "Wandering target (rational)");
    }

    bool any() const {
        return kind || u || v || p || q || init || morphism || form || point || alpha || beta;
    }

    json overlay(json spec_json) const {
        if (kind) {
            spec_json = json{{"kind", *kind}, {"params", json::object()}};
        }
        if (!spec_json.contains("params")) spec_json["params"] = json::object();
        json& params = spec_json["params"];
        if (u) params["u"] = *u;
        if (v) params["v"] = *v;
        if (p) params["p"] = *p;
        if (q) params["q"] = *q;
        if (init) {
            auto vals = zsig::parse_int_list(*init);
            if (vals.size() != 4)
                zsig::fail(zsig::errc::invalid_spec, "--init expects four comma-separated integers");
            params["a1"] = vals[0].get_str();
            params["a2"] = vals[1].get_str();
            params["a3"] = vals[2].get_str();
            params["a4"] = vals[3].get_str();
        }
        if (morphism) params["morphism"] = *morphism;
        if (form) params["form"] = *form;
        if (point) params["start"] = *point;
        if (alpha) params["alpha"] = *alpha;
        if (beta) params["beta"] = *beta;
        return spec_json;
    }
};

struct CacheFlags {
    std::optional<std::string> dir;
    bool disabled = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--cache-dir", dir, "Orbit cache directory (default $ZSIG_CACHE_DIR or ./.zcache)");
        cmd->add_flag("--no-cache", disabled, "Do not read or write the orbit cache");
    }

    std::optional<zsig::OrbitCacheStore> open() const {
        if (disabled) return std::nullopt;
        return zsig::OrbitCacheStore(dir);
    }
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) zsig::fail(zsig::errc::io_error, "cannot read config " + path);
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded()) zsig::fail(zsig::errc::parse_error, "config is not valid JSON: " + path);
    return j;
}

zsig::SequenceSpec resolve_spec(const std::string& config_path, const SpecFlags& flags) {
    json cfg = load_config(config_path);
    json spec_json = cfg.contains("spec") ? cfg.at("spec") : json::object();
    if (!flags.any() && spec_json.empty())
        zsig::fail(zsig::errc::invalid_spec, "no sequence given: pass --kind or a config file");
    return zsig::spec_from_json(flags.overlay(std::move(spec_json)));
}

void with_orbit_cache(zsig::TermStream& stream, const CacheFlags& cache_flags,
                      const std::function<void()>& body) {
    auto store = cache_flags.open();
    if (store && stream.orbit()) store->load_into(*stream.orbit());
    try {
        body();
    } catch (...) {
        if (store && stream.orbit()) store->store_from(*stream.orbit());
        throw;
    }
    if (store && stream.orbit()) store->store_from(*stream.orbit());
}

int cmd_seq(const std::string& config_path, const SpecFlags& flags, long n_max,
            std::uint64_t digit_ceiling, const CacheFlags& cache_flags, const OutputOptions& out) {
    zsig::SequenceSpec spec = resolve_spec(config_path, flags);
    zsig::TermStream stream(spec, digit_ceiling);
    std::vector<mpz_class> terms;
    bool truncated = false;
    with_orbit_cache(stream, cache_flags, [&] {
        for (long n = spec.first_index(); n <= n_max; ++n) {
            try {
                terms.push_back(stream.term(n));
            } catch (const zsig::error& e) {
                if (e.code() != zsig::errc::resource_limit) throw;
                truncated = true;
                break;
            }
        }
    });
    if (out.format == "csv") {
        std::ostringstream os;
        os << "n,term\n";
        for (std::size_t i = 0; i < terms.size(); ++i)
            os << spec.first_index() + static_cast<long>(i) << ',' << terms[i].get_str() << '\n';
        emit(out, os.str());
    } else {
        json arr = json::array();
        for (const auto& t : terms) arr.push_back(t.get_str());
        json j{{"spec", zsig::to_json(spec)},
               {"first_index", spec.first_index()},
               {"n_max", n_max},
               {"terms", std::move(arr)},
               {"truncated", truncated}};
        emit(out, j.dump(2));
    }
    return truncated ? 3 : 0;
}

int cmd_zsigmondy(const std::string& config_path, const SpecFlags& flags, long n_max,
                  const std::string& exclude, zsig::ZsigmondyOptions options,
                  const CacheFlags& cache_flags, const OutputOptions& out) {
    zsig::SequenceSpec spec = resolve_spec(config_path, flags);
    std::vector<mpz_class> excluded;
    if (!exclude.empty()) excluded = zsig::parse_int_list(exclude);
    zsig::TermStream stream(spec, options.digit_ceiling);
    zsig::ZsigmondyReport report{spec, 0, {}, {}, {}, false, -1, std::nullopt};
    with_orbit_cache(stream, cache_flags, [&] {
        report = zsig::zsigmondy_run(stream, n_max, excluded, options);
    });
    emit(out, out.format == "csv" ? zsig::to_csv(report) : zsig::to_json(report).dump(2));
    return report.truncated ? 3 : 0;
}

int cmd_heights(const std::string& morphism_text, const std::string& point_text, long n_max,
                std::uint64_t digit_ceiling, const CacheFlags& cache_flags,
                const OutputOptions& out) {
    zsig::Morphism f = zsig::parse_morphism(morphism_text);
    zsig::ProjectivePoint P = zsig::parse_point(point_text);
    zsig::OrbitCache orbit(f, P, digit_ceiling);
    auto store = cache_flags.open();
    if (store) store->load_into(orbit);
    bool truncated = false;
    long reached = n_max;
    try {
        orbit.point(static_cast<std::size_t>(n_max));
    } catch (const zsig::error& e) {
        if (e.code() != zsig::errc::resource_limit) throw;
        truncated = true;
        reached = static_cast<long>(orbit.computed()) - 1;
    }
    zsig::HeightEstimate est = zsig::canonical_height_estimate(orbit, reached);
    if (store) store->store_from(orbit);
    if (out.format == "csv") {
        std::ostringstream os;
        os << "n,value\n";
        for (const auto& [n, v] : est.values) os << n << ',' << zsig::format_real(v) << '\n';
        emit(out, os.str());
    } else {
        json j = zsig::to_json(est);
        j["truncated"] = truncated;
        j["degree"] = f.degree();
        emit(out, j.dump(2));
    }
    return truncated ? 3 : 0;
}

int cmd_vojta_check(std::optional<int> N, int d, std::optional<int> degF, std::optional<int> degD,
                    int deg_neg_k_default, std::optional<int> deg_neg_k, std::optional<int> j,
                    std::optional<int> deg_delta_j, bool min_j, const OutputOptions& out) {
    json result;
    if (degF) {
        if (!N) zsig::fail(zsig::errc::invalid_spec, "--deg-f needs --N");
        result = zsig::to_json(zsig::check_theorem01(*N, d, *degF));
    } else if (degD && min_j) {
        int k = deg_neg_k ? *deg_neg_k : deg_neg_k_default;
        int jmin = zsig::min_iterate_j(d, *degD, k);
        result = json{{"min_j", jmin}};
    } else if (degD && j && deg_delta_j) {
        int k = deg_neg_k ? *deg_neg_k : deg_neg_k_default;
        result = zsig::to_json(zsig::check_deltaj(d, *degD, k, *j, *deg_delta_j));
    } else if (degD) {
        int k = deg_neg_k ? *deg_neg_k : deg_neg_k_default;
        result = zsig::to_json(zsig::check_degkbig(d, *degD, k));
    } else {
        zsig::fail(zsig::errc::invalid_spec,
                   "pass --deg-f (with --N), or --deg-d [--j --deg-delta-j | --min-j]");
    }
    emit(out, result.dump(2));
    return 0;
}

int cmd_experiment(const std::string& config_path, const SpecFlags& flags,
                   std::optional<long> horizon, std::optional<int> j, const std::string& exclude,
                   const std::string& linear_forms, std::optional<std::uint64_t> digit_ceiling,
                   const CacheFlags& cache_flags, const OutputOptions& out) {
    json cfg_json = load_config(config_path);
    if (flags.any() || !cfg_json.contains("spec"))
        cfg_json["spec"] = flags.overlay(cfg_json.contains("spec") ? cfg_json.at("spec") : json::object());
    zsig::ExperimentConfig cfg = zsig::experiment_config_from_json(cfg_json);
    if (horizon) cfg.horizon = *horizon;
    if (j) cfg.j = *j;
    if (!exclude.empty()) cfg.excluded = zsig::parse_int_list(exclude);
    if (digit_ceiling) cfg.zsig_options.digit_ceiling = *digit_ceiling;
    if (!linear_forms.empty()) {
        int nv = 2;
        if (const auto* dyn = cfg.spec.get_if<zsig::DynValueSpec>()) nv = dyn->f.dim() + 1;
        std::vector<zsig::HomogeneousForm> factors;
        std::string cur;
        int depth = 0;
        for (char c : linear_forms) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                factors.push_back(zsig::parse_form(cur, nv));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        factors.push_back(zsig::parse_form(cur, nv));
        cfg.linear_factors = std::move(factors);
    }

    zsig::TermStream stream(cfg.spec, cfg.zsig_options.digit_ceiling);
    auto store = cache_flags.open();
    if (store && stream.orbit()) store->load_into(*stream.orbit());
    zsig::ExperimentReport report = zsig::run_experiment(cfg, stream);
    if (store && stream.orbit()) store->store_from(*stream.orbit());
    emit(out, out.format == "csv" ? zsig::to_csv(report.zsig) : zsig::to_json(report).dump(2));
    return report.zsig.truncated ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Primitive prime divisors, Zsigmondy sets, and height diagnostics for "
                 "classical and orbit-valued integer sequences"};
    app.require_subcommand(1);

    OutputOptions out;
    CacheFlags cache_flags;
    SpecFlags spec_flags;
    std::string config_path;
    long n_max = 10;
    std::uint64_t digit_ceiling = 1'000'000;
    zsig::ZsigmondyOptions zopts;
    std::string exclude, morphism_text, point_text, linear_forms;
    bool no_primes = false;

    auto* seq = app.add_subcommand("seq", "Generate sequence terms");
    spec_flags.add_to(seq);
    seq->add_option("--config", config_path, "JSON config file; flags override its fields");
    seq->add_option("--n-max", n_max, "Last index to generate")->required();
    seq->add_option("--digit-ceiling", digit_ceiling, "Orbit coordinate digit ceiling");
    cache_flags.add_to(seq);
    add_output_flags(seq, out);

    auto* zs = app.add_subcommand("zsigmondy", "Primitive-divisor verdicts and the Zsigmondy set");
    spec_flags.add_to(zs);
    zs->add_option("--config", config_path, "JSON config file; flags override its fields");
    zs->add_option("--n-max", n_max, "Horizon")->required();
    zs->add_option("--exclude", exclude, "Excluded primes, e.g. \"2,3\"");
    zs->add_option("--trial-bound", zopts.factor_budget.trial_bound, "Trial division bound");
    zs->add_option("--rho-iters", zopts.factor_budget.rho_iterations, "Pollard rho iteration budget");
    zs->add_option("--factor-digit-limit", zopts.factor_digit_limit,
                   "Only factor primitive parts up to this many digits");
    zs->add_flag("--no-primes", no_primes, "Skip factoring primitive parts");
    zs->add_option("--digit-ceiling", zopts.digit_ceiling, "Orbit coordinate digit ceiling");
    cache_flags.add_to(zs);
    add_output_flags(zs, out);

    auto* ht = app.add_subcommand("heights", "Canonical height estimate along an orbit");
    ht->add_option("--morphism", morphism_text, "Morphism forms")->required();
    ht->add_option("--point", point_text, "Start point")->required();
    ht->add_option("--n-max", n_max, "Last orbit index")->required();
    ht->add_option("--digit-ceiling", digit_ceiling, "Orbit coordinate digit ceiling");
    cache_flags.add_to(ht);
    add_output_flags(ht, out);

    std::optional<int> vN, vdegF, vdegD, vdegK, vj, vdeltaj;
    int vd = 0;
    bool vminj = false;
    auto* vc = app.add_subcommand("vojta-check", "Exact degree-threshold verdicts");
    vc->add_option("--N", vN, "Ambient dimension of P^N");
    vc->add_option("--d", vd, "Morphism degree")->required();
    vc->add_option("--deg-f", vdegF, "Degree of the hypersurface form (theorem threshold)");
    vc->add_option("--deg-d", vdegD, "Degree of the divisor D");
    vc->add_option("--deg-neg-k", vdegK, "deg(-K); defaults to N+1 when --N is given");
    vc->add_option("--j", vj, "Pullback iterate for the Delta_j threshold");
    vc->add_option("--deg-delta-j", vdeltaj, "Degree of the reduced pullback Delta_j");
    vc->add_flag("--min-j", vminj, "Report the least j that clears the reduced-pullback bound");
    add_output_flags(vc, out);

    std::optional<long> ehorizon;
    std::optional<int> ej;
    std::optional<std::uint64_t> eceiling;
    auto* ex = app.add_subcommand("experiment", "Full run: sequence, Zsigmondy set, heights, thresholds");
    spec_flags.add_to(ex);
    ex->add_option("--config", config_path, "JSON experiment config; flags override its fields");
    ex->add_option("--horizon", ehorizon, "Sequence horizon");
    ex->add_option("--j", ej, "Pullback iterate for the Delta_j verdict");
    ex->add_option("--exclude", exclude, "Excluded primes");
    ex->add_option("--linear-forms", linear_forms,
                   "Linear factors of the form, e.g. \"x,y,z,x+y+z\" (enables the normal-crossings check)");
    ex->add_option("--digit-ceiling", eceiling, "Orbit coordinate digit ceiling");
    cache_flags.add_to(ex);
    add_output_flags(ex, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::json err{{"error", {{"code", "UsageError"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 2;
    }

    try {
        if (seq->parsed()) return cmd_seq(config_path, spec_flags, n_max, digit_ceiling, cache_flags, out);
        if (zs->parsed()) {
            zopts.fill_primitive_primes = !no_primes;
            return cmd_zsigmondy(config_path, spec_flags, n_max, exclude, zopts, cache_flags, out);
        }
        if (ht->parsed())
            return cmd_heights(morphism_text, point_text, n_max, digit_ceiling, cache_flags, out);
        if (vc->parsed()) {
            int kdefault = vN ? *vN + 1 : 0;
            return cmd_vojta_check(vN, vd, vdegF, vdegD, kdefault, vdegK, vj, vdeltaj, vminj, out);
        }
        if (ex->parsed())
            return cmd_experiment(config_path, spec_flags, ehorizon, ej, exclude, linear_forms,
                                  eceiling, cache_flags, out);
    } catch (const zsig::error& e) {
        nlohmann::json err{{"error", {{"code", zsig::errc_name(e.code())}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return e.code() == zsig::errc::resource_limit ? 3 : 2;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 2;
    }
    return 0;
}
