#include "zsig/vojta.hpp"

#include <algorithm>
#include <cmath>

#include "zsig/util.hpp"

namespace zsig {

const char* threshold_kind_name(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::thm01: return "Thm0.1";
        case ThresholdKind::deg_k_big: return "DegKBig";
        case ThresholdKind::deg_dj_dj: return "DegDjDj";
        case ThresholdKind::min_j: return "MinJ";
    }
    return "Unknown";
}

namespace {

ThresholdVerdict verdict(ThresholdKind which, mpq_class lhs, mpq_class rhs) {
    lhs.canonicalize();
    rhs.canonicalize();
    return {lhs > rhs, std::move(lhs), std::move(rhs), which};
}

mpz_class pow_int(long base, int exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return r;
}

} // namespace

ThresholdVerdict check_theorem01(int N, int d, int degF) {
    if (d <= 2) fail(errc::degree_too_small, "check_theorem01: need degree d >= 3");
    if (N < 1 || degF < 1) fail(errc::invalid_spec, "check_theorem01: need N >= 1 and deg F >= 1");
    mpq_class rhs(mpz_class(N + 1) * (d - 1), mpz_class(d - 2));
    return verdict(ThresholdKind::thm01, mpq_class(degF), std::move(rhs));
}

ThresholdVerdict check_degkbig(int d, int degD, int deg_neg_canonical) {
    if (d <= 2) fail(errc::degree_too_small, "check_degkbig: need degree d >= 3");
    mpq_class rhs(mpz_class(d - 1) * deg_neg_canonical, mpz_class(d - 2));
    return verdict(ThresholdKind::deg_k_big, mpq_class(degD), std::move(rhs));
}

ThresholdVerdict check_deltaj(int d, int degD, int deg_neg_canonical, int j, int deg_delta_j) {
    if (d < 2) fail(errc::degree_too_small, "check_deltaj: need degree d >= 2");
    if (j < 0) fail(errc::invalid_spec, "check_deltaj: j must be non-negative");
    mpz_class dj = pow_int(d, j);
    mpq_class lhs(deg_delta_j, dj);
    mpq_class rhs = mpq_class(degD, mpz_class(d - 1)) + mpq_class(deg_neg_canonical, dj);
    return verdict(ThresholdKind::deg_dj_dj, std::move(lhs), std::move(rhs));
}

int min_iterate_j(int d, int degD, int deg_neg_canonical) {
    if (d <= 2) fail(errc::degree_too_small, "min_iterate_j: need degree d >= 3");
    if (degD < 1) fail(errc::invalid_spec, "min_iterate_j: need deg D >= 1");
    const mpz_class rhs = mpz_class(d - 1) * deg_neg_canonical;
    mpz_class lhs = mpz_class(d - 2) * degD; // d^j (d-2) deg D at j = 0
    int j = 0;
    while (lhs <= rhs) {
        lhs *= d;
        ++j;
    }
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    TermStream stream(config.spec, config.zsig_options.digit_ceiling);
    return run_experiment(config, stream);
}

ExperimentReport run_experiment(const ExperimentConfig& config, TermStream& stream) {
    const auto* dyn = config.spec.get_if<DynValueSpec>();
    const auto* wan = config.spec.get_if<WanderingNumeratorSpec>();
    if (!dyn && !wan)
        fail(errc::invalid_spec, "run_experiment: spec must be dynvalue or wandering");
    if (config.horizon < config.spec.first_index())
        fail(errc::index_out_of_range, "run_experiment: horizon below the first index");
    if (config.j < 0) fail(errc::invalid_spec, "run_experiment: j must be non-negative");

    const Morphism& f = dyn ? dyn->f : wan->f;
    HomogeneousForm F = [&] {
        if (dyn) return dyn->form;
        mpq_class b = wan->beta;
        b.canonicalize();
        return HomogeneousForm::linear({b.get_den(), -b.get_num()});
    }();
    const int N = f.dim();
    const int d = f.degree();
    const int degD = F.degree();

    ExperimentReport report{config, {config.spec, 0, {}, {}, {}, false, -1, std::nullopt},
                            {}, {}, std::nullopt, std::nullopt, std::nullopt,
                            std::nullopt, {}, std::nullopt};

    if (config.linear_factors) {
        if (config.linear_factors->empty())
            fail(errc::invalid_spec, "run_experiment: empty linear factor list");
        HomogeneousForm product = (*config.linear_factors)[0];
        for (std::size_t i = 1; i < config.linear_factors->size(); ++i)
            product = product * (*config.linear_factors)[i];
        if (!(product == F))
            fail(errc::invalid_spec, "run_experiment: linear factors do not multiply to the form");
        report.normal_crossings = normal_crossings_linear_check(*config.linear_factors);
    }

    report.zsig = zsigmondy_run(stream, config.horizon, config.excluded, config.zsig_options);

    // Heights over the same orbit; stay within what generation reached.
    long height_horizon = config.horizon;
    if (report.zsig.truncated) height_horizon = static_cast<long>(stream.orbit()->computed()) - 1;
    report.height = canonical_height_estimate(*stream.orbit(), height_horizon);

    if (d >= 3) {
        report.verdicts.push_back(check_theorem01(N, d, degD));
        report.verdicts.push_back(check_degkbig(d, degD, N + 1));
        report.min_j = min_iterate_j(d, degD, N + 1);
    } else {
        report.threshold_note = "degree too small: threshold undefined for d = 2, no prediction";
    }
    report.delta_j = reduced_pullback_degree(f, F, config.j, config.max_pullback_degree);
    report.verdicts.push_back(check_deltaj(d, degD, N + 1, config.j, report.delta_j->degree));
    if (report.min_j) {
        mpq_class lhs(pow_int(d, *report.min_j) * (d - 2) * degD);
        mpq_class rhs(mpz_class(d - 1) * (N + 1));
        report.verdicts.push_back(
            {lhs > rhs, std::move(lhs), std::move(rhs), ThresholdKind::min_j});
    }

    const double dd = static_cast<double>(d);
    const double hhat = report.height.final_estimate;
    double kappa = 0.0;
    bool tail_seen = false;
    for (const auto& rec : report.zsig.records) {
        if (sgn(rec.value) == 0) continue;
        const double dn = std::pow(dd, static_cast<double>(rec.n));
        report.ratios.push_back({rec.n, rec.b_n / dn});
        if (2 * rec.n > config.horizon && hhat > 0) {
            const double k = rec.b_n / (dn * hhat);
            kappa = tail_seen ? std::min(kappa, k) : k;
            tail_seen = true;
        }
    }
    if (tail_seen) report.kappa_hat = kappa;
    return report;
}

} // namespace zsig
