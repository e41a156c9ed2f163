#ifndef ZSIG_VOJTA_HPP
#define ZSIG_VOJTA_HPP

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "zsig/heights.hpp"
#include "zsig/primdiv.hpp"

namespace zsig {

enum class ThresholdKind { thm01, deg_k_big, deg_dj_dj, min_j };

const char* threshold_kind_name(ThresholdKind k);

/// Exact rational comparison lhs > rhs (strict).
struct ThresholdVerdict {
    bool satisfied = false;
    mpq_class lhs, rhs;
    ThresholdKind which = ThresholdKind::thm01;
};

/// deg F > (N+1)(1 + 1/(d-2)), the degree condition for hypersurfaces in
/// P^N under a degree-d morphism. Throws degree_too_small for d <= 2.
ThresholdVerdict check_theorem01(int N, int d, int degF);

/// deg D > (d-1)/(d-2) * deg(-K), the j = 0 reduced-divisor condition.
/// Throws degree_too_small for d <= 2.
ThresholdVerdict check_degkbig(int d, int degD, int deg_neg_canonical);

/// deg Delta_j / d^j > deg D/(d-1) + deg(-K)/d^j for the reduced j-fold
/// pullback Delta_j.
ThresholdVerdict check_deltaj(int d, int degD, int deg_neg_canonical, int j, int deg_delta_j);

/// Smallest j with d^j (d-2) deg D > (d-1) deg(-K), by exact integer
/// comparison. Throws degree_too_small for d <= 2.
int min_iterate_j(int d, int degD, int deg_neg_canonical);

struct ExperimentConfig {
    SequenceSpec spec; // dynvalue or wandering
    long horizon = 1;
    std::vector<mpz_class> excluded;
    int j = 0; // iterate for the reduced-pullback diagnostic
    ZsigmondyOptions zsig_options{};
    std::optional<std::vector<HomogeneousForm>> linear_factors; // F as a product, when known
    int max_pullback_degree = 5000;
};

struct RatioEntry {
    long n = 0;
    double b_over_dn = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    ZsigmondyReport zsig;
    HeightEstimate height;
    std::vector<ThresholdVerdict> verdicts;
    std::optional<std::string> threshold_note; // set when d < 3 leaves thresholds undefined
    std::optional<ReducedDegree> delta_j;
    std::optional<int> min_j;
    std::optional<bool> normal_crossings; // set when linear factors were supplied
    std::vector<RatioEntry> ratios;       // B_n / d^n for nonzero terms
    std::optional<double> kappa_hat;      // min over the tail of B_n / (d^n * height estimate)
};

/// Pairs a sequence run with threshold verdicts and growth diagnostics.
/// The thresholds gate a conditional theorem: an unsatisfied threshold means
/// no prediction, never a refutation.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Same run over an existing stream for the config's spec (shares its
/// orbit cache, e.g. one loaded from disk).
ExperimentReport run_experiment(const ExperimentConfig& config, TermStream& stream);

} // namespace zsig

#endif
