#pragma once

#include <optional>
#include <string>
#include <vector>

#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

enum class CheckStatus { pass, fail, inconclusive };

std::string_view status_name(CheckStatus s);
std::optional<CheckStatus> parse_status(std::string_view s);

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::inconclusive;
    /// Concrete evidence: a point, a value, or a short diagnostic.
    std::string witness;
    double tolerance = 0.0;
    /// The mathematical condition being tested, in words.
    std::string condition;
};

/// Ordered list of checks, serialized one per line as tab-separated
/// name, status, witness, tolerance, condition.
struct HypothesisReport {
    std::vector<Check> checks;

    const Check* find(std::string_view name) const;
    bool all_pass() const;
    std::string to_text() const;
    static HypothesisReport parse(const std::string& text);
};

struct SupNorm {
    double M = 0.0;
    Vec argmax;
    /// Largest |x| among refined maximizers within 1e-6 relative of M.
    double R_M = 0.0;
    bool conclusive = true;
    std::string diagnostic;
};

/// Grid search over the box of half-width `search_radius` (the nonnegative
/// part for orthant maps) with `grid` points per axis, then coordinate-wise
/// golden-section polish of the best local maxima.
SupNorm estimate_sup_norm(const MapHandle& map, double search_radius = 8.0, int grid = 512);

struct DecayProfile {
    std::vector<double> radii;
    std::vector<double> values;
    CheckStatus verdict = CheckStatus::inconclusive;
    std::string witness;
};

/// max |f(r u)| over `n_directions` directions u for each r. Passes when the
/// profile never increases after its peak and ends below 1e-9 M
/// (M <= 0: use the profile maximum).
DecayProfile az_decay_profile(const MapHandle& map, const std::vector<double>& radii, double M = 0.0,
                              int n_directions = 1000);

struct EzResult {
    /// Smallest candidate R with f == 0 exactly on the sampled region |x| >= R.
    std::optional<double> strict_radius;
    /// Smallest candidate R with |f| <= tol there.
    std::optional<double> numeric_radius;
    /// Sampled sup of |f| beyond each candidate.
    std::vector<double> shell_sup;
};

EzResult ez_check(const MapHandle& map, std::vector<double> R_candidates, double tol = 1e-12,
                  int n_directions = 512);

struct ContractionVerdict {
    CheckStatus status = CheckStatus::inconclusive;
    Vec witness;
    double max_ratio = 0.0;
};

/// Samples |f(x)| / |x| on 0 < |x| <= R_M (geometric small radii plus a
/// uniform radial grid). Within 1e-9 of 1 is inconclusive. Throws
/// Error(config) when f(0) != 0.
ContractionVerdict origin_contraction_check(const MapHandle& map, double R_M, int grid = 512);

/// Pushes a grid of the ball of radius M (its nonnegative part for orthant
/// maps) forward n_iterates times.
PointCloud attracting_set_sample(const MapHandle& map, long n_iterates, double M, int grid = 128);

struct HypothesisOptions {
    double search_radius = 8.0;
    int grid = 512;
    double ez_tol = 1e-12;
    int jobs = 0;
};

/// Runs all of the above and records one check per condition.
HypothesisReport check_hypotheses(const MapHandle& map, const HypothesisOptions& opt = {});

}  // namespace azlab
