// Distribution summaries of aggregate visibility totals: histogram, quantile
// hotspot groups, goodness-of-fit statistics and maximum-likelihood fits.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vantage::stats {

struct Histogram {
    std::vector<double> edges;               // bins + 1 ascending edges
    std::vector<std::uint64_t> frequencies;  // one per bin, sums to N

    std::string to_csv() const;              // bin_low,bin_high,count
};

/// Equal-width bins over [min, max]; the last bin is closed on the right. A
/// constant sample uses [v - 0.5, v + 0.5]. Throws Error(EmptyInput).
Histogram histogram(std::span<const double> totals, std::size_t bins = 50);

inline const std::vector<double> kDefaultCuts{0.90, 0.95, 0.99};

struct QuantileClassification {
    std::vector<double> cuts;                 // ascending fractions in (0, 1)
    std::vector<double> thresholds;           // nearest-rank value at each cut
    std::vector<std::string> group_names;     // cuts.size() + 1 groups, lowest first
    std::vector<std::size_t> labels;          // group index per input entry
    std::vector<std::size_t> group_sizes;
    std::vector<double> group_totals;
    std::vector<double> shares;               // group total / grand total
};

/// Nearest-rank value: the ceil(q * N)-th smallest of a sorted sample.
double nearest_rank(std::span<const double> sorted, double q);

/// Labels each total with the highest cut whose threshold it strictly
/// exceeds; ties at a threshold fall in the lower group. Throws
/// Error(EmptyInput) or Error(InvalidArgument) for bad cuts.
QuantileClassification quantile_classify(std::span<const double> totals,
                                         const std::vector<double>& cuts = kDefaultCuts);

/// Group names for cuts, e.g. {0.9, 0.95, 0.99} -> Bottom90, Q90_95, Q95_99, Top1.
std::vector<std::string> group_names_for(const std::vector<double>& cuts);

enum class Family { LogNormal, Gamma, Exponential, WeibullMin, Normal, InverseGamma, GumbelR };

inline constexpr Family kAllFamilies[] = {Family::LogNormal,  Family::Gamma,
                                          Family::Exponential, Family::WeibullMin,
                                          Family::Normal,      Family::InverseGamma,
                                          Family::GumbelR};

std::string_view to_string(Family f) noexcept;
/// Accepts the names produced by to_string, case-insensitively.
std::optional<Family> family_from_string(std::string_view name);
/// Name of the shape parameter ("s", "a", "c"), empty for two-parameter families.
std::string_view shape_name(Family f) noexcept;

/// A fitted continuous distribution in loc/scale(/shape) form.
struct Distribution {
    Family family = Family::Normal;
    double loc = 0.0;
    double scale = 1.0;
    std::optional<double> shape;

    double cdf(double x) const;
    double quantile(double q) const;
    double log_pdf(double x) const;
};

struct FitResult {
    Distribution dist;
    double ks_D = 0.0;
    double wasserstein = 0.0;
    double log_likelihood = 0.0;
    bool converged = true;
    std::string loc_policy;  // how loc was determined

    Family family() const noexcept { return dist.family; }
};

inline constexpr double kSupportEpsilon = 1e-9;
inline constexpr std::size_t kMinFitSamples = 30;

/// Maximum-likelihood fit. Gamma, Exponential and WeibullMin fix
/// loc = min - 1e-9; LogNormal and InverseGamma profile loc over
/// (-10 * sd, min - 1e-9); Normal and GumbelR use two-parameter MLE.
/// Throws Error(InvalidArgument) for N < 30 and Error(DegenerateSample) for
/// zero variance. A search that ends on its boundary is reported with
/// converged = false.
FitResult fit_distribution(std::span<const double> totals, Family family);

/// Fits every family, in parallel when workers > 1.
std::vector<FitResult> fit_all(std::span<const double> totals, unsigned workers = 1);

/// D = max_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|) over an ascending sample.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// W1 = (1/N) sum_i |x_i - Q((i - 0.5)/N)| over an ascending sample.
double wasserstein_distance(std::span<const double> sorted,
                            const std::function<double(double)>& quantile);

/// Ascending by ks_D, ties broken by Wasserstein distance.
std::vector<FitResult> rank_fits(std::vector<FitResult> results);

/// Plain-text comparison table of ranked fits.
std::string fit_table(const std::vector<FitResult>& ranked);

/// JSON report: per family parameters, ks_D, wasserstein, converged, plus the ranking.
std::string fit_report_json(const std::vector<FitResult>& ranked, std::size_t n);

}  // namespace vantage::stats
