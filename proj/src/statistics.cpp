#include "vantage/statistics.hpp"

#include "vantage/error.hpp"

#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/extreme_value.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/weibull.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

namespace vantage::stats {

namespace {

namespace bm = boost::math;
using Policy = bm::policies::policy<bm::policies::domain_error<bm::policies::ignore_error>,
                                    bm::policies::overflow_error<bm::policies::ignore_error>,
                                    bm::policies::evaluation_error<bm::policies::ignore_error>,
                                    bm::policies::pole_error<bm::policies::ignore_error>,
                                    bm::policies::promote_double<false>>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // population (1/N) variance
    double min = 0.0;
    double max = 0.0;
};

Moments moments(std::span<const double> x) {
    Moments m;
    m.min = *std::min_element(x.begin(), x.end());
    m.max = *std::max_element(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / n;
    return m;
}

// Solves ln(a) - digamma(a) = s for the gamma shape (s > 0).
std::optional<double> gamma_shape_from_log_gap(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
    auto f = [s](double log_a) {
        const double a = std::exp(log_a);
        return std::log(a) - bm::digamma(a, Policy()) - s;
    };
    double lo = std::log(1e-12), hi = std::log(1e12);
    if (f(lo) < 0.0 || f(hi) > 0.0) return std::nullopt;
    std::uintmax_t iters = 200;
    const auto [a, b] = bm::tools::toms748_solve(f, lo, hi, bm::tools::eps_tolerance<double>(50), iters);
    return std::exp(0.5 * (a + b));
}

struct GammaFit {
    double shape = kNaN;
    double scale = kNaN;
    bool ok = false;
};

GammaFit fit_gamma_fixed_loc(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    double sum = 0.0, sum_log = 0.0;
    for (double v : y) {
        sum += v;
        sum_log += std::log(v);
    }
    const double mean = sum / n;
    const double s = std::log(mean) - sum_log / n;
    GammaFit g;
    if (auto a = gamma_shape_from_log_gap(s)) {
        g.shape = *a;
        g.scale = mean / *a;
        g.ok = true;
    }
    return g;
}

double sum_log_pdf(const Distribution& d, std::span<const double> x) {
    double ll = 0.0;
    for (double v : x) ll += d.log_pdf(v);
    return ll;
}

// Profile likelihood over loc = min - gap with gap in [eps, max_gap]. Searches
// a log-spaced grid, then refines the best bracket with Brent's method.
struct ProfileResult {
    double loc = kNaN;
    double value = -kInf;
    bool interior = false;
};

template <typename Profile>
ProfileResult profile_loc(double min_x, double max_gap, Profile&& profile) {
    const double u_lo = std::log(kSupportEpsilon);
    const double u_hi = std::log(std::max(max_gap, 10.0 * kSupportEpsilon));
    constexpr int kGrid = 200;
    auto eval = [&](double u) {
        const double v = profile(min_x - std::exp(u));
        return std::isfinite(v) ? v : -kInf;
    };

    std::vector<double> vals(kGrid + 1);
    int best = 0;
    for (int i = 0; i <= kGrid; ++i) {
        vals[i] = eval(u_lo + (u_hi - u_lo) * i / kGrid);
        if (vals[i] > vals[best]) best = i;
    }
    ProfileResult r;
    if (!std::isfinite(vals[best])) return r;
    const double step = (u_hi - u_lo) / kGrid;
    const double a = u_lo + step * std::max(best - 1, 0);
    const double b = u_lo + step * std::min(best + 1, kGrid);
    std::uintmax_t iters = 200;
    const auto [u_best, neg] = bm::tools::brent_find_minima([&](double u) { return -eval(u); }, a, b,
                                                            40, iters);
    double u = u_best;
    double value = -neg;
    if (vals[best] > value) {
        u = u_lo + step * best;
        value = vals[best];
    }
    r.loc = min_x - std::exp(u);
    r.value = value;
    r.interior = best > 0 && best < kGrid;
    return r;
}

double lognormal_profile(std::span<const double> x, double loc, double* mu_out, double* s_out) {
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) sum += std::log(v - loc);
    const double mu = sum / n;
    double ss = 0.0;
    for (double v : x) {
        const double d = std::log(v - loc) - mu;
        ss += d * d;
    }
    const double s = std::sqrt(ss / n);
    if (mu_out) *mu_out = mu;
    if (s_out) *s_out = s;
    if (!(s > 0.0)) return -kInf;
    return -sum - n * std::log(s) - 0.5 * n * kLog2Pi - 0.5 * n;
}

double invgamma_profile(std::span<const double> x, double loc, double* a_out, double* scale_out) {
    const double n = static_cast<double>(x.size());
    double sum_inv = 0.0, sum_log = 0.0;
    for (double v : x) {
        const double y = v - loc;
        sum_inv += 1.0 / y;
        sum_log += std::log(y);
    }
    // 1/y is Gamma(a, rate = beta): shape from the gamma equation on 1/y.
    const double mean_inv = sum_inv / n;
    const double s = std::log(mean_inv) + sum_log / n;  // ln mean(z) - mean(ln z)
    const auto a = gamma_shape_from_log_gap(s);
    if (!a) return -kInf;
    const double beta = *a / mean_inv;
    if (a_out) *a_out = *a;
    if (scale_out) *scale_out = beta;
    return n * (*a * std::log(beta) - std::lgamma(*a)) - (*a + 1.0) * sum_log - beta * sum_inv;
}

FitResult finish(FitResult r, std::span<const double> sorted) {
    const Distribution d = r.dist;
    r.ks_D = ks_statistic(sorted, [&d](double v) { return d.cdf(v); });
    r.wasserstein = wasserstein_distance(sorted, [&d](double q) { return d.quantile(q); });
    r.log_likelihood = sum_log_pdf(d, sorted);
    if (!(d.scale > 0.0) || !std::isfinite(d.scale)) r.converged = false;
    return r;
}

std::string pct_label(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", std::round(fraction * 100.0 * 1e6) / 1e6);
    return buf;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::LogNormal: return "LogNormal";
        case Family::Gamma: return "Gamma";
        case Family::Exponential: return "Exponential";
        case Family::WeibullMin: return "WeibullMin";
        case Family::Normal: return "Normal";
        case Family::InverseGamma: return "InverseGamma";
        case Family::GumbelR: return "GumbelR";
    }
    return "?";
}

std::optional<Family> family_from_string(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    const auto needle = lower(name);
    for (auto f : kAllFamilies) {
        if (lower(to_string(f)) == needle) return f;
    }
    return std::nullopt;
}

std::string_view shape_name(Family f) noexcept {
    switch (f) {
        case Family::LogNormal: return "s";
        case Family::Gamma:
        case Family::InverseGamma: return "a";
        case Family::WeibullMin: return "c";
        default: return "";
    }
}

double Distribution::cdf(double x) const {
    const double y = x - loc;
    const double sh = shape.value_or(kNaN);
    switch (family) {
        case Family::Normal: return bm::cdf(bm::normal_distribution<double, Policy>(loc, scale), x);
        case Family::GumbelR:
            return bm::cdf(bm::extreme_value_distribution<double, Policy>(loc, scale), x);
        default: break;
    }
    if (y <= 0.0) return 0.0;
    switch (family) {
        case Family::LogNormal:
            return bm::cdf(bm::lognormal_distribution<double, Policy>(std::log(scale), sh), y);
        case Family::Gamma: return bm::cdf(bm::gamma_distribution<double, Policy>(sh, scale), y);
        case Family::Exponential:
            return bm::cdf(bm::exponential_distribution<double, Policy>(1.0 / scale), y);
        case Family::WeibullMin: return bm::cdf(bm::weibull_distribution<double, Policy>(sh, scale), y);
        case Family::InverseGamma:
            return bm::cdf(bm::inverse_gamma_distribution<double, Policy>(sh, scale), y);
        default: return kNaN;
    }
}

double Distribution::quantile(double q) const {
    const double sh = shape.value_or(kNaN);
    switch (family) {
        case Family::Normal:
            return bm::quantile(bm::normal_distribution<double, Policy>(loc, scale), q);
        case Family::GumbelR:
            return bm::quantile(bm::extreme_value_distribution<double, Policy>(loc, scale), q);
        case Family::LogNormal:
            return loc + bm::quantile(bm::lognormal_distribution<double, Policy>(std::log(scale), sh), q);
        case Family::Gamma:
            return loc + bm::quantile(bm::gamma_distribution<double, Policy>(sh, scale), q);
        case Family::Exponential:
            return loc + bm::quantile(bm::exponential_distribution<double, Policy>(1.0 / scale), q);
        case Family::WeibullMin:
            return loc + bm::quantile(bm::weibull_distribution<double, Policy>(sh, scale), q);
        case Family::InverseGamma:
            return loc + bm::quantile(bm::inverse_gamma_distribution<double, Policy>(sh, scale), q);
    }
    return kNaN;
}

double Distribution::log_pdf(double x) const {
    const double y = x - loc;
    const double sh = shape.value_or(kNaN);
    switch (family) {
        case Family::Normal: {
            const double z = (x - loc) / scale;
            return -0.5 * z * z - std::log(scale) - 0.5 * kLog2Pi;
        }
        case Family::GumbelR: {
            const double z = (x - loc) / scale;
            return -z - std::exp(-z) - std::log(scale);
        }
        default: break;
    }
    if (y <= 0.0) return -kInf;
    switch (family) {
        case Family::LogNormal: {
            const double z = (std::log(y) - std::log(scale)) / sh;
            return -0.5 * z * z - std::log(y * sh) - 0.5 * kLog2Pi;
        }
        case Family::Gamma:
            return (sh - 1.0) * std::log(y) - y / scale - std::lgamma(sh) - sh * std::log(scale);
        case Family::Exponential: return -y / scale - std::log(scale);
        case Family::WeibullMin: {
            const double z = y / scale;
            return std::log(sh / scale) + (sh - 1.0) * std::log(z) - std::pow(z, sh);
        }
        case Family::InverseGamma:
            return sh * std::log(scale) - std::lgamma(sh) - (sh + 1.0) * std::log(y) - scale / y;
        default: return kNaN;
    }
}

Histogram histogram(std::span<const double> totals, std::size_t bins) {
    if (totals.empty()) throw Error(ErrorKind::EmptyInput, "histogram of an empty sample");
    if (bins == 0) throw Error(ErrorKind::InvalidArgument, "histogram needs at least one bin");
    const auto [mn, mx] = std::minmax_element(totals.begin(), totals.end());
    double lo = *mn, hi = *mx;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    }
    h.edges.back() = hi;
    h.frequencies.assign(bins, 0);
    for (double v : totals) {
        auto idx = static_cast<std::size_t>(
            std::clamp(std::floor((v - lo) / (hi - lo) * static_cast<double>(bins)), 0.0,
                       static_cast<double>(bins - 1)));
        // Settle rounding at the edges so membership agrees with `edges`.
        while (idx > 0 && v < h.edges[idx]) --idx;
        while (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
        ++h.frequencies[idx];
    }
    return h;
}

std::string Histogram::to_csv() const {
    std::string out = "bin_low,bin_high,count\n";
    char buf[96];
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%llu\n", edges[k], edges[k + 1],
                      static_cast<unsigned long long>(frequencies[k]));
        out += buf;
    }
    return out;
}

double nearest_rank(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "quantile of an empty sample");
    const double qn = q * static_cast<double>(sorted.size());
    const double r = std::round(qn);
    // q*N that should be an integer but carries representation error.
    const double k = std::abs(qn - r) <= 1e-9 * std::max(1.0, qn) ? r : std::ceil(qn);
    const auto idx = static_cast<std::size_t>(std::clamp(k, 1.0, static_cast<double>(sorted.size())));
    return sorted[idx - 1];
}

std::vector<std::string> group_names_for(const std::vector<double>& cuts) {
    std::vector<std::string> names;
    if (cuts.empty()) return {"All"};
    names.push_back("Bottom" + pct_label(cuts.front()));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        names.push_back("Q" + pct_label(cuts[i]) + "_" + pct_label(cuts[i + 1]));
    }
    names.push_back("Top" + pct_label(1.0 - cuts.back()));
    return names;
}

QuantileClassification quantile_classify(std::span<const double> totals,
                                         const std::vector<double>& cuts) {
    if (totals.empty()) throw Error(ErrorKind::EmptyInput, "no aggregate entries to classify");
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!(cuts[i] > 0.0 && cuts[i] < 1.0) || (i > 0 && !(cuts[i] > cuts[i - 1]))) {
            throw Error(ErrorKind::InvalidArgument, "cuts must be ascending fractions in (0, 1)");
        }
    }
    std::vector<double> sorted(totals.begin(), totals.end());
    std::sort(sorted.begin(), sorted.end());

    QuantileClassification qc;
    qc.cuts = cuts;
    for (double c : cuts) qc.thresholds.push_back(nearest_rank(sorted, c));
    qc.group_names = group_names_for(cuts);
    const std::size_t groups = cuts.size() + 1;
    qc.group_sizes.assign(groups, 0);
    qc.group_totals.assign(groups, 0.0);
    qc.labels.reserve(totals.size());
    double grand = 0.0;
    for (double v : totals) {
        std::size_t g = 0;
        while (g < qc.thresholds.size() && v > qc.thresholds[g]) ++g;
        qc.labels.push_back(g);
        ++qc.group_sizes[g];
        qc.group_totals[g] += v;
        grand += v;
    }
    qc.shares.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) qc.shares[g] = qc.group_totals[g] / grand;
    return qc;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double hi = static_cast<double>(i + 1) / n;
        const double lo = static_cast<double>(i) / n;
        d = std::max({d, std::abs(hi - f), std::abs(lo - f)});
        if (std::isnan(f)) return kNaN;
    }
    return d;
}

double wasserstein_distance(std::span<const double> sorted,
                            const std::function<double(double)>& quantile) {
    const double n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        sum += std::abs(sorted[i] - quantile((static_cast<double>(i) + 0.5) / n));
    }
    return sum / n;
}

FitResult fit_distribution(std::span<const double> totals, Family family) {
    if (totals.size() < kMinFitSamples) {
        throw Error(ErrorKind::InvalidArgument, "fitting needs at least 30 samples, got " +
                                                    std::to_string(totals.size()));
    }
    for (double v : totals) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite sample value");
    }
    std::vector<double> sorted(totals.begin(), totals.end());
    std::sort(sorted.begin(), sorted.end());
    const Moments m = moments(sorted);
    if (!(m.var > 0.0) || m.min == m.max) {
        throw Error(ErrorKind::DegenerateSample, "sample has zero variance");
    }
    const double n = static_cast<double>(sorted.size());
    const double sd = std::sqrt(m.var);
    const double fixed_loc = m.min - kSupportEpsilon;

    FitResult r;
    r.dist.family = family;
    switch (family) {
        case Family::Normal: {
            r.dist.loc = m.mean;
            r.dist.scale = sd;
            r.loc_policy = "free (two-parameter MLE)";
            break;
        }
        case Family::Exponential: {
            r.dist.loc = fixed_loc;
            r.dist.scale = m.mean - fixed_loc;
            r.loc_policy = "fixed at min - 1e-9";
            break;
        }
        case Family::Gamma: {
            std::vector<double> y;
            y.reserve(sorted.size());
            for (double v : sorted) y.push_back(v - fixed_loc);
            const auto g = fit_gamma_fixed_loc(y);
            r.dist.loc = fixed_loc;
            r.dist.shape = g.shape;
            r.dist.scale = g.scale;
            r.converged = g.ok;
            r.loc_policy = "fixed at min - 1e-9";
            break;
        }
        case Family::WeibullMin: {
            std::vector<double> ly;
            ly.reserve(sorted.size());
            for (double v : sorted) ly.push_back(std::log(v - fixed_loc));
            const double mean_ly = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
            const double max_ly = *std::max_element(ly.begin(), ly.end());
            // Weighted mean of ln y under weights y^c, scaled to avoid overflow.
            auto weighted = [&](double c, double* log_mean_pow) {
                double sw = 0.0, swl = 0.0;
                for (double l : ly) {
                    const double w = std::exp(c * (l - max_ly));
                    sw += w;
                    swl += w * l;
                }
                if (log_mean_pow) *log_mean_pow = c * max_ly + std::log(sw / n);
                return swl / sw;
            };
            auto g = [&](double log_c) {
                const double c = std::exp(log_c);
                return weighted(c, nullptr) - 1.0 / c - mean_ly;
            };
            double lo = std::log(1e-4), hi = std::log(1e3);
            r.dist.loc = fixed_loc;
            r.loc_policy = "fixed at min - 1e-9";
            if (g(lo) > 0.0 || g(hi) < 0.0) {
                r.converged = false;
                const double c = g(lo) > 0.0 ? std::exp(lo) : std::exp(hi);
                double lmp = 0.0;
                weighted(c, &lmp);
                r.dist.shape = c;
                r.dist.scale = std::exp(lmp / c);
            } else {
                std::uintmax_t iters = 200;
                const auto [a, b] = bm::tools::toms748_solve(g, lo, hi, bm::tools::eps_tolerance<double>(50), iters);
                const double c = std::exp(0.5 * (a + b));
                double lmp = 0.0;
                weighted(c, &lmp);
                r.dist.shape = c;
                r.dist.scale = std::exp(lmp / c);
            }
            break;
        }
        case Family::GumbelR: {
            // beta = mean(z) - sum z e^{-z/beta} / sum e^{-z/beta}, z = x - min.
            auto weighted_mean = [&](double beta, double* log_mean_exp) {
                double sw = 0.0, swz = 0.0;
                for (double v : sorted) {
                    const double z = v - m.min;
                    const double w = std::exp(-z / beta);
                    sw += w;
                    swz += w * z;
                }
                if (log_mean_exp) *log_mean_exp = std::log(sw / n);
                return swz / sw;
            };
            const double zbar = m.mean - m.min;
            auto f = [&](double log_beta) {
                const double beta = std::exp(log_beta);
                return beta - zbar + weighted_mean(beta, nullptr);
            };
            double lo = std::log(sd * 1e-6), hi = std::log(sd * 1e4);
            double beta = std::sqrt(6.0) * sd / std::numbers::pi;
            if (f(lo) < 0.0 && f(hi) > 0.0) {
                std::uintmax_t iters = 200;
                const auto [a, b] = bm::tools::toms748_solve(f, lo, hi, bm::tools::eps_tolerance<double>(50), iters);
                beta = std::exp(0.5 * (a + b));
            } else {
                r.converged = false;
            }
            double lme = 0.0;
            weighted_mean(beta, &lme);
            r.dist.loc = m.min - beta * lme;
            r.dist.scale = beta;
            r.loc_policy = "free (two-parameter MLE)";
            break;
        }
        case Family::LogNormal: {
            const auto best = profile_loc(m.min, m.min + 10.0 * sd, [&](double loc) {
                return lognormal_profile(sorted, loc, nullptr, nullptr);
            });
            double mu = kNaN, s = kNaN;
            if (std::isfinite(best.value)) lognormal_profile(sorted, best.loc, &mu, &s);
            r.dist.loc = best.loc;
            r.dist.scale = std::exp(mu);
            r.dist.shape = s;
            r.converged = best.interior && std::isfinite(best.value);
            r.loc_policy = "profile likelihood over (-10*sd, min - 1e-9)";
            break;
        }
        case Family::InverseGamma: {
            const auto best = profile_loc(m.min, m.min + 10.0 * sd, [&](double loc) {
                return invgamma_profile(sorted, loc, nullptr, nullptr);
            });
            double a = kNaN, beta = kNaN;
            if (std::isfinite(best.value)) invgamma_profile(sorted, best.loc, &a, &beta);
            r.dist.loc = best.loc;
            r.dist.scale = beta;
            r.dist.shape = a;
            r.converged = best.interior && std::isfinite(best.value);
            r.loc_policy = "profile likelihood over (-10*sd, min - 1e-9)";
            break;
        }
    }
    return finish(std::move(r), sorted);
}

std::vector<FitResult> fit_all(std::span<const double> totals, unsigned workers) {
    constexpr std::size_t kCount = std::size(kAllFamilies);
    std::vector<FitResult> out(kCount);
    std::vector<std::exception_ptr> errors(kCount);
    auto work = [&](std::size_t i) {
        try {
            out[i] = fit_distribution(totals, kAllFamilies[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < kCount; ++i) work(i);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers && w < kCount; ++w) {
            threads.emplace_back([&, w] {
                for (std::size_t i = w; i < kCount; i += workers) work(i);
            });
        }
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<FitResult> rank_fits(std::vector<FitResult> results) {
    auto key = [](double v) { return std::isnan(v) ? kInf : v; };
    std::stable_sort(results.begin(), results.end(), [&](const FitResult& a, const FitResult& b) {
        if (key(a.ks_D) != key(b.ks_D)) return key(a.ks_D) < key(b.ks_D);
        return key(a.wasserstein) < key(b.wasserstein);
    });
    return results;
}

std::string fit_table(const std::vector<FitResult>& ranked) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-13s %8s %12s %12s %12s %10s %s\n", "family", "ks_D",
                  "wasserstein", "loc", "scale", "shape", "converged");
    out += buf;
    for (const auto& r : ranked) {
        char shape[32] = "--";
        if (r.dist.shape) {
            std::snprintf(shape, sizeof(shape), "%s=%.4f", std::string(shape_name(r.family())).c_str(),
                          *r.dist.shape);
        }
        std::snprintf(buf, sizeof(buf), "%-13s %8.4f %12.4f %12.4f %12.4f %10s %s\n",
                      std::string(to_string(r.family())).c_str(), r.ks_D, r.wasserstein, r.dist.loc,
                      r.dist.scale, shape, r.converged ? "yes" : "no");
        out += buf;
    }
    return out;
}

std::string fit_report_json(const std::vector<FitResult>& ranked, std::size_t n) {
    using nlohmann::json;
    auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
    json fits = json::array();
    json ranking = json::array();
    for (const auto& r : ranked) {
        json params = {{"loc", num(r.dist.loc)}, {"scale", num(r.dist.scale)}};
        if (r.dist.shape) params[std::string(shape_name(r.family()))] = num(*r.dist.shape);
        fits.push_back({{"family", to_string(r.family())},
                        {"params", std::move(params)},
                        {"ks_D", num(r.ks_D)},
                        {"wasserstein", num(r.wasserstein)},
                        {"log_likelihood", num(r.log_likelihood)},
                        {"converged", r.converged},
                        {"loc_policy", r.loc_policy}});
        ranking.push_back(to_string(r.family()));
    }
    json doc = {{"n", n}, {"fits", std::move(fits)}, {"ranking", std::move(ranking)}};
    return doc.dump(2) + "\n";
}

}  // namespace vantage::stats
