#include <doctest.h>

#include "vantage/error.hpp"
#include "vantage/statistics.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace vantage;
using namespace vantage::stats;

namespace {

std::vector<double> iota_sample(int n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 1.0);
    return v;
}

// Standard-library LogNormal CDF; independent of the library's Boost backend.
double lognormal_cdf(double x, double s, double loc, double scale) {
    if (x <= loc) return 0.0;
    return 0.5 * std::erfc(-std::log((x - loc) / scale) / (s * std::sqrt(2.0)));
}

std::vector<double> draw(std::size_t n, auto&& dist, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("histogram examples") {
    const std::vector<double> ones{1, 1, 1, 1};
    const auto h1 = histogram(ones, 1);
    REQUIRE(h1.frequencies.size() == 1);
    CHECK(h1.frequencies[0] == 4);

    const auto h10 = histogram(iota_sample(100), 10);
    REQUIRE(h10.frequencies.size() == 10);
    for (auto f : h10.frequencies) CHECK(f == 10);
    CHECK(h10.edges.front() == 1.0);
    CHECK(h10.edges.back() == 100.0);

    auto skewed = iota_sample(50);
    skewed.push_back(1e6);
    const auto ho = histogram(skewed, 20);
    CHECK(ho.frequencies.back() == 1);
    CHECK(ho.frequencies.front() == 50);
    CHECK(std::accumulate(ho.frequencies.begin(), ho.frequencies.end(), 0ULL) == 51);

    CHECK_THROWS_AS(histogram(std::vector<double>{}, 5), Error);
    CHECK_THROWS_AS(histogram(ones, 0), Error);
    CHECK(h1.to_csv().starts_with("bin_low,bin_high,count\n"));
}

TEST_CASE("histogram conserves counts on random data") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> n(1, 500);
    std::lognormal_distribution<double> ln(1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = draw(static_cast<std::size_t>(n(rng)), ln, trial);
        const auto h = histogram(v, 50);
        CHECK(std::accumulate(h.frequencies.begin(), h.frequencies.end(), 0ULL) == v.size());
        CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
    }
}

TEST_CASE("nearest_rank") {
    const auto v = iota_sample(100);
    CHECK(nearest_rank(v, 0.90) == 90.0);
    CHECK(nearest_rank(v, 0.905) == 91.0);
    CHECK(nearest_rank(v, 0.0) == 1.0);
    CHECK(nearest_rank(v, 1.0) == 100.0);
    const std::vector<double> three{10, 20, 30};
    CHECK(nearest_rank(three, 0.5) == 20.0);
    CHECK(nearest_rank(three, 2.0 / 3.0) == 20.0);
}

TEST_CASE("quantile_classify: totals 1..100, cut 0.90") {
    const auto qc = quantile_classify(iota_sample(100), {0.90});
    REQUIRE(qc.group_names.size() == 2);
    CHECK(qc.group_names[1] == "Top10");
    CHECK(qc.thresholds[0] == 90.0);
    CHECK(qc.group_sizes[1] == 10);
    CHECK(qc.group_totals[1] == 955.0);
    CHECK(std::abs(qc.shares[1] - 955.0 / 5050.0) < 1e-12);
    for (std::size_t i = 0; i < 100; ++i) CHECK(qc.labels[i] == (i >= 90 ? 1U : 0U));
}

TEST_CASE("quantile_classify: equal totals all fall in the bottom group") {
    const std::vector<double> v(40, 7.0);
    const auto qc = quantile_classify(v);
    CHECK(qc.group_sizes[0] == 40);
    CHECK(qc.shares[0] == 1.0);
    CHECK(qc.group_names == std::vector<std::string>{"Bottom90", "Q90_95", "Q95_99", "Top1"});
}

TEST_CASE("quantile_classify partitions and shares sum to one") {
    std::lognormal_distribution<double> ln(2.0, 1.2);
    const auto v = draw(5000, [&](auto& r) { return std::round(ln(r)) + 1; }, 9);
    const auto qc = quantile_classify(v);
    CHECK(std::accumulate(qc.group_sizes.begin(), qc.group_sizes.end(), std::size_t{0}) == v.size());
    CHECK(std::abs(std::accumulate(qc.shares.begin(), qc.shares.end(), 0.0) - 1.0) < 1e-12);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto g = qc.labels[i];
        if (g > 0) CHECK(v[i] > qc.thresholds[g - 1]);
        if (g < qc.thresholds.size()) CHECK(v[i] <= qc.thresholds[g]);
    }
}

TEST_CASE("quantile_classify rejects bad cuts") {
    const auto v = iota_sample(10);
    CHECK_THROWS_AS(quantile_classify(v, {0.9, 0.5}), Error);
    CHECK_THROWS_AS(quantile_classify(v, {0.0}), Error);
    CHECK_THROWS_AS(quantile_classify(v, {1.0}), Error);
    CHECK_THROWS_AS(quantile_classify(std::vector<double>{}, {0.5}), Error);
}

TEST_CASE("ks_statistic examples") {
    const Distribution normal{Family::Normal, 0.0, 1.0, std::nullopt};
    std::vector<double> s;
    for (double q : {0.125, 0.375, 0.625, 0.875}) s.push_back(normal.quantile(q));
    CHECK(ks_statistic(s, [&](double x) { return normal.cdf(x); }) ==
          doctest::Approx(0.125).epsilon(1e-12));
    const std::vector<double> one{0.0};
    CHECK(ks_statistic(one, [&](double x) { return normal.cdf(x); }) == doctest::Approx(0.5));
    const std::vector<double> below{-3, -2, -1};
    CHECK(ks_statistic(below, [](double) { return 0.0; }) == 1.0);
}

TEST_CASE("wasserstein_distance examples") {
    auto q = [](double p) { return 10.0 * p; };
    std::vector<double> s;
    for (int i = 1; i <= 8; ++i) s.push_back(q((i - 0.5) / 8.0));
    CHECK(wasserstein_distance(s, q) == doctest::Approx(0.0));
    for (auto& x : s) x += 2.5;
    CHECK(wasserstein_distance(s, q) == doctest::Approx(2.5));
    const std::vector<double> two{0.25, 0.75};
    CHECK(wasserstein_distance(two, [](double p) { return p; }) == 0.0);
}

TEST_CASE("rank_fits ordering") {
    FitResult ln, nm, a, b;
    ln.dist.family = Family::LogNormal;
    ln.ks_D = 0.0489;
    nm.dist.family = Family::Normal;
    nm.ks_D = 0.2358;
    auto ranked = rank_fits({nm, ln});
    CHECK(ranked[0].family() == Family::LogNormal);
    a.ks_D = b.ks_D = 0.1;
    a.wasserstein = 2.0;
    b.wasserstein = 1.0;
    a.dist.family = Family::Gamma;
    b.dist.family = Family::GumbelR;
    ranked = rank_fits({a, b});
    CHECK(ranked[0].family() == Family::GumbelR);
    CHECK(rank_fits({a}).size() == 1);
}

TEST_CASE("LogNormal fit recovers generating parameters") {
    std::lognormal_distribution<double> gen(std::log(100.0), 1.0);
    auto v = draw(10000, gen, 1234);
    const auto fit = fit_distribution(v, Family::LogNormal);
    REQUIRE(fit.dist.shape.has_value());
    CHECK(std::abs(*fit.dist.shape - 1.0) <= 0.05);
    CHECK(std::abs(fit.dist.scale - 100.0) <= 10.0);
    CHECK(fit.dist.loc <= *std::min_element(v.begin(), v.end()));
    // Library CDF agrees with the erfc form.
    for (double x : {5.0, 50.0, 100.0, 400.0}) {
        CHECK(fit.dist.cdf(x) ==
              doctest::Approx(lognormal_cdf(x, *fit.dist.shape, fit.dist.loc, fit.dist.scale))
                  .epsilon(1e-10));
    }
    std::sort(v.begin(), v.end());
    const double d_true = ks_statistic(v, [](double x) { return lognormal_cdf(x, 1.0, 0.0, 100.0); });
    CHECK(d_true < 0.02);
}

TEST_CASE("Exponential fit recovers the scale") {
    std::exponential_distribution<double> gen(1.0 / 413.0);
    const auto v = draw(10000, [&](auto& r) { return 1.0 + gen(r); }, 77);
    const auto fit = fit_distribution(v, Family::Exponential);
    CHECK(std::abs(fit.dist.scale - 413.0) / 413.0 <= 0.05);
    CHECK(fit.loc_policy.size() > 0);
}

TEST_CASE("Normal fit equals the sample mean and population sd") {
    std::normal_distribution<double> gen(20.0, 4.0);
    const auto v = draw(2000, gen, 5);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const auto fit = fit_distribution(v, Family::Normal);
    CHECK(fit.dist.loc == doctest::Approx(mean).epsilon(1e-12));
    CHECK(fit.dist.scale == doctest::Approx(std::sqrt(ss / v.size())).epsilon(1e-12));
}

TEST_CASE("Gamma, WeibullMin, GumbelR and InverseGamma fits land near the truth") {
    {
        std::gamma_distribution<double> gen(2.5, 30.0);
        const auto fit = fit_distribution(draw(10000, gen, 8), Family::Gamma);
        CHECK(std::abs(*fit.dist.shape - 2.5) / 2.5 < 0.1);
        CHECK(std::abs(fit.dist.scale - 30.0) / 30.0 < 0.1);
    }
    {
        std::weibull_distribution<double> gen(1.7, 50.0);
        const auto fit = fit_distribution(draw(10000, gen, 9), Family::WeibullMin);
        CHECK(std::abs(*fit.dist.shape - 1.7) / 1.7 < 0.1);
        CHECK(std::abs(fit.dist.scale - 50.0) / 50.0 < 0.1);
    }
    {
        std::extreme_value_distribution<double> gen(10.0, 3.0);
        const auto fit = fit_distribution(draw(10000, gen, 10), Family::GumbelR);
        CHECK(std::abs(fit.dist.loc - 10.0) < 0.15);
        CHECK(std::abs(fit.dist.scale - 3.0) / 3.0 < 0.05);
    }
    {
        // 1/Gamma(a, 1/scale) is InverseGamma(a, scale).
        std::gamma_distribution<double> gen(4.0, 1.0 / 60.0);
        const auto fit =
            fit_distribution(draw(10000, [&](auto& r) { return 1.0 / gen(r); }, 11),
                             Family::InverseGamma);
        CHECK(fit.ks_D < 0.02);
        CHECK(std::abs(fit.dist.loc) < 5.0);
    }
}

TEST_CASE("every family yields a well-formed result on a skewed sample") {
    std::lognormal_distribution<double> gen(1.5, 0.8);
    const auto v = draw(3000, [&](auto& r) { return std::round(gen(r)) + 1.0; }, 12);
    const auto fits = fit_all(v, 4);
    REQUIRE(fits.size() == std::size(kAllFamilies));
    for (const auto& f : fits) {
        CAPTURE(to_string(f.family()));
        CHECK(f.dist.scale > 0.0);
        CHECK(f.ks_D >= 0.0);
        CHECK(f.ks_D <= 1.0);
        CHECK(f.wasserstein >= 0.0);
        CHECK(std::isfinite(f.log_likelihood));
    }
    const auto sequential = fit_all(v, 1);
    for (std::size_t i = 0; i < fits.size(); ++i) CHECK(fits[i].ks_D == sequential[i].ks_D);
    const auto report = nlohmann::json::parse(fit_report_json(rank_fits(fits), v.size()));
    CHECK(report["n"] == v.size());
    CHECK(!fit_table(rank_fits(fits)).empty());
}

TEST_CASE("fit errors") {
    CHECK_THROWS_AS(fit_distribution(iota_sample(29), Family::Normal), Error);
    const std::vector<double> constant(100, 3.0);
    try {
        fit_distribution(constant, Family::LogNormal);
        FAIL("expected DegenerateSample");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateSample);
    }
}

TEST_CASE("family names round trip") {
    for (auto f : kAllFamilies) CHECK(family_from_string(to_string(f)) == f);
    CHECK(family_from_string("lognormal") == Family::LogNormal);
    CHECK_FALSE(family_from_string("cauchy").has_value());
    CHECK(shape_name(Family::LogNormal) == "s");
    CHECK(shape_name(Family::Normal).empty());
}

TEST_CASE("Distribution quantile inverts cdf") {
    const Distribution dists[] = {
        {Family::LogNormal, -2.0, 30.0, 0.7}, {Family::Gamma, 1.0, 5.0, 2.0},
        {Family::Exponential, 1.0, 7.0, std::nullopt}, {Family::WeibullMin, 0.5, 4.0, 1.3},
        {Family::Normal, 3.0, 2.0, std::nullopt}, {Family::InverseGamma, -1.0, 20.0, 3.0},
        {Family::GumbelR, 5.0, 2.0, std::nullopt}};
    for (const auto& d : dists) {
        CAPTURE(to_string(d.family));
        for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
            CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}
