#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "spotcast/lstsq.hpp"
#include "spotcast/seasonal.hpp"

using namespace spotcast;
using namespace spotcast::seasonal;

namespace {
const DayStamp kMonday = days_from_civil(2013, 1, 7);

std::vector<double> sinusoid(std::size_t n, double period, double amp, double phase = 0.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period + phase);
    }
    return v;
}
}  // namespace

TEST_CASE("moving average") {
    const auto m = moving_average(std::vector<double>{1, 2, 3, 4}, 3);
    REQUIRE(m.size() == 4);
    CHECK(m[0] == 1.5);
    CHECK(m[1] == 2.0);
    CHECK(m[2] == 3.0);
    CHECK(m[3] == 3.5);
    const std::vector<double> v{4, -1, 9, 2.5};
    CHECK(moving_average(v, 1) == v);
    for (double x : moving_average(std::vector<double>(9, 6.25), 5)) CHECK(x == doctest::Approx(6.25));
    CHECK_THROWS_AS((void)moving_average(v, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)moving_average(v, 5), std::invalid_argument);
}

TEST_CASE("weekday profile") {
    DailySeries s{kMonday, std::vector<double>(14, 3.0)};
    s.values[0] = 10.0;
    s.values[7] = 20.0;
    auto p = weekday_profile(s);
    CHECK(p[0] == 15.0);
    CHECK(p[1] == 3.0);
    s.values[7] = 10.0;
    CHECK(weekday_profile(s)[0] == 10.0);
    for (double x : weekday_profile(DailySeries{kMonday + 3, std::vector<double>(21, 8.0)})) CHECK(x == 8.0);
    CHECK_THROWS_AS((void)weekday_profile(DailySeries{kMonday, std::vector<double>(13, 1.0)}),
                    std::invalid_argument);
}

TEST_CASE("deseasonalize and its inverse") {
    const WeekdayProfile p{10, 1, 2, 3, 4, 5, 6};
    std::vector<double> own(14);
    for (std::size_t i = 0; i < own.size(); ++i) own[i] = p[i % 7];
    for (double x : deseasonalize(own, kMonday, p)) CHECK(x == 0.0);
    CHECK(deseasonalize(std::vector<double>{50.0}, kMonday, p)[0] == 40.0);
    const std::vector<double> v{5, -2, 7.5};
    CHECK(deseasonalize(v, kMonday, WeekdayProfile{}) == v);

    oracle::Gen g(1);
    std::vector<double> x(40);
    for (auto& xi : x) xi = 30.0 * g.normal();
    const WeekdayProfile q{1.1, -2.2, 3.3, 0.4, 5.5, -6.6, 7.7};
    const auto back = reseasonalize(deseasonalize(x, kMonday + 2, q), kMonday + 2, q);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-15));
}

TEST_CASE("difference") {
    CHECK(difference(std::vector<double>{5, 7, 4}) == std::vector<double>{2, -3});
    for (double d : difference(std::vector<double>(6, 3.0))) CHECK(d == 0.0);
    std::vector<double> ramp(10);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1.5 + 0.25 * static_cast<double>(i);
    for (double d : difference(ramp)) CHECK(d == 0.25);
    CHECK_THROWS_AS((void)difference(std::vector<double>{1.0}), std::invalid_argument);

    std::vector<double> steps{0.5, -1, 2, 3}, cum{0.0};
    for (double s : steps) cum.push_back(cum.back() + s);
    CHECK(difference(cum) == steps);
}

TEST_CASE("dickey-fuller") {
    CHECK(dickey_fuller_critical_value(Significance::OnePercent) == -3.43);
    CHECK(dickey_fuller_critical_value(Significance::FivePercent) == -2.86);
    CHECK(dickey_fuller_critical_value(Significance::TenPercent) == -2.57);

    oracle::Gen g(12);
    std::vector<double> noise(1000), walk(1000);
    double level = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        noise[i] = g.normal();
        level += g.normal();
        walk[i] = level;
    }
    const auto v = dickey_fuller(noise);
    CHECK(v.reject_unit_root);
    CHECK(v.reject_unit_root == (v.statistic < v.critical_value));

    // Adding a constant leaves the t-ratio unchanged.
    auto shifted = walk;
    for (auto& x : shifted) x += 1234.5;
    CHECK(dickey_fuller(shifted).statistic == doctest::Approx(dickey_fuller(walk).statistic).epsilon(1e-9));

    CHECK_THROWS_AS((void)dickey_fuller(std::vector<double>(100, 2.0)), std::domain_error);
    CHECK_THROWS_AS((void)dickey_fuller(std::vector<double>(24, 2.0)), std::invalid_argument);
}

TEST_CASE("dominant period") {
    const PeriodRange range{2, 60};
    CHECK(dominant_period(sinusoid(700, 7.0, 1.0), range) == 7);

    auto mixed = sinusoid(840, 7.0, 2.0);
    const auto slow = sinusoid(840, 30.0, 1.0, 0.3);
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += slow[i];
    CHECK(dominant_period(mixed, range) == 7);
    auto scaled = mixed;
    for (auto& x : scaled) x *= 37.0;
    CHECK(dominant_period(scaled, range) == dominant_period(mixed, range));

    // White noise has no peak 3x above the median magnitude in most seeds.
    int none = 0;
    for (int s = 0; s < 20; ++s) {
        oracle::Gen g(300 + s);
        std::vector<double> n(700);
        for (auto& x : n) x = g.normal();
        none += dominant_period(n, range).has_value() ? 0 : 1;
    }
    CHECK(none >= 18);
}

TEST_CASE("harmonic fits") {
    HarmonicFit truth;
    truth.mean_level = 3.0;
    truth.period = 24.0;
    oracle::Gen g(4);
    for (int k = 0; k < 8; ++k) {
        truth.cos_coeffs.push_back(g.normal());
        truth.sin_coeffs.push_back(g.normal());
    }
    std::vector<double> y(200);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = truth.evaluate(static_cast<double>(i) * 0.37);
    std::vector<double> t(200);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) * 0.37;
    const auto fit = fit_harmonics(t, y, 8, 24.0);
    CHECK(fit.order() == 8);
    CHECK(std::abs(fit.mean_level - 3.0) <= 1e-8);
    for (int k = 0; k < 8; ++k) {
        CHECK(std::abs(fit.cos_coeffs[k] - truth.cos_coeffs[k]) <= 1e-8);
        CHECK(std::abs(fit.sin_coeffs[k] - truth.sin_coeffs[k]) <= 1e-8);
    }

    const auto flat = fit_harmonics(std::vector<double>(50, 7.0), 3, 25.0);
    CHECK(flat.mean_level == doctest::Approx(7.0).epsilon(1e-12));
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(flat.cos_coeffs[k]) <= 1e-10);
        CHECK(std::abs(flat.sin_coeffs[k]) <= 1e-10);
    }
    CHECK_THROWS_AS((void)fit_harmonics(std::vector<double>(16, 1.0), 8, 16.0), linalg::RankDeficientError);
}

TEST_CASE("harmonic fit is a least-squares minimum") {
    oracle::Gen g(21);
    std::vector<double> y(120);
    for (auto& v : y) v = 10.0 * g.normal();
    const auto fit = fit_harmonics(y, 4, 30.0);
    const auto rss = [&](const HarmonicFit& h) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double e = y[i] - h.evaluate(static_cast<double>(i));
            s += e * e;
        }
        return s;
    };
    const double base = rss(fit);
    for (int k = 0; k <= 2 * 4; ++k) {
        for (double d : {-1e-3, 1e-3}) {
            auto h = fit;
            if (k == 0) h.mean_level += d;
            else if (k <= 4) h.cos_coeffs[k - 1] += d;
            else h.sin_coeffs[k - 5] += d;
            CHECK(rss(h) > base);
        }
    }
}

TEST_CASE("decomposition invariants") {
    oracle::Gen g(77);
    DailySeries s{kMonday + 2, std::vector<double>(70)};
    for (std::size_t i = 0; i < s.size(); ++i) {
        s.values[i] = 40.0 + 0.1 * static_cast<double>(i) + (s.day_of_week(i) >= 6 ? -8.0 : 2.0) +
                      g.normal();
    }
    const auto d = decompose(s, 7);
    CHECK(d.period == 7);
    CHECK(d.trend.size() == s.size());
    CHECK(d.residual.size() == s.size() - 1);
    double sum = 0.0;
    for (double p : d.seasonal_profile) sum += p;
    CHECK(sum == doctest::Approx(7.0 * (sum / 7.0)));
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(d.deseasonalized[i] + d.seasonal_at(i) == doctest::Approx(s.values[i]).epsilon(1e-14));
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        CHECK(d.residual[i] == doctest::Approx(d.deseasonalized[i + 1] - d.deseasonalized[i]));
    }
    // Weekends sit well below weekdays in the profile.
    CHECK(d.seasonal_profile[5] < d.seasonal_profile[2] - 5.0);

    std::ostringstream out;
    write_decomposition_csv(out, d);
    const std::string text = out.str();
    CHECK(text.rfind("t,trend,seasonal,residual\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(s.size() + 1));
}
