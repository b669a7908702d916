#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bprh/fit.hpp"
#include "bprh/numerics.hpp"
#include "bprh/simulate.hpp"
#include "test_util.hpp"

using namespace bprh;

namespace {

Model ref_bprhm1() { return Model::bprhm1(Baseline::weibull(1.5, 1.2), 1.3, 1.2, 1.0); }

CensoredSample make_sample(const Model& m, std::size_t n, double p, std::uint64_t seed) {
    return simulate_sample(m, n, p, seed, SamplerKind::oracle);
}

}  // namespace

TEST_CASE("uncensored likelihood is the sum of log densities") {
    auto m = ref_bprhm1();
    auto sample = make_sample(m, 200, 0.0, 1);
    double expected = 0.0;
    for (const auto& pair : sample.pairs) {
        if (pair.y1 == pair.y2) {
            expected += std::log(m.diagonal_density(pair.y1));
        } else {
            expected += std::log(m.joint_density(pair.y1, pair.y2));
        }
    }
    CHECK(log_likelihood(m, sample) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("all-censored likelihood equals the log joint cdf sum") {
    auto m = ref_bprhm1();
    auto sample = make_sample(m, 50, 0.0, 2);
    for (auto& pair : sample.pairs) {
        pair.delta1 = false;
        pair.delta2 = false;
    }
    double expected = 0.0;
    for (const auto& pair : sample.pairs) {
        expected += std::log(m.joint_cdf(pair.y1, pair.y2));
    }
    CHECK(log_likelihood(m, sample) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("half-censored contributions match a finite-difference oracle") {
    // A 3-pair toy sample: each half-censored contribution must equal the
    // derivative of the joint cdf in the observed coordinate.
    auto m = ref_bprhm1();
    CensoredSample sample;
    sample.pairs = {
        {0.6, 0.9, false, true},   // y1 censored at 0.6
        {1.1, 0.4, true, false},   // y2 censored at 0.4
        {0.8, 0.8001, true, true},
    };
    double expected = 0.0;
    {
        double h = 1e-5;
        double fd1 = (m.joint_cdf(0.6, 0.9 + h) - m.joint_cdf(0.6, 0.9 - h)) / (2 * h);
        double fd2 = (m.joint_cdf(1.1 + h, 0.4) - m.joint_cdf(1.1 - h, 0.4)) / (2 * h);
        expected = std::log(fd1) + std::log(fd2) + std::log(m.joint_density(0.8, 0.8001));
    }
    CHECK(log_likelihood(m, sample) == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("adding a tied pair adds exactly the log diagonal density") {
    auto m = ref_bprhm1();
    auto sample = make_sample(m, 100, 0.0, 3);
    double before = log_likelihood(m, sample);
    double y = 0.7;
    sample.pairs.push_back({y, y, true, true});
    double after = log_likelihood(m, sample);
    CHECK(after - before == doctest::Approx(std::log(m.diagonal_density(y))).epsilon(1e-12));
}

TEST_CASE("bprhm2 assigns ties zero likelihood") {
    auto m2 = Model::bprhm2(Baseline::inverse_weibull(1.2), 1.2, 1.4, 1.6, 1.8);
    CensoredSample sample;
    for (int i = 0; i < 20; ++i) sample.pairs.push_back({0.5 + 0.01 * i, 0.9 + 0.01 * i, true, true});
    CHECK(std::isfinite(log_likelihood(m2, sample)));
    sample.pairs.push_back({0.75, 0.75, true, true});
    CHECK(log_likelihood(m2, sample) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("far outlier strictly decreases the log likelihood") {
    auto m = ref_bprhm1();
    auto sample = make_sample(m, 200, 0.0, 4);
    double base = log_likelihood(m, sample);
    auto worse = sample;
    worse.pairs[0].y1 = 40.0;
    worse.pairs[0].y2 = 55.0;
    CHECK(log_likelihood(m, worse) < base);
}

TEST_CASE("nonpositive contributions yield -infinity, never a crash") {
    auto m = ref_bprhm1();
    CensoredSample sample;
    sample.pairs = {{-1.0, 0.5, true, true}};  // below the support
    CHECK(log_likelihood(m, sample) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("mle recovers the generating parameters within 15 percent") {
    auto truth = ref_bprhm1();
    auto sample = make_sample(truth, 10000, 0.0, 2024);
    FitOptions options;
    options.starts = 2;
    options.seed = 9;
    auto fit = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
    REQUIRE(fit.converged);
    const auto& p = fit.model.params1();
    CHECK(fit.model.baseline().parameter(0) == doctest::Approx(1.5).epsilon(0.15));
    CHECK(fit.model.baseline().parameter(1) == doctest::Approx(1.2).epsilon(0.15));
    CHECK(p.alpha1 == doctest::Approx(1.3).epsilon(0.15));
    CHECK(p.alpha2 == doctest::Approx(1.2).epsilon(0.15));
    CHECK(p.alpha3 == doctest::Approx(1.0).epsilon(0.15));
    CHECK(fit.aic == doctest::Approx(2.0 * fit.k - 2.0 * fit.log_likelihood).epsilon(1e-12));
}

TEST_CASE("reported optimum matches a re-evaluation at the reported parameters") {
    auto truth = ref_bprhm1();
    auto sample = make_sample(truth, 500, 0.0, 5);
    FitOptions options;
    options.starts = 2;
    auto fit = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
    CHECK(log_likelihood(fit.model, sample) ==
          doctest::Approx(fit.log_likelihood).epsilon(1e-9));
}

TEST_CASE("identical options give identical fits") {
    auto sample = make_sample(ref_bprhm1(), 300, 0.0, 6);
    FitOptions options;
    options.starts = 3;
    options.seed = 17;
    auto a = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
    auto b = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
    CHECK(a.log_likelihood == b.log_likelihood);
    CHECK(a.model.params1().alpha1 == b.model.params1().alpha1);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("censored fits work and use the censoring contributions") {
    auto truth = Model::bprhm2(Baseline::inverse_weibull(2.1), 1.5, 1.6, 2.0, 1.8);
    auto sample = simulate_sample(truth, 4000, 0.2, 333, SamplerKind::conditional);
    FitOptions options;
    options.starts = 2;
    auto fit = mle_fit(ModelFamily::bprhm2, BaselineFamily::inverse_weibull, sample, options);
    REQUIRE(fit.converged);
    CHECK(fit.model.baseline().parameter(0) == doctest::Approx(2.1).epsilon(0.2));
    CHECK(fit.model.theta_max() == doctest::Approx(3.1).epsilon(0.2));
}

TEST_CASE("mle consistency: error shrinks from n=100 to n=10000") {
    auto truth = ref_bprhm1();
    std::vector<double> err_small, err_large;
    const std::vector<double> target = {1.5, 1.2, 1.3, 1.2, 1.0};
    for (int seed = 0; seed < 20; ++seed) {
        for (std::size_t n : {std::size_t(100), std::size_t(10000)}) {
            auto sample = make_sample(truth, n, 0.0, 6000 + seed);
            FitOptions options;
            options.starts = 1;
            options.max_iterations = 3000;
            auto fit = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
            const auto& p = fit.model.params1();
            std::vector<double> est = {fit.model.baseline().parameter(0),
                                       fit.model.baseline().parameter(1), p.alpha1, p.alpha2,
                                       p.alpha3};
            double rel = 0.0;
            for (std::size_t i = 0; i < est.size(); ++i) {
                rel = std::max(rel, std::abs(est[i] - target[i]) / target[i]);
            }
            (n == 100 ? err_small : err_large).push_back(rel);
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[v.size() / 2] + v[(v.size() - 1) / 2]);
    };
    CHECK(median(err_large) < median(err_small));
}

TEST_CASE("standard errors from the inverse hessian when positive definite") {
    auto sample = make_sample(ref_bprhm1(), 3000, 0.0, 8);
    FitOptions options;
    options.starts = 1;
    options.standard_errors = true;
    auto fit = mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options);
    REQUIRE(fit.standard_errors.has_value());
    for (double se : *fit.standard_errors) {
        CHECK(se > 0.0);
        CHECK(se < 1.0);  // n = 3000 pins every parameter well below unit error
    }
}

TEST_CASE("sample-size guard") {
    auto sample = make_sample(ref_bprhm1(), 8, 0.0, 9);
    CHECK_THROWS_AS(mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, {}),
                    std::invalid_argument);
}

TEST_CASE("aic table sorts ascending with delta column") {
    auto sample = make_sample(ref_bprhm1(), 400, 0.0, 10);
    FitOptions options;
    options.starts = 1;
    std::vector<FitResult> fits;
    fits.push_back(mle_fit(ModelFamily::bprhm1, BaselineFamily::weibull, sample, options));
    fits.push_back(mle_fit(ModelFamily::bprhm1, BaselineFamily::exponential, sample, options));
    fits.push_back(mle_fit(ModelFamily::bprhm1, BaselineFamily::rayleigh, sample, options));
    auto rows = aic_table(fits);
    CHECK(rows.size() == 3);
    CHECK(rows[0].delta == 0.0);
    CHECK(rows[0].aic <= rows[1].aic);
    CHECK(rows[1].aic <= rows[2].aic);
    CHECK(rows[1].delta == doctest::Approx(rows[1].aic - rows[0].aic));
    CHECK_THROWS_AS(aic_table({fits[0]}), std::invalid_argument);

    // Equal log-likelihood with different k: smaller k ranks first.
    FitResult a = fits[0];
    FitResult b = fits[0];
    a.k = 4;
    a.aic = 2 * 4 - 2 * a.log_likelihood;
    b.k = 5;
    b.aic = 2 * 5 - 2 * b.log_likelihood;
    auto ranked = aic_table({b, a});
    CHECK(ranked[0].fit_index == 1);

    // Exact ties keep stable input order.
    auto tied = aic_table({a, a});
    CHECK(tied[0].fit_index == 0);
    CHECK(tied[1].fit_index == 1);
}
