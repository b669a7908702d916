#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bprh/model.hpp"
#include "bprh/numerics.hpp"
#include "bprh/rng.hpp"
#include "test_util.hpp"

using namespace bprh;

namespace {

Model ref_bprhm1() { return Model::bprhm1(Baseline::weibull(1.5, 1.2), 1.3, 1.2, 1.0); }
Model ref_bprhm2() { return Model::bprhm2(Baseline::inverse_weibull(1.2), 1.2, 1.4, 1.6, 1.8); }

}  // namespace

TEST_CASE("constructor validation lists the offending parameter") {
    auto w = Baseline::weibull(1.5, 1.2);
    CHECK(ref_bprhm1().theta_max() == doctest::Approx(3.5));
    CHECK_THROWS_WITH_AS(Model::bprhm1(w, 1.3, 0.0, 1.0), doctest::Contains("alpha2"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(Model::bprhm2(w, 1.0, 1.0, -0.5, 1.0), doctest::Contains("theta1p"),
                         std::invalid_argument);
    CHECK(ref_bprhm2().theta_max() == doctest::Approx(2.6));
}

TEST_CASE("joint cdf closed values and diagonal law") {
    auto m1 = ref_bprhm1();
    // F0(1)^1.3 * F0(0.5)^2.2 for the Weibull(1.5,1.2) baseline.
    CHECK(m1.joint_cdf(1.0, 0.5) == doctest::Approx(0.14293324866055550).epsilon(1e-12));
    auto m2 = ref_bprhm2();
    CHECK(m2.joint_cdf(1.0, 0.8) == doctest::Approx(0.047391029608612124).epsilon(1e-12));
    CHECK(m2.joint_cdf(0.7, 1.1) == doctest::Approx(0.041875158602291211).epsilon(1e-12));
    for (const auto& m : {m1, m2}) {
        for (double q : {0.2, 0.5, 0.8}) {
            double y = m.baseline().quantile(q);
            CHECK(m.joint_cdf(y, y) ==
                  doctest::Approx(std::pow(q, m.theta_max())).epsilon(1e-12));
            CHECK(m.joint_cdf(y, y) == doctest::Approx(m.max_cdf(y)).epsilon(1e-14));
        }
    }
}

TEST_CASE("joint cdf boundary reduces to the marginal") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        double top = m.baseline().quantile(1.0 - 1e-14);
        for (double q : {0.2, 0.6, 0.9}) {
            double y = m.baseline().quantile(q);
            CHECK(m.joint_cdf(y, top) == doctest::Approx(m.marginal_cdf(1, y)).epsilon(1e-10));
            CHECK(m.joint_cdf(top, y) == doctest::Approx(m.marginal_cdf(2, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("max cdf closed value") {
    auto m1 = ref_bprhm1();
    double y = m1.baseline().quantile(0.5);
    CHECK(m1.max_cdf(y) == doctest::Approx(0.088388347648318441).epsilon(1e-12));  // 0.5^3.5
}

TEST_CASE("region probabilities") {
    auto r1 = ref_bprhm1().region_probabilities();
    CHECK(r1.y1_greater == doctest::Approx(1.3 / 3.5).epsilon(1e-15));
    CHECK(r1.y1_less == doctest::Approx(1.2 / 3.5).epsilon(1e-15));
    CHECK(r1.tie == doctest::Approx(1.0 / 3.5).epsilon(1e-15));
    auto r2 = ref_bprhm2().region_probabilities();
    CHECK(r2.y1_greater == doctest::Approx(1.2 / 2.6).epsilon(1e-15));
    CHECK(r2.y1_less == doctest::Approx(1.4 / 2.6).epsilon(1e-15));
    CHECK(r2.tie == 0.0);
    CHECK(r1.y1_greater + r1.y1_less + r1.tie == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bprhm2 mixture weights sum to one") {
    auto model = ref_bprhm2();
    const auto& p = model.params2();
    double th = p.theta1 + p.theta2;
    for (int i = 1; i <= 2; ++i) {
        double ti = i == 1 ? p.theta1 : p.theta2;
        double to = i == 1 ? p.theta2 : p.theta1;
        double tip = i == 1 ? p.theta1p : p.theta2p;
        CHECK(to / (th - tip) + (ti - tip) / (th - tip) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("joint density matches the finite-difference mixed partial") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(7, 3);
        for (int t = 0; t < 40; ++t) {
            double y1 = m.baseline().quantile(0.1 + 0.8 * rng.next_unit());
            double y2 = m.baseline().quantile(0.1 + 0.8 * rng.next_unit());
            if (std::abs(y1 - y2) < 0.05) continue;
            double h1 = 1e-4 * std::max(1.0, std::abs(y1));
            double h2 = 1e-4 * std::max(1.0, std::abs(y2));
            double fd = testutil::mixed_partial(m, y1, y2, h1, h2);
            CHECK(m.joint_density(y1, y2) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("bprhm1 off-diagonal mass plus diagonal mass is one") {
    auto m = ref_bprhm1();
    const auto& f0 = m.baseline();
    double lo = f0.quantile(1e-10), hi = f0.quantile(1.0 - 1e-10);
    double off = testutil::integrate_density_rect(m, lo, hi, lo, hi);
    double diag = testutil::integrate_support(m, [&](double y) { return m.diagonal_density(y); });
    CHECK(diag == doctest::Approx(1.0 / 3.5).epsilon(1e-7));  // alpha3 / theta
    CHECK(off + diag == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(off == doctest::Approx(1.0 - 1.0 / 3.5).epsilon(1e-6));
}

TEST_CASE("bprhm2 density is normalized") {
    auto m = ref_bprhm2();
    const auto& f0 = m.baseline();
    double lo = f0.quantile(1e-10), hi = f0.quantile(1.0 - 1e-10);
    double mass = testutil::integrate_density_rect(m, lo, hi, lo, hi);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(m.diagonal_density(1.0), std::invalid_argument);
}

TEST_CASE("diagonal density errors and limits") {
    auto m = ref_bprhm1();
    CHECK_THROWS_AS(m.joint_density(1.0, 1.0), std::invalid_argument);
    auto small = Model::bprhm1(Baseline::weibull(1.5, 1.2), 1.3, 1.2, 1e-12);
    double y = m.baseline().quantile(0.5);
    CHECK(small.diagonal_density(y) < 1e-11);  // alpha3 -> 0 kills the singular part
}

TEST_CASE("bprhm1 factorizes into the marginal product as alpha3 -> 0") {
    auto m = Model::bprhm1(Baseline::weibull(1.5, 1.2), 1.3, 1.2, 1e-8);
    for (double q1 : {0.3, 0.7}) {
        for (double q2 : {0.2, 0.8}) {
            double y1 = m.baseline().quantile(q1);
            double y2 = m.baseline().quantile(q2) * 1.0000001;
            double product = m.marginal_pdf(1, y1) * m.marginal_pdf(2, y2);
            CHECK(m.joint_density(y1, y2) == doctest::Approx(product).epsilon(1e-6));
        }
    }
}

TEST_CASE("bprhm2 marginal agrees with quadrature of the joint density") {
    auto m = ref_bprhm2();
    const auto& f0 = m.baseline();
    double lo = f0.quantile(1e-11), hi = f0.quantile(1.0 - 1e-11);
    for (double q : {0.25, 0.6, 0.85}) {
        double y = m.marginal_quantile(1, q);
        double mass = testutil::integrate_density_rect(m, lo, y, lo, hi);
        CHECK(mass == doctest::Approx(m.marginal_cdf(1, y)).epsilon(1e-6));
    }
}

TEST_CASE("bprhm2 degenerate marginal branch is continuous") {
    auto f0 = Baseline::inverse_weibull(1.2);
    // theta1 + theta2 == theta1' triggers the logarithmic branch exactly.
    auto degenerate = Model::bprhm2(f0, 1.2, 1.4, 2.6, 1.8);
    auto near = Model::bprhm2(f0, 1.2, 1.4, 2.6 + 1e-7, 1.8);
    for (double q : {0.2, 0.5, 0.8}) {
        double y = f0.quantile(q);
        CHECK(degenerate.marginal_cdf(1, y) ==
              doctest::Approx(near.marginal_cdf(1, y)).epsilon(1e-6));
        double y2 = f0.quantile(0.9);
        CHECK(degenerate.joint_cdf(y, y2) ==
              doctest::Approx(near.joint_cdf(y, y2)).epsilon(1e-6));
    }
    // Degenerate marginal still matches density quadrature.
    double lo = f0.quantile(1e-11), hi = f0.quantile(1.0 - 1e-11);
    double y = degenerate.marginal_quantile(1, 0.5);
    double mass = testutil::integrate_density_rect(degenerate, lo, y, lo, hi);
    CHECK(mass == doctest::Approx(degenerate.marginal_cdf(1, y)).epsilon(1e-6));
}

TEST_CASE("marginal quantile round trips") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(11, 0);
        for (int i = 0; i < 200; ++i) {
            double u = rng.next_unit();
            for (int c : {1, 2}) {
                CHECK(std::abs(m.marginal_cdf(c, m.marginal_quantile(c, u)) - u) < 1e-8);
            }
        }
        double med = m.marginal_quantile(1, 0.5);
        CHECK(med > m.baseline().support_lower());
        CHECK(med < m.baseline().support_upper());
        CHECK_THROWS_AS(m.marginal_quantile(1, 1.5), std::domain_error);
    }
}

TEST_CASE("bprhm1 marginal quantile reduces to the baseline closed form") {
    auto m = ref_bprhm1();
    for (double u : {0.1, 0.5, 0.9}) {
        CHECK(m.marginal_quantile(1, u) ==
              doctest::Approx(m.baseline().quantile(std::pow(u, 1.0 / 2.3))).epsilon(1e-12));
        CHECK(m.marginal_quantile(2, u) ==
              doctest::Approx(m.baseline().quantile(std::pow(u, 1.0 / 2.2))).epsilon(1e-12));
    }
}

TEST_CASE("marginal cdf tends to one at the upper support") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        double top = m.baseline().quantile(1.0 - 1e-15);
        CHECK(m.marginal_cdf(1, top) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.marginal_cdf(2, top) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("joint cdf is componentwise monotone") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(21, 0);
        for (int t = 0; t < 200; ++t) {
            double y1 = m.baseline().quantile(0.02 + 0.96 * rng.next_unit());
            double y2 = m.baseline().quantile(0.02 + 0.96 * rng.next_unit());
            double step = 0.01 * std::max(1.0, std::abs(y1));
            CHECK(m.joint_cdf(y1 + step, y2) >= m.joint_cdf(y1, y2));
            CHECK(m.joint_cdf(y1, y2 + step) >= m.joint_cdf(y1, y2));
        }
    }
}

TEST_CASE("rectangle inequality holds on random rectangles") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(22, 0);
        for (int t = 0; t < 500; ++t) {
            double a1 = m.baseline().quantile(0.02 + 0.5 * rng.next_unit());
            double a2 = m.baseline().quantile(0.02 + 0.5 * rng.next_unit());
            double b1 = a1 + std::abs(m.baseline().quantile(0.55 + 0.4 * rng.next_unit()) - a1);
            double b2 = a2 + std::abs(m.baseline().quantile(0.55 + 0.4 * rng.next_unit()) - a2);
            double mass = m.joint_cdf(b1, b2) - m.joint_cdf(a1, b2) - m.joint_cdf(b1, a2) +
                          m.joint_cdf(a1, a2);
            CHECK(mass >= -1e-12);
        }
    }
}

TEST_CASE("roy vector matches finite differences of ln F") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(23, 0);
        for (int t = 0; t < 30; ++t) {
            double y1 = m.baseline().quantile(0.15 + 0.7 * rng.next_unit());
            double y2 = m.baseline().quantile(0.15 + 0.7 * rng.next_unit());
            if (std::abs(y1 - y2) < 0.08) continue;
            auto v = m.rhr_vector_roy(y1, y2);
            double h1 = 1e-5 * std::max(1.0, std::abs(y1));
            double h2 = 1e-5 * std::max(1.0, std::abs(y2));
            double fd1 = testutil::deriv(
                [&](double t1) { return std::log(m.joint_cdf(t1, y2)); }, y1, h1);
            double fd2 = testutil::deriv(
                [&](double t2) { return std::log(m.joint_cdf(y1, t2)); }, y2, h2);
            CHECK(v.lambda1 == doctest::Approx(fd1).epsilon(1e-5));
            CHECK(v.lambda2 == doctest::Approx(fd2).epsilon(1e-5));
        }
    }
}

TEST_CASE("roy vector piecewise table for bprhm1") {
    auto m = ref_bprhm1();
    const auto& f0 = m.baseline();
    double y1 = f0.quantile(0.3), y2 = f0.quantile(0.7);
    auto v = m.rhr_vector_roy(y1, y2);  // y1 < y2
    CHECK(v.lambda1 == doctest::Approx(2.3 * f0.reversed_hazard(y1)).epsilon(1e-12));
    CHECK(v.lambda2 == doctest::Approx(1.2 * f0.reversed_hazard(y2)).epsilon(1e-12));
    auto w = m.rhr_vector_roy(y2, y1);  // y1 > y2
    CHECK(w.lambda1 == doctest::Approx(1.3 * f0.reversed_hazard(y2)).epsilon(1e-12));
    CHECK(w.lambda2 == doctest::Approx(2.2 * f0.reversed_hazard(y1)).epsilon(1e-12));
    auto d = m.rhr_vector_roy(y1, y1);
    CHECK(d.lambda1 == doctest::Approx(3.5 * f0.reversed_hazard(y1)).epsilon(1e-12));
    CHECK_THROWS_AS(m.rhr_vector_roy(-5.0, 1.0), std::domain_error);
}

TEST_CASE("roy vector components tend to marginal rates under independence") {
    auto m = Model::bprhm1(Baseline::weibull(1.5, 1.2), 1.3, 1.2, 1e-9);
    const auto& f0 = m.baseline();
    double y1 = f0.quantile(0.4), y2 = f0.quantile(0.6);
    auto v = m.rhr_vector_roy(y1, y2);
    CHECK(v.lambda1 == doctest::Approx(1.3 * f0.reversed_hazard(y1)).epsilon(1e-6));
    CHECK(v.lambda2 == doctest::Approx(1.2 * f0.reversed_hazard(y2)).epsilon(1e-6));
}

TEST_CASE("roy integrals reconstruct the joint cdf") {
    // exp(-int_{y1}^{b} marginal rate - int_{y2}^{b} lambda2(v | Y1 <= y1) dv)
    // recovers F(y1, y2); integrals by quadrature in t = ln F0(v).
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        const auto& f0 = m.baseline();
        for (auto [q1, q2] : {std::pair{0.3, 0.6}, std::pair{0.7, 0.4}, std::pair{0.5, 0.5}}) {
            double y1 = f0.quantile(q1), y2 = f0.quantile(q2);
            auto marginal_rate_integrand = [&](double t) {
                double v = f0.quantile(std::exp(t));
                return m.marginal_pdf(1, v) / m.marginal_cdf(1, v) / f0.reversed_hazard(v);
            };
            double i1 = -integrate_adaptive(marginal_rate_integrand, f0.log_cdf(y1), -1e-13, 1e-11);
            auto lambda2_integrand = [&](double t) {
                double v = f0.quantile(std::exp(t));
                return m.rhr_vector_roy(y1, v).lambda2 / f0.reversed_hazard(v);
            };
            // Split at the diagonal crossing where the rate is only piecewise smooth.
            double t_lo = f0.log_cdf(y2), t_mid = f0.log_cdf(y1), t_hi = -1e-13;
            double i2;
            if (t_mid > t_lo && t_mid < t_hi) {
                i2 = -integrate_adaptive(lambda2_integrand, t_lo, t_mid, 1e-11) -
                     integrate_adaptive(lambda2_integrand, t_mid, t_hi, 1e-11);
            } else {
                i2 = -integrate_adaptive(lambda2_integrand, t_lo, t_hi, 1e-11);
            }
            CHECK(std::exp(i1 + i2) == doctest::Approx(m.joint_cdf(y1, y2)).epsilon(1e-6));
        }
    }
}

TEST_CASE("three-component vector closed forms") {
    auto m2 = ref_bprhm2();
    const auto& f0 = m2.baseline();
    double y1 = f0.quantile(0.35), y2 = f0.quantile(0.75);
    auto v = m2.rhr_vector_cond(y1, y2);
    CHECK(v.diagonal_sum == doctest::Approx(2.6 * f0.reversed_hazard(y2)).epsilon(1e-12));
    CHECK(v.conditional12 == doctest::Approx(1.6 * f0.reversed_hazard(y1)).epsilon(1e-12));
    CHECK(v.conditional21 == doctest::Approx(1.8 * f0.reversed_hazard(y2)).epsilon(1e-12));

    auto m1 = ref_bprhm1();
    const auto& g0 = m1.baseline();
    double x1 = g0.quantile(0.3), x2 = g0.quantile(0.8);
    auto w = m1.rhr_vector_cond(x1, x2);
    CHECK(w.diagonal_sum == doctest::Approx(3.5 * g0.reversed_hazard(x2)).epsilon(1e-12));
    CHECK(w.conditional12 == doctest::Approx(2.3 * g0.reversed_hazard(x1)).epsilon(1e-10));
    CHECK(std::isnan(w.conditional21));
}

TEST_CASE("conditional component matches finite differences of the conditional cdf") {
    // r_{Y:12}(y1|y2) = d/dy1 ln F_{Y1|Y2=y2}(y1) with the conditional cdf
    // computed from the joint density by quadrature.
    auto m2 = ref_bprhm2();
    const auto& f0 = m2.baseline();
    double y2 = f0.quantile(0.75);
    for (double q : {0.25, 0.45}) {
        double y1 = f0.quantile(q);
        auto cond_cdf = [&](double t) {
            return integrate_adaptive([&](double s) { return m2.joint_density(s, y2); },
                                      f0.quantile(1e-12), t, 1e-12);
        };
        double h = 1e-4 * std::max(1.0, y1);
        double fd = testutil::deriv([&](double t) { return std::log(cond_cdf(t)); }, y1, h);
        CHECK(m2.rhr_vector_cond(y1, y2).conditional12 == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("cdf partial derivatives match finite differences") {
    for (const auto& m : {ref_bprhm1(), ref_bprhm2()}) {
        RngStream rng(29, 0);
        for (int t = 0; t < 30; ++t) {
            double y1 = m.baseline().quantile(0.15 + 0.7 * rng.next_unit());
            double y2 = m.baseline().quantile(0.15 + 0.7 * rng.next_unit());
            if (std::abs(y1 - y2) < 0.08) continue;
            double h1 = 1e-5 * std::max(1.0, std::abs(y1));
            double h2 = 1e-5 * std::max(1.0, std::abs(y2));
            double fd1 =
                testutil::deriv([&](double t1) { return m.joint_cdf(t1, y2); }, y1, h1);
            double fd2 =
                testutil::deriv([&](double t2) { return m.joint_cdf(y1, t2); }, y2, h2);
            CHECK(m.cdf_partial(1, y1, y2) == doctest::Approx(fd1).epsilon(1e-5));
            CHECK(m.cdf_partial(2, y1, y2) == doctest::Approx(fd2).epsilon(1e-5));
        }
    }
}
