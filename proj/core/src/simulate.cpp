#include "bprh/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bprh/numerics.hpp"

namespace bprh {

namespace {

double average_marginal_cdf(const Model& model, int i, double z) {
    // (1/z) * Integral_0^z F_{Y_i}(c) dc with fixed-order Gauss-Legendre.
    double integral = integrate_gl([&](double c) { return model.marginal_cdf(i, c); }, 0.0, z, 128);
    return integral / z;
}

}  // namespace

double censoring_threshold(const Model& model, int i, double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("censoring_threshold: p must lie in (0,1)");
    }
    double lo = 0.0;  // average cdf tends to the lower-support limit here
    double hi = 1.0;
    double avg_hi = average_marginal_cdf(model, i, hi);
    int guard = 0;
    while (avg_hi < p && guard++ < 2000) {
        hi *= 2.0;
        avg_hi = average_marginal_cdf(model, i, hi);
    }
    double avg_lo_limit = average_marginal_cdf(model, i, 1e-12);
    if (avg_lo_limit > p || avg_hi < p) {
        std::ostringstream msg;
        msg << "censoring_threshold: p = " << p << " outside the attainable range ("
            << avg_lo_limit << ", " << avg_hi << ") for coordinate " << i;
        throw std::runtime_error(msg.str());
    }
    double xtol = 1e-10 * std::max(1.0, hi);
    for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (average_marginal_cdf(model, i, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

CensoringPlan make_censoring_plan(const Model& model, double p) {
    CensoringPlan plan;
    if (p == 0.0) return plan;
    plan.p = p;
    plan.z1 = censoring_threshold(model, 1, p);
    plan.z2 = censoring_threshold(model, 2, p);
    return plan;
}

namespace {

// Branch selection shared by both samplers: returns 1 if Y1 carries the max,
// 2 if Y2 does, 0 for a family-1 diagonal tie.
int pick_region(const Model& model, double u1) {
    auto probs = model.region_probabilities();
    if (u1 <= probs.y1_greater) return 1;
    if (u1 <= probs.y1_greater + probs.tie) return 0;
    return 2;
}

double conditional_exponent(const Model& model, int other) {
    if (model.family() == ModelFamily::bprhm1) {
        const auto& p = model.params1();
        return (other == 1 ? p.alpha1 : p.alpha2) + p.alpha3;
    }
    const auto& p = model.params2();
    return other == 1 ? p.theta1p : p.theta2p;
}

}  // namespace

std::pair<double, double> draw_pair_paper(const Model& model, RngStream& rng, bool literal) {
    const Baseline& f0 = model.baseline();
    double u1 = rng.next_unit();
    double u2 = rng.next_unit();
    double u3 = rng.next_unit();

    int region = pick_region(model, u1);
    double log_u_max = std::log(u2) / model.theta_max();
    double t_max = f0.quantile(std::exp(log_u_max));

    if (region == 0 && !literal) {
        return {t_max, t_max};
    }
    int max_is = literal ? (region == 2 ? 2 : 1) : region;
    int other = max_is == 1 ? 2 : 1;

    double log_ratio;
    if (literal) {
        double q = model.marginal_quantile(other, u3);
        log_ratio = f0.log_cdf(q);
    } else {
        log_ratio = std::log(u3) / conditional_exponent(model, other);
    }
    double t_other = f0.quantile(std::exp(log_u_max + log_ratio));
    if (max_is == 1) return {t_max, t_other};
    return {t_other, t_max};
}

std::pair<double, double> draw_pair_oracle(const Model& model, RngStream& rng) {
    const Baseline& f0 = model.baseline();
    if (model.family() == ModelFamily::bprhm1) {
        const auto& p = model.params1();
        double v1 = f0.quantile(std::exp(std::log(rng.next_unit()) / p.alpha1));
        double v2 = f0.quantile(std::exp(std::log(rng.next_unit()) / p.alpha2));
        double v3 = f0.quantile(std::exp(std::log(rng.next_unit()) / p.alpha3));
        return {std::max(v1, v3), std::max(v2, v3)};
    }
    double u1 = rng.next_unit();
    double u2 = rng.next_unit();
    double u3 = rng.next_unit();
    int max_is = pick_region(model, u1);
    int other = max_is == 1 ? 2 : 1;
    double log_u_max = std::log(u2) / model.theta_max();
    double t_max = f0.quantile(std::exp(log_u_max));
    double t_other =
        f0.quantile(std::exp(log_u_max + std::log(u3) / conditional_exponent(model, other)));
    if (max_is == 1) return {t_max, t_other};
    return {t_other, t_max};
}

CensoredSample simulate_sample(const Model& model, std::size_t n, double p, std::uint64_t seed,
                               SamplerKind kind) {
    if (n == 0) throw std::invalid_argument("simulate_sample: n must be >= 1");
    CensoredSample sample;
    sample.seed = seed;
    sample.plan = make_censoring_plan(model, p);
    sample.pairs.resize(n);

    const CensoringPlan& plan = sample.plan;
    parallel_for(n, [&](std::size_t i) {
        RngStream rng(seed, i);
        std::pair<double, double> t;
        switch (kind) {
            case SamplerKind::conditional: t = draw_pair_paper(model, rng, false); break;
            case SamplerKind::paper_literal: t = draw_pair_paper(model, rng, true); break;
            case SamplerKind::oracle: t = draw_pair_oracle(model, rng); break;
        }
        CensoredPair pair;
        if (plan.enabled()) {
            double c1 = plan.z1 * rng.next_unit();
            double c2 = plan.z2 * rng.next_unit();
            pair.delta1 = t.first >= c1;
            pair.delta2 = t.second >= c2;
            pair.y1 = std::max(t.first, c1);
            pair.y2 = std::max(t.second, c2);
        } else {
            pair.y1 = t.first;
            pair.y2 = t.second;
        }
        sample.pairs[i] = pair;
    });
    return sample;
}

}  // namespace bprh
