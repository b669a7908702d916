#include "bprh/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "bprh/numerics.hpp"
#include "bprh/rng.hpp"

namespace bprh {

Ecdf::Ecdf(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("Ecdf: at least one sample value is required");
    }
    std::sort(values_.begin(), values_.end());
}

double Ecdf::operator()(double y) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), y);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double ks_statistic(const std::vector<double>& values, const std::function<double(double)>& cdf) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = cdf(sorted[i]);
        double upper = (static_cast<double>(i) + 1.0) / n - f;
        double lower = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(upper, lower));
    }
    return d;
}

namespace {

void check_univariate_input(const std::vector<double>& values,
                            const std::function<double(double)>& cdf) {
    if (values.size() < 5) {
        throw std::invalid_argument("ks_univariate: need at least 5 observations");
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(cdf(*hi) > cdf(*lo)) && *hi > *lo) {
        throw std::invalid_argument("ks_univariate: theoretical cdf is degenerate over the sample");
    }
}

}  // namespace

GofReport ks_univariate(const std::vector<double>& values,
                        const std::function<double(double)>& cdf, GofTarget target) {
    check_univariate_input(values, cdf);
    GofReport report;
    report.target = target;
    report.n = values.size();
    report.statistic = ks_statistic(values, cdf);
    report.p_value = kolmogorov_sf(std::sqrt(static_cast<double>(values.size())) * report.statistic);
    report.method = PvalueMethod::asymptotic;
    return report;
}

GofReport ks_univariate_mc(const std::vector<double>& values,
                           const std::function<double(double)>& cdf, int replicates,
                           std::uint64_t seed, GofTarget target) {
    check_univariate_input(values, cdf);
    if (replicates < 200) {
        throw std::invalid_argument("ks_univariate_mc: need at least 200 replicates");
    }
    GofReport report;
    report.target = target;
    report.n = values.size();
    report.statistic = ks_statistic(values, cdf);
    report.method = PvalueMethod::monte_carlo;
    report.replicates = replicates;

    std::size_t n = values.size();
    std::vector<char> exceeds(replicates, 0);
    auto identity = [](double u) { return u; };
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        RngStream rng(seed, r);
        std::vector<double> u(n);
        for (auto& v : u) v = rng.next_unit();
        exceeds[r] = ks_statistic(u, identity) >= report.statistic ? 1 : 0;
    });
    int count = 0;
    for (char e : exceeds) count += e;
    report.p_value = (1.0 + count) / (replicates + 1.0);
    return report;
}

double ks_statistic_bivariate(const BivariatePoints& points, const Model& model) {
    double n = static_cast<double>(points.size());
    double d = 0.0;
    for (const auto& p : points) {
        std::size_t count = 0;
        for (const auto& q : points) {
            if (q[0] <= p[0] && q[1] <= p[1]) ++count;
        }
        double fn = static_cast<double>(count) / n;
        d = std::max(d, std::abs(fn - model.joint_cdf(p[0], p[1])));
    }
    return d;
}

GofReport ks_bivariate(const BivariatePoints& points, const Model& model, int replicates,
                       std::uint64_t seed) {
    if (points.size() < 10) {
        throw std::invalid_argument("ks_bivariate: need at least 10 observations");
    }
    if (replicates < 200) {
        throw std::invalid_argument("ks_bivariate: need at least 200 replicates for p-value resolution");
    }
    GofReport report;
    report.target = GofTarget::bivariate;
    report.n = points.size();
    report.method = PvalueMethod::monte_carlo;
    report.replicates = replicates;
    report.statistic = ks_statistic_bivariate(points, model);

    std::size_t n = points.size();
    std::vector<char> exceeds(replicates, 0);
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
        BivariatePoints sample(n);
        for (std::size_t i = 0; i < n; ++i) {
            RngStream rng(seed, ((r + 1) << 24) ^ i);
            auto t = draw_pair_oracle(model, rng);
            sample[i] = {t.first, t.second};
        }
        exceeds[r] = ks_statistic_bivariate(sample, model) >= report.statistic ? 1 : 0;
    });
    int count = 0;
    for (char e : exceeds) count += e;
    report.p_value = (1.0 + count) / (replicates + 1.0);
    return report;
}

std::function<double(double)> observed_marginal_cdf(const Model& model, const CensoringPlan& plan,
                                                    int i) {
    if (!plan.enabled()) {
        return [model, i](double y) { return model.marginal_cdf(i, y); };
    }
    double z = i == 1 ? plan.z1 : plan.z2;
    // G(y) = P(T <= y, C <= T) with C uniform on (0, z):
    //   G(y) = (1/z) * Integral_0^{min(y,z)} t f(t) dt + (F(y) - F(z))_+
    // and Integral t f dt = m F(m) - Integral_0^m F dt by parts.
    auto partial = [model, i, z](double y) {
        if (y <= 0.0) return 0.0;
        double m = std::min(y, z);
        double int_f = integrate_gl([&](double t) { return model.marginal_cdf(i, t); }, 0.0, m, 128);
        double g = (m * model.marginal_cdf(i, m) - int_f) / z;
        if (y > z) g += model.marginal_cdf(i, y) - model.marginal_cdf(i, z);
        return g;
    };
    double total = partial(std::min(model.baseline().support_upper(), 1e300));
    return [partial, total](double y) {
        if (total <= 0.0) return 0.0;
        double v = partial(y) / total;
        return std::clamp(v, 0.0, 1.0);
    };
}

std::function<double(double)> recorded_max_cdf(const Model& model, const CensoringPlan& plan) {
    if (!plan.enabled()) {
        return [model](double y) { return model.max_cdf(y); };
    }
    return [model, plan](double y) {
        if (y <= 0.0) return 0.0;
        double c1 = std::min(y / plan.z1, 1.0);
        double c2 = std::min(y / plan.z2, 1.0);
        return model.max_cdf(y) * c1 * c2;
    };
}

}  // namespace bprh
