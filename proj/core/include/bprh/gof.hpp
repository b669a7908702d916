#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bprh/model.hpp"
#include "bprh/simulate.hpp"

namespace bprh {

/// Right-continuous empirical distribution function.
class Ecdf {
  public:
    explicit Ecdf(std::vector<double> values);  // throws on empty input
    double operator()(double y) const;
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& sorted_values() const { return values_; }

  private:
    std::vector<double> values_;
};

enum class GofTarget { max, marginal1, marginal2, bivariate };
enum class PvalueMethod { asymptotic, monte_carlo };

struct GofReport {
    GofTarget target = GofTarget::max;
    double statistic = 0.0;
    double p_value = 1.0;
    PvalueMethod method = PvalueMethod::asymptotic;
    int replicates = 0;        // Monte Carlo / bootstrap replicates used
    std::size_t n = 0;         // sample size entering the test
};

/// sup_y |F_n(y) - F(y)| evaluated at the sample points (both one-sided gaps).
double ks_statistic(const std::vector<double>& values, const std::function<double(double)>& cdf);

/**
 * One-sample Kolmogorov-Smirnov test. Requires n >= 5 and a non-degenerate
 * theoretical cdf over the sample range. The p-value comes from the
 * asymptotic Kolmogorov distribution at sqrt(n) * D.
 */
GofReport ks_univariate(const std::vector<double>& values,
                        const std::function<double(double)>& cdf,
                        GofTarget target = GofTarget::max);

/**
 * Same statistic with a Monte Carlo p-value: the null law of D is
 * distribution free, so replicates are uniform samples of the same size
 * tested against the identity cdf.
 */
GofReport ks_univariate_mc(const std::vector<double>& values,
                           const std::function<double(double)>& cdf, int replicates,
                           std::uint64_t seed, GofTarget target = GofTarget::max);

using BivariatePoints = std::vector<std::array<double, 2>>;

/// max over sample points of |F_n(y1,y2) - F(y1,y2)| with the lower-orthant
/// bivariate empirical cdf.
double ks_statistic_bivariate(const BivariatePoints& points, const Model& model);

/**
 * Bivariate Kolmogorov-Smirnov test with a parametric-bootstrap p-value:
 * `replicates` samples of the same size are drawn from the model with the
 * reference sampler, the statistic is recomputed for each, and the p-value
 * is the exceedance fraction (1 + #{D* >= D}) / (replicates + 1).
 * Requires n >= 10 and replicates >= 200.
 */
GofReport ks_bivariate(const BivariatePoints& points, const Model& model, int replicates,
                       std::uint64_t seed);

/**
 * Theoretical cdf of coordinate i restricted to observed (delta = 1)
 * entries under the uniform censoring plan: P(T_i <= y | C_i <= T_i).
 */
std::function<double(double)> observed_marginal_cdf(const Model& model,
                                                    const CensoringPlan& plan, int i);

/// Law of the recorded maximum max(y1, y2) when censored coordinates record
/// their censoring times: F0(y)^theta * P(C1 <= y) * P(C2 <= y).
std::function<double(double)> recorded_max_cdf(const Model& model, const CensoringPlan& plan);

}  // namespace bprh
