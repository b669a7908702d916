#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace bprh {

enum class BaselineFamily {
    weibull,              // F0(y) = 1 - exp(-lambda * y^beta),      y > 0
    exponential,          // F0(y) = 1 - exp(-lambda * y),           y > 0
    rayleigh,             // F0(y) = 1 - exp(-lambda * y^2),         y > 0
    inverse_weibull,      // F0(y) = exp(-y^-alpha),                 y > 0
    inverse_exponential,  // F0(y) = exp(-1/y),                      y > 0
    power,                // F0(y) = (y/b)^c,                        0 < y < b
    reflected_weibull,    // F0(y) = exp(-c * y^2),                  y < 0
    linear_failure_rate,  // F0(y) = 1 - exp(-a0*y - b0*y^2/2),      y > 0
    exp_form,             // F0(y) = exp(c * (y - b)),               y < b
};

/**
 * A parametric baseline distribution F0 with closed-form cdf, density,
 * quantile and reversed hazard rate. Values are immutable; every operation
 * is pure and safe to call concurrently.
 *
 * The cdf is a total function: arguments outside the support clamp to 0 or
 * 1. The quantile is defined on (0,1) only and the reversed hazard only
 * where the cdf is positive; both throw std::domain_error otherwise.
 */
class Baseline {
  public:
    static Baseline weibull(double lambda, double beta);
    static Baseline exponential(double lambda);
    static Baseline rayleigh(double lambda);
    static Baseline inverse_weibull(double alpha);
    static Baseline inverse_exponential();
    static Baseline power(double c, double b);
    static Baseline reflected_weibull(double c);
    static Baseline linear_failure_rate(double a0, double b0);
    static Baseline exp_form(double c, double b);

    /// Parses "family:param1,param2" strings, e.g. "weibull:1.5,1.2" or "ie".
    static Baseline parse(const std::string& text);
    std::string to_string() const;

    BaselineFamily family() const { return family_; }
    std::size_t parameter_count() const { return n_params_; }
    double parameter(std::size_t i) const { return params_[i]; }

    double cdf(double y) const;
    double log_cdf(double y) const;  // ln F0(y); -inf at or below the lower endpoint
    double pdf(double y) const;
    double log_pdf(double y) const;  // -inf outside the support
    double quantile(double u) const;
    double reversed_hazard(double y) const;

    double support_lower() const;
    double support_upper() const;

  private:
    Baseline(BaselineFamily family, std::array<double, 2> params, std::size_t n_params)
        : family_(family), params_(params), n_params_(n_params) {}

    BaselineFamily family_;
    std::array<double, 2> params_;
    std::size_t n_params_;
};

/// Canonical lowercase family name used in CLI strings and reports.
std::string family_name(BaselineFamily family);

/// Inverse of family_name; accepts the same aliases as Baseline::parse.
BaselineFamily parse_family_name(const std::string& name);

/// Number of free parameters of the family.
std::size_t baseline_parameter_count(BaselineFamily family);

/// Constructs a baseline from a family tag and parameter list.
Baseline make_baseline(BaselineFamily family, const std::vector<double>& params);

}  // namespace bprh
