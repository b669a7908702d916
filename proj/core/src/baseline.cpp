#include "bprh/baseline.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bprh/numerics.hpp"

namespace bprh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const char* family, const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << family << ": parameter " << name << " must be > 0, got " << value;
        throw std::invalid_argument(msg.str());
    }
}

void require_finite(const char* family, const char* name, double value) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << family << ": parameter " << name << " must be finite, got " << value;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

Baseline Baseline::weibull(double lambda, double beta) {
    require_positive("weibull", "lambda", lambda);
    require_positive("weibull", "beta", beta);
    return Baseline(BaselineFamily::weibull, {lambda, beta}, 2);
}

Baseline Baseline::exponential(double lambda) {
    require_positive("exponential", "lambda", lambda);
    return Baseline(BaselineFamily::exponential, {lambda, 0.0}, 1);
}

Baseline Baseline::rayleigh(double lambda) {
    require_positive("rayleigh", "lambda", lambda);
    return Baseline(BaselineFamily::rayleigh, {lambda, 0.0}, 1);
}

Baseline Baseline::inverse_weibull(double alpha) {
    require_positive("invweibull", "alpha", alpha);
    return Baseline(BaselineFamily::inverse_weibull, {alpha, 0.0}, 1);
}

Baseline Baseline::inverse_exponential() {
    return Baseline(BaselineFamily::inverse_exponential, {0.0, 0.0}, 0);
}

Baseline Baseline::power(double c, double b) {
    require_positive("power", "c", c);
    require_positive("power", "b", b);
    return Baseline(BaselineFamily::power, {c, b}, 2);
}

Baseline Baseline::reflected_weibull(double c) {
    require_positive("refweibull", "c", c);
    return Baseline(BaselineFamily::reflected_weibull, {c, 0.0}, 1);
}

Baseline Baseline::linear_failure_rate(double a0, double b0) {
    require_positive("lfr", "a0", a0);
    require_positive("lfr", "b0", b0);
    return Baseline(BaselineFamily::linear_failure_rate, {a0, b0}, 2);
}

Baseline Baseline::exp_form(double c, double b) {
    require_positive("expform", "c", c);
    require_finite("expform", "b", b);
    return Baseline(BaselineFamily::exp_form, {c, b}, 2);
}

double Baseline::support_lower() const {
    switch (family_) {
        case BaselineFamily::reflected_weibull:
        case BaselineFamily::exp_form:
            return -kInf;
        default:
            return 0.0;
    }
}

double Baseline::support_upper() const {
    switch (family_) {
        case BaselineFamily::power:
            return params_[1];
        case BaselineFamily::reflected_weibull:
            return 0.0;
        case BaselineFamily::exp_form:
            return params_[1];
        default:
            return kInf;
    }
}

double Baseline::log_cdf(double y) const {
    if (y <= support_lower()) return -kInf;
    if (y >= support_upper()) return 0.0;
    switch (family_) {
        case BaselineFamily::weibull:
            return std::log1p(-std::exp(-params_[0] * std::pow(y, params_[1])));
        case BaselineFamily::exponential:
            return std::log1p(-std::exp(-params_[0] * y));
        case BaselineFamily::rayleigh:
            return std::log1p(-std::exp(-params_[0] * y * y));
        case BaselineFamily::inverse_weibull:
            return -std::pow(y, -params_[0]);
        case BaselineFamily::inverse_exponential:
            return -1.0 / y;
        case BaselineFamily::power:
            return params_[0] * (std::log(y) - std::log(params_[1]));
        case BaselineFamily::reflected_weibull:
            return -params_[0] * y * y;
        case BaselineFamily::linear_failure_rate:
            return std::log1p(-std::exp(-params_[0] * y - 0.5 * params_[1] * y * y));
        case BaselineFamily::exp_form:
            return params_[0] * (y - params_[1]);
    }
    return -kInf;
}

double Baseline::cdf(double y) const {
    if (y <= support_lower()) return 0.0;
    if (y >= support_upper()) return 1.0;
    switch (family_) {
        case BaselineFamily::weibull:
            return -std::expm1(-params_[0] * std::pow(y, params_[1]));
        case BaselineFamily::exponential:
            return -std::expm1(-params_[0] * y);
        case BaselineFamily::rayleigh:
            return -std::expm1(-params_[0] * y * y);
        case BaselineFamily::linear_failure_rate:
            return -std::expm1(-params_[0] * y - 0.5 * params_[1] * y * y);
        default:
            return std::exp(log_cdf(y));
    }
}

double Baseline::log_pdf(double y) const {
    if (y <= support_lower() || y >= support_upper()) return -kInf;
    switch (family_) {
        case BaselineFamily::weibull:
            return std::log(params_[0] * params_[1]) + (params_[1] - 1.0) * std::log(y) -
                   params_[0] * std::pow(y, params_[1]);
        case BaselineFamily::exponential:
            return std::log(params_[0]) - params_[0] * y;
        case BaselineFamily::rayleigh:
            return std::log(2.0 * params_[0] * y) - params_[0] * y * y;
        case BaselineFamily::inverse_weibull:
            return std::log(params_[0]) - (params_[0] + 1.0) * std::log(y) -
                   std::pow(y, -params_[0]);
        case BaselineFamily::inverse_exponential:
            return -2.0 * std::log(y) - 1.0 / y;
        case BaselineFamily::power:
            return std::log(params_[0]) + (params_[0] - 1.0) * std::log(y) -
                   params_[0] * std::log(params_[1]);
        case BaselineFamily::reflected_weibull:
            return std::log(-2.0 * params_[0] * y) - params_[0] * y * y;
        case BaselineFamily::linear_failure_rate:
            return std::log(params_[0] + params_[1] * y) - params_[0] * y -
                   0.5 * params_[1] * y * y;
        case BaselineFamily::exp_form:
            return std::log(params_[0]) + params_[0] * (y - params_[1]);
    }
    return -kInf;
}

double Baseline::pdf(double y) const {
    if (y <= support_lower() || y >= support_upper()) return 0.0;
    return std::exp(log_pdf(y));
}

double Baseline::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw std::domain_error("quantile: u must lie strictly inside (0,1)");
    }
    switch (family_) {
        case BaselineFamily::weibull:
            return std::pow(-std::log1p(-u) / params_[0], 1.0 / params_[1]);
        case BaselineFamily::exponential:
            return -std::log1p(-u) / params_[0];
        case BaselineFamily::rayleigh:
            return std::sqrt(-std::log1p(-u) / params_[0]);
        case BaselineFamily::inverse_weibull:
            return std::pow(-std::log(u), -1.0 / params_[0]);
        case BaselineFamily::inverse_exponential:
            return -1.0 / std::log(u);
        case BaselineFamily::power:
            return params_[1] * std::pow(u, 1.0 / params_[0]);
        case BaselineFamily::reflected_weibull:
            return -std::sqrt(-std::log(u) / params_[0]);
        case BaselineFamily::exp_form:
            return params_[1] + std::log(u) / params_[0];
        case BaselineFamily::linear_failure_rate: {
            // No closed inverse kept here; bracketed bisection to 1e-12.
            double hi = 1.0;
            while (cdf(hi) < u) hi *= 2.0;
            return bisect([&](double y) { return cdf(y) - u; }, 0.0, hi, 1e-12);
        }
    }
    throw std::logic_error("quantile: unknown family");
}

double Baseline::reversed_hazard(double y) const {
    double logc = log_cdf(y);
    if (logc == -kInf) {
        throw std::domain_error("reversed_hazard: cdf(y) is zero at or below the support");
    }
    switch (family_) {
        // Families whose rate has a closed form free of the cdf ratio.
        case BaselineFamily::inverse_weibull:
            return params_[0] * std::pow(y, -params_[0] - 1.0);
        case BaselineFamily::inverse_exponential:
            return 1.0 / (y * y);
        case BaselineFamily::power:
            return y >= params_[1] ? 0.0 : params_[0] / y;
        case BaselineFamily::reflected_weibull:
            return y >= 0.0 ? 0.0 : -2.0 * params_[0] * y;
        case BaselineFamily::exp_form:
            return y >= params_[1] ? 0.0 : params_[0];
        default:
            return pdf(y) / cdf(y);
    }
}

std::string family_name(BaselineFamily family) {
    switch (family) {
        case BaselineFamily::weibull: return "weibull";
        case BaselineFamily::exponential: return "exponential";
        case BaselineFamily::rayleigh: return "rayleigh";
        case BaselineFamily::inverse_weibull: return "invweibull";
        case BaselineFamily::inverse_exponential: return "invexp";
        case BaselineFamily::power: return "power";
        case BaselineFamily::reflected_weibull: return "refweibull";
        case BaselineFamily::linear_failure_rate: return "lfr";
        case BaselineFamily::exp_form: return "expform";
    }
    return "?";
}

BaselineFamily parse_family_name(const std::string& name) {
    std::string n = name;
    for (auto& ch : n) ch = static_cast<char>(std::tolower(ch));
    if (n == "weibull" || n == "w") return BaselineFamily::weibull;
    if (n == "exponential" || n == "exp" || n == "e") return BaselineFamily::exponential;
    if (n == "rayleigh" || n == "r") return BaselineFamily::rayleigh;
    if (n == "invweibull" || n == "inverseweibull" || n == "iw") {
        return BaselineFamily::inverse_weibull;
    }
    if (n == "invexp" || n == "inverseexponential" || n == "ie") {
        return BaselineFamily::inverse_exponential;
    }
    if (n == "power" || n == "pf") return BaselineFamily::power;
    if (n == "refweibull" || n == "reflectedweibull" || n == "rw") {
        return BaselineFamily::reflected_weibull;
    }
    if (n == "lfr" || n == "linearfailurerate") return BaselineFamily::linear_failure_rate;
    if (n == "expform") return BaselineFamily::exp_form;
    throw std::invalid_argument("baseline: unknown family '" + name + "'");
}

Baseline Baseline::parse(const std::string& text) {
    std::string name = text;
    std::vector<double> params;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        name = text.substr(0, colon);
        std::string rest = text.substr(colon + 1);
        std::istringstream in(rest);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument("baseline: bad numeric parameter '" + tok + "'");
            }
            params.push_back(v);
        }
    }
    return make_baseline(parse_family_name(name), params);
}

std::size_t baseline_parameter_count(BaselineFamily family) {
    switch (family) {
        case BaselineFamily::inverse_exponential: return 0;
        case BaselineFamily::exponential:
        case BaselineFamily::rayleigh:
        case BaselineFamily::inverse_weibull:
        case BaselineFamily::reflected_weibull:
            return 1;
        default:
            return 2;
    }
}

Baseline make_baseline(BaselineFamily family, const std::vector<double>& params) {
    if (params.size() != baseline_parameter_count(family)) {
        std::ostringstream msg;
        msg << family_name(family) << ": expected " << baseline_parameter_count(family)
            << " parameter(s), got " << params.size();
        throw std::invalid_argument(msg.str());
    }
    switch (family) {
        case BaselineFamily::weibull: return Baseline::weibull(params[0], params[1]);
        case BaselineFamily::exponential: return Baseline::exponential(params[0]);
        case BaselineFamily::rayleigh: return Baseline::rayleigh(params[0]);
        case BaselineFamily::inverse_weibull: return Baseline::inverse_weibull(params[0]);
        case BaselineFamily::inverse_exponential: return Baseline::inverse_exponential();
        case BaselineFamily::power: return Baseline::power(params[0], params[1]);
        case BaselineFamily::reflected_weibull: return Baseline::reflected_weibull(params[0]);
        case BaselineFamily::linear_failure_rate:
            return Baseline::linear_failure_rate(params[0], params[1]);
        case BaselineFamily::exp_form: return Baseline::exp_form(params[0], params[1]);
    }
    throw std::logic_error("make_baseline: unknown family");
}

std::string Baseline::to_string() const {
    std::ostringstream out;
    out << family_name(family_);
    for (std::size_t i = 0; i < n_params_; ++i) {
        out << (i == 0 ? ':' : ',') << params_[i];
    }
    return out.str();
}

}  // namespace bprh
