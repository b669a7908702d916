#include "bprh/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bprh/numerics.hpp"

namespace bprh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegenerateTol = 1e-9;

void require_positive(const char* family, const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << family << ": parameter " << name << " must be > 0, got " << value;
        throw std::invalid_argument(msg.str());
    }
}

int check_coordinate(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("coordinate index must be 1 or 2");
    return i;
}

}  // namespace

Model Model::bprhm1(Baseline baseline, double alpha1, double alpha2, double alpha3) {
    require_positive("bprhm1", "alpha1", alpha1);
    require_positive("bprhm1", "alpha2", alpha2);
    require_positive("bprhm1", "alpha3", alpha3);
    Model m(std::move(baseline), ModelFamily::bprhm1);
    m.p1_ = {alpha1, alpha2, alpha3};
    m.theta_ = alpha1 + alpha2 + alpha3;
    return m;
}

Model Model::bprhm2(Baseline baseline, double theta1, double theta2, double theta1p,
                    double theta2p) {
    require_positive("bprhm2", "theta1", theta1);
    require_positive("bprhm2", "theta2", theta2);
    require_positive("bprhm2", "theta1p", theta1p);
    require_positive("bprhm2", "theta2p", theta2p);
    Model m(std::move(baseline), ModelFamily::bprhm2);
    m.p2_ = {theta1, theta2, theta1p, theta2p};
    m.theta_ = theta1 + theta2;
    return m;
}

const Bprhm1Params& Model::params1() const {
    if (family_ != ModelFamily::bprhm1) throw std::logic_error("model is not bprhm1");
    return p1_;
}

const Bprhm2Params& Model::params2() const {
    if (family_ != ModelFamily::bprhm2) throw std::logic_error("model is not bprhm2");
    return p2_;
}

bool Model::degenerate_branch(int i) const {
    double tip = i == 1 ? p2_.theta1p : p2_.theta2p;
    return std::abs(theta_ - tip) < kDegenerateTol;
}

double Model::marginal_cdf_from_u(int i, double u) const {
    check_coordinate(i);
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (family_ == ModelFamily::bprhm1) {
        double a = (i == 1 ? p1_.alpha1 : p1_.alpha2) + p1_.alpha3;
        return std::pow(u, a);
    }
    double ti = i == 1 ? p2_.theta1 : p2_.theta2;
    double to = i == 1 ? p2_.theta2 : p2_.theta1;
    double tip = i == 1 ? p2_.theta1p : p2_.theta2p;
    double lu = std::log(u);
    if (degenerate_branch(i)) {
        return std::exp(theta_ * lu) * (1.0 - to * lu);
    }
    double denom = theta_ - tip;
    return (to * std::exp(tip * lu) + (ti - tip) * std::exp(theta_ * lu)) / denom;
}

double Model::marginal_cdf(int i, double y) const {
    check_coordinate(i);
    double lc = baseline_.log_cdf(y);
    if (lc == -kInf) return 0.0;
    return marginal_cdf_from_u(i, std::exp(lc));
}

double Model::marginal_pdf(int i, double y) const {
    check_coordinate(i);
    double lc = baseline_.log_cdf(y);
    if (lc == -kInf) return 0.0;
    double f0 = baseline_.pdf(y);
    if (family_ == ModelFamily::bprhm1) {
        double a = (i == 1 ? p1_.alpha1 : p1_.alpha2) + p1_.alpha3;
        return a * f0 * std::exp((a - 1.0) * lc);
    }
    double ti = i == 1 ? p2_.theta1 : p2_.theta2;
    double to = i == 1 ? p2_.theta2 : p2_.theta1;
    double tip = i == 1 ? p2_.theta1p : p2_.theta2p;
    if (degenerate_branch(i)) {
        return f0 * std::exp((theta_ - 1.0) * lc) * (theta_ * (1.0 - to * lc) - to);
    }
    double denom = theta_ - tip;
    return f0 *
           (to * tip * std::exp((tip - 1.0) * lc) + (ti - tip) * theta_ * std::exp((theta_ - 1.0) * lc)) /
           denom;
}

double Model::marginal_quantile(int i, double u) const {
    check_coordinate(i);
    if (!(u > 0.0) || !(u < 1.0)) {
        throw std::domain_error("marginal_quantile: u must lie strictly inside (0,1)");
    }
    if (family_ == ModelFamily::bprhm1) {
        double a = (i == 1 ? p1_.alpha1 : p1_.alpha2) + p1_.alpha3;
        return baseline_.quantile(std::pow(u, 1.0 / a));
    }
    // The mixture marginal is monotone in v = F0(y); solve there, then map back.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        if (marginal_cdf_from_u(i, mid) < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return baseline_.quantile(0.5 * (lo + hi));
}

double Model::max_cdf(double y) const {
    double lc = baseline_.log_cdf(y);
    if (lc == -kInf) return 0.0;
    return std::exp(theta_ * lc);
}

double Model::log_joint_cdf(double y1, double y2) const {
    double l1 = baseline_.log_cdf(y1);
    double l2 = baseline_.log_cdf(y2);
    if (l1 == -kInf || l2 == -kInf) return -kInf;
    if (family_ == ModelFamily::bprhm1) {
        double lmin = std::min(l1, l2);
        return p1_.alpha1 * l1 + p1_.alpha2 * l2 + p1_.alpha3 * lmin;
    }
    // Product representation: F0(max)^theta times the other marginal at the
    // cdf ratio F0(min)/F0(max).
    int other = y1 >= y2 ? 2 : 1;
    double lmax = y1 >= y2 ? l1 : l2;
    double lmin = y1 >= y2 ? l2 : l1;
    return theta_ * lmax + std::log(marginal_cdf_from_u(other, std::exp(lmin - lmax)));
}

double Model::joint_cdf(double y1, double y2) const {
    double lv = log_joint_cdf(y1, y2);
    return lv == -kInf ? 0.0 : std::exp(lv);
}

double Model::log_joint_density(double y1, double y2) const {
    if (y1 == y2) {
        throw std::invalid_argument(
            "joint_density: y1 == y2 lies on the diagonal; use diagonal_density");
    }
    double l1 = baseline_.log_cdf(y1);
    double l2 = baseline_.log_cdf(y2);
    double lp1 = baseline_.log_pdf(y1);
    double lp2 = baseline_.log_pdf(y2);
    if (l1 == -kInf || l2 == -kInf || lp1 == -kInf || lp2 == -kInf) return -kInf;
    if (family_ == ModelFamily::bprhm1) {
        const auto& p = p1_;
        if (y1 < y2) {
            return std::log(p.alpha2 * (p.alpha1 + p.alpha3)) + lp1 + lp2 +
                   (p.alpha1 + p.alpha3 - 1.0) * l1 + (p.alpha2 - 1.0) * l2;
        }
        return std::log(p.alpha1 * (p.alpha2 + p.alpha3)) + lp1 + lp2 +
               (p.alpha1 - 1.0) * l1 + (p.alpha2 + p.alpha3 - 1.0) * l2;
    }
    const auto& p = p2_;
    if (y1 < y2) {
        return std::log(p.theta1p * p.theta2) + lp1 + lp2 + (p.theta1p - 1.0) * l1 +
               (theta_ - p.theta1p - 1.0) * l2;
    }
    return std::log(p.theta1 * p.theta2p) + lp1 + lp2 + (theta_ - p.theta2p - 1.0) * l1 +
           (p.theta2p - 1.0) * l2;
}

double Model::joint_density(double y1, double y2) const {
    double lv = log_joint_density(y1, y2);
    return lv == -kInf ? 0.0 : std::exp(lv);
}

double Model::log_diagonal_density(double y) const {
    if (family_ != ModelFamily::bprhm1) {
        throw std::invalid_argument(
            "diagonal_density: model family has no singular diagonal component");
    }
    double l = baseline_.log_cdf(y);
    double lp = baseline_.log_pdf(y);
    if (l == -kInf || lp == -kInf) return -kInf;
    return std::log(p1_.alpha3) + lp + (theta_ - 1.0) * l;
}

double Model::diagonal_density(double y) const {
    double lv = log_diagonal_density(y);
    return lv == -kInf ? 0.0 : std::exp(lv);
}

RegionProbabilities Model::region_probabilities() const {
    if (family_ == ModelFamily::bprhm1) {
        return {p1_.alpha1 / theta_, p1_.alpha2 / theta_, p1_.alpha3 / theta_};
    }
    return {p2_.theta1 / theta_, p2_.theta2 / theta_, 0.0};
}

double Model::log_cdf_partial(int i, double y1, double y2) const {
    check_coordinate(i);
    double li = baseline_.log_cdf(i == 1 ? y1 : y2);
    double lo = baseline_.log_cdf(i == 1 ? y2 : y1);
    double lpi = baseline_.log_pdf(i == 1 ? y1 : y2);
    if (li == -kInf || lo == -kInf || lpi == -kInf) return -kInf;
    double yi = i == 1 ? y1 : y2;
    double yo = i == 1 ? y2 : y1;

    if (family_ == ModelFamily::bprhm1) {
        double ai = i == 1 ? p1_.alpha1 : p1_.alpha2;
        double ao = i == 1 ? p1_.alpha2 : p1_.alpha1;
        if (yi <= yo) {
            return std::log(ai + p1_.alpha3) + lpi + (ai + p1_.alpha3 - 1.0) * li + ao * lo;
        }
        return std::log(ai) + lpi + (ai - 1.0) * li + (ao + p1_.alpha3) * lo;
    }

    double ti = i == 1 ? p2_.theta1 : p2_.theta2;
    double to = i == 1 ? p2_.theta2 : p2_.theta1;
    double tip = i == 1 ? p2_.theta1p : p2_.theta2p;
    double top = i == 1 ? p2_.theta2p : p2_.theta1p;
    if (yi >= yo) {
        // i is the max coordinate; one formula covers the degenerate branch too.
        return std::log(ti) + lpi + (theta_ - top - 1.0) * li + top * lo;
    }
    if (degenerate_branch(i)) {
        double rho = li - lo;  // ln(F0(yi)/F0(yo)) <= 0
        return lpi + (theta_ - 1.0) * li + std::log(theta_ * (1.0 - to * rho) - to);
    }
    // Two signed terms; scale by the larger exponent before combining.
    double e1 = (tip - 1.0) * li + (theta_ - tip) * lo;
    double e2 = (theta_ - 1.0) * li;
    double denom = theta_ - tip;
    double em = std::max(e1, e2);
    double value = (to * tip / denom) * std::exp(e1 - em) +
                   ((ti - tip) * theta_ / denom) * std::exp(e2 - em);
    if (!(value > 0.0)) return -kInf;
    return lpi + em + std::log(value);
}

double Model::cdf_partial(int i, double y1, double y2) const {
    double lv = log_cdf_partial(i, y1, y2);
    return lv == -kInf ? 0.0 : std::exp(lv);
}

RhrRoy Model::rhr_vector_roy(double y1, double y2) const {
    double cdf = joint_cdf(y1, y2);
    if (!(cdf > 0.0)) {
        throw std::domain_error("rhr_vector_roy: joint cdf is zero at the evaluation point");
    }
    if (family_ == ModelFamily::bprhm1 && y1 == y2) {
        double rate = theta_ * baseline_.reversed_hazard(y1);
        return {rate, rate};
    }
    double lf = std::log(cdf);
    return {std::exp(log_cdf_partial(1, y1, y2) - lf), std::exp(log_cdf_partial(2, y1, y2) - lf)};
}

RhrConditional Model::rhr_vector_cond(double y1, double y2) const {
    double cdf = joint_cdf(y1, y2);
    if (!(cdf > 0.0)) {
        throw std::domain_error("rhr_vector_cond: joint cdf is zero at the evaluation point");
    }
    RhrConditional out;
    out.diagonal_sum = theta_ * baseline_.reversed_hazard(std::max(y1, y2));
    if (family_ == ModelFamily::bprhm2) {
        out.conditional12 = p2_.theta1p * baseline_.reversed_hazard(y1);
        out.conditional21 = p2_.theta2p * baseline_.reversed_hazard(y2);
        return out;
    }
    // Family 1: the conditional rate is the density over its own partial
    // integral int_a^{yi} f(t, yo) dt, which is available in closed form.
    const auto& p = p1_;
    double l1 = baseline_.log_cdf(y1), l2 = baseline_.log_cdf(y2);
    if (y1 < y2) {
        double log_int = std::log(p.alpha2) + baseline_.log_pdf(y2) +
                         (p.alpha1 + p.alpha3) * l1 + (p.alpha2 - 1.0) * l2;
        out.conditional12 = std::exp(log_joint_density(y1, y2) - log_int);
        out.conditional21 = kNaN;
    } else if (y2 < y1) {
        double log_int = std::log(p.alpha1) + baseline_.log_pdf(y1) +
                         (p.alpha2 + p.alpha3) * l2 + (p.alpha1 - 1.0) * l1;
        out.conditional21 = std::exp(log_joint_density(y1, y2) - log_int);
        out.conditional12 = kNaN;
    } else {
        out.conditional12 = kNaN;
        out.conditional21 = kNaN;
    }
    return out;
}

std::string Model::describe() const {
    std::ostringstream out;
    if (family_ == ModelFamily::bprhm1) {
        out << "bprhm1(" << baseline_.to_string() << "; " << p1_.alpha1 << "," << p1_.alpha2
            << "," << p1_.alpha3 << ")";
    } else {
        out << "bprhm2(" << baseline_.to_string() << "; " << p2_.theta1 << "," << p2_.theta2
            << "," << p2_.theta1p << "," << p2_.theta2p << ")";
    }
    return out.str();
}

}  // namespace bprh
