#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"
#include "hawkes/math.hpp"

namespace hawkes {

namespace {
void check_common(double a) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw config_error("kernel: branching ratio must be finite and >= 0");
}
}  // namespace

KernelSpec KernelSpec::exponential(double branching_ratio, double rate) {
    check_common(branching_ratio);
    if (!(rate > 0.0)) throw config_error("kernel: exponential rate must be > 0");
    KernelSpec k;
    k.family_ = KernelFamily::Exponential;
    k.a_ = branching_ratio;
    k.b_ = rate;
    return k;
}

KernelSpec KernelSpec::shifted_power_law(double branching_ratio, double tail_exponent,
                                         double scale) {
    check_common(branching_ratio);
    if (!(tail_exponent > 0.0 && tail_exponent < 0.5))
        throw config_error("kernel: tail exponent must lie in (0, 1/2)");
    if (!(scale > 0.0)) throw config_error("kernel: scale must be > 0");
    KernelSpec k;
    k.family_ = KernelFamily::ShiftedPowerLaw;
    k.a_ = branching_ratio;
    k.alpha_ = tail_exponent;
    k.c_ = scale;
    return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> t, std::vector<double> phi) {
    if (t.size() != phi.size() || t.size() < 2)
        throw config_error("kernel: tabulated needs >= 2 matching samples");
    if (t.front() != 0.0) throw config_error("kernel: tabulated grid must start at 0");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i + 1] > t[i]))
            throw config_error("kernel: tabulated times must increase");
    for (double v : phi)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw config_error("kernel: tabulated values must be finite and >= 0");

    KernelSpec k;
    k.family_ = KernelFamily::Tabulated;
    k.tab_t_ = std::move(t);
    k.tab_phi_ = std::move(phi);

    // cumulative trapezoid of the table
    k.tab_cum_.resize(k.tab_t_.size());
    k.tab_cum_[0] = 0.0;
    for (std::size_t i = 1; i < k.tab_t_.size(); ++i)
        k.tab_cum_[i] = k.tab_cum_[i - 1] + 0.5 * (k.tab_phi_[i] + k.tab_phi_[i - 1]) *
                                                (k.tab_t_[i] - k.tab_t_[i - 1]);

    // Power-law tail fitted on the last decade of the grid (log-log LSQ).
    // If the data there are zero/negative-sloped the tail is dropped.
    const double t_end = k.tab_t_.back();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < k.tab_t_.size(); ++i) {
        if (k.tab_t_[i] >= 0.1 * t_end && k.tab_phi_[i] > 0.0) {
            lx.push_back(std::log(k.tab_t_[i]));
            ly.push_back(std::log(k.tab_phi_[i]));
        }
    }
    k.tail_amp_ = 0.0;
    k.alpha_ = 0.0;
    if (lx.size() >= 5) {
        const LinearFit fit = linear_fit(lx, ly);
        const double p = -fit.slope - 1.0;  // φ ~ K t^{-1-p}
        if (p > 0.01) {
            k.alpha_ = p;
            // anchor the amplitude at the last node rather than the fit
            // intercept: keeps φ continuous at the grid edge
            k.tail_amp_ = k.tab_phi_.back() * std::pow(t_end, 1.0 + p);
        }
    }
    k.a_ = k.tab_cum_.back() +
           (k.tail_amp_ > 0.0 ? k.tail_amp_ * std::pow(t_end, -k.alpha_) / k.alpha_ : 0.0);
    return k;
}

double KernelSpec::operator()(double t) const {
    if (t < 0.0) throw std::domain_error("kernel: negative time");
    switch (family_) {
        case KernelFamily::Exponential:
            return a_ * b_ * std::exp(-b_ * t);
        case KernelFamily::ShiftedPowerLaw:
            return a_ * alpha_ * std::pow(c_, alpha_) * std::pow(t + c_, -1.0 - alpha_);
        case KernelFamily::Tabulated: {
            if (t >= tab_t_.back())
                return tail_amp_ > 0.0 ? tail_amp_ * std::pow(t, -1.0 - alpha_) : 0.0;
            const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - tab_t_.begin()) - 1;
            const double w = (t - tab_t_[i]) / (tab_t_[i + 1] - tab_t_[i]);
            return tab_phi_[i] + w * (tab_phi_[i + 1] - tab_phi_[i]);
        }
    }
    return 0.0;
}

double KernelSpec::integral_to(double x) const {
    if (x < 0.0) throw std::domain_error("kernel: negative time");
    switch (family_) {
        case KernelFamily::Exponential:
            return a_ * (1.0 - std::exp(-b_ * x));
        case KernelFamily::ShiftedPowerLaw:
            return a_ * (1.0 - std::pow(1.0 + x / c_, -alpha_));
        case KernelFamily::Tabulated:
            return a_ - tail_integral(x);
    }
    return 0.0;
}

double KernelSpec::tail_integral(double x) const {
    if (x < 0.0) throw std::domain_error("kernel: negative time");
    switch (family_) {
        case KernelFamily::Exponential:
            return a_ * std::exp(-b_ * x);
        case KernelFamily::ShiftedPowerLaw:
            return a_ * std::pow(1.0 + x / c_, -alpha_);
        case KernelFamily::Tabulated: {
            const double tail_beyond_grid =
                tail_amp_ > 0.0
                    ? tail_amp_ * std::pow(std::max(x, tab_t_.back()), -alpha_) / alpha_
                    : 0.0;
            if (x >= tab_t_.back()) return tail_beyond_grid;
            const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - tab_t_.begin()) - 1;
            const double phi_x = (*this)(x);
            const double cum_x = tab_cum_[i] + 0.5 * (tab_phi_[i] + phi_x) * (x - tab_t_[i]);
            return (tab_cum_.back() - cum_x) + tail_beyond_grid;
        }
    }
    return 0.0;
}

std::complex<double> KernelSpec::fourier(double z) const {
    if (z < 0.0) return std::conj(fourier(-z));
    switch (family_) {
        case KernelFamily::Exponential:
            return a_ * b_ / std::complex<double>(b_, -z);
        case KernelFamily::ShiftedPowerLaw: {
            if (a_ == 0.0) return 0.0;
            if (z == 0.0) return a_;
            // contour rotated onto the upper imaginary axis
            return std::complex<double>(0.0, 1.0) * a_ * alpha_ * std::pow(c_, alpha_) *
                   damped_power_integral(1.0 + alpha_, z, c_);
        }
        case KernelFamily::Tabulated: {
            if (z == 0.0) return a_;
            // exact transform of each linear segment
            std::complex<double> acc = 0.0;
            const std::complex<double> iz(0.0, z);
            for (std::size_t k = 0; k + 1 < tab_t_.size(); ++k) {
                const double t0 = tab_t_[k], d = tab_t_[k + 1] - t0;
                const double f0 = tab_phi_[k];
                const double m = (tab_phi_[k + 1] - f0) / d;
                const std::complex<double> e0 = std::exp(iz * t0);
                const double th = z * d;
                std::complex<double> I0, I1;  // ∫e^{izu}du, ∫u e^{izu}du over [0,d]
                if (std::abs(th) < 1e-4) {
                    I0 = d * (1.0 + iz * d / 2.0 + iz * iz * d * d / 6.0);
                    I1 = d * d * (0.5 + iz * d / 3.0 + iz * iz * d * d / 8.0);
                } else {
                    const std::complex<double> ed = std::exp(iz * d);
                    I0 = (ed - 1.0) / iz;
                    I1 = (d * ed) / iz - (ed - 1.0) / (iz * iz);
                }
                acc += e0 * (f0 * I0 + m * I1);
            }
            if (tail_amp_ > 0.0) {
                const double T = tab_t_.back();
                acc += std::complex<double>(0.0, 1.0) * tail_amp_ *
                       std::exp(iz * T) * damped_power_integral(1.0 + alpha_, z, T);
            }
            return acc;
        }
    }
    return 0.0;
}

double KernelSpec::characteristic_time() const {
    switch (family_) {
        case KernelFamily::Exponential:
            return 1.0 / b_;
        case KernelFamily::ShiftedPowerLaw:
            return c_ * (std::exp(1.0 / (1.0 + alpha_)) - 1.0);
        case KernelFamily::Tabulated: {
            const double target = tab_phi_.front() / std::exp(1.0);
            for (std::size_t i = 0; i < tab_t_.size(); ++i)
                if (tab_phi_[i] <= target) return std::max(tab_t_[i], tab_t_[1]);
            return tab_t_.back();
        }
    }
    return 1.0;
}

double KernelSpec::sample_offspring_delay(Rng& rng) const {
    if (a_ <= 0.0) throw numerical_error("kernel: cannot sample from a zero kernel");
    switch (family_) {
        case KernelFamily::Exponential:
            return rng.exponential(b_);
        case KernelFamily::ShiftedPowerLaw:
            return c_ * (std::pow(rng.uniform(), -1.0 / alpha_) - 1.0);
        case KernelFamily::Tabulated: {
            const double u = rng.uniform() * a_;
            if (u >= tab_cum_.back()) {
                // tail branch: invert K t^{-α}/α = a - u
                const double rem = a_ - u;
                return std::pow(tail_amp_ / (alpha_ * rem), 1.0 / alpha_);
            }
            const auto it = std::upper_bound(tab_cum_.begin(), tab_cum_.end(), u);
            const std::size_t i = static_cast<std::size_t>(it - tab_cum_.begin()) - 1;
            const double seg = tab_cum_[i + 1] - tab_cum_[i];
            const double w = seg > 0.0 ? (u - tab_cum_[i]) / seg : 0.0;
            return tab_t_[i] + w * (tab_t_[i + 1] - tab_t_[i]);
        }
    }
    return 0.0;
}

nlohmann::json KernelSpec::to_json() const {
    nlohmann::json j;
    switch (family_) {
        case KernelFamily::Exponential:
            j["family"] = "exponential";
            j["branching_ratio"] = a_;
            j["rate"] = b_;
            break;
        case KernelFamily::ShiftedPowerLaw:
            j["family"] = "shifted_power_law";
            j["branching_ratio"] = a_;
            j["tail_exponent"] = alpha_;
            j["scale"] = c_;
            break;
        case KernelFamily::Tabulated:
            j["family"] = "tabulated";
            j["t"] = tab_t_;
            j["phi"] = tab_phi_;
            break;
    }
    return j;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential")
        return exponential(j.at("branching_ratio").get<double>(),
                           j.at("rate").get<double>());
    if (family == "shifted_power_law")
        return shifted_power_law(j.at("branching_ratio").get<double>(),
                                 j.at("tail_exponent").get<double>(),
                                 j.at("scale").get<double>());
    if (family == "tabulated")
        return tabulated(j.at("t").get<std::vector<double>>(),
                         j.at("phi").get<std::vector<double>>());
    throw config_error("kernel: unknown family '" + family + "'");
}

double NearCriticalFamily::mu() const {
    return c_mu * (1.0 - a_T) * std::pow(observation_scale, 2.0 * alpha() - 1.0);
}

double NearCriticalFamily::normalizer() const {
    return std::pow(observation_scale, -2.0 * alpha());
}

KernelSpec NearCriticalFamily::rescaled_kernel() const {
    return KernelSpec::shifted_power_law(a_T, alpha(), base.scale());
}

double NearCriticalFamily::assumption5_parameter() const {
    return observation_scale * std::pow(1.0 - a_T, 1.0 / alpha());
}

NearCriticalFamily make_near_critical(const KernelSpec& base, double observation_scale,
                                      double a_T, double c_mu) {
    if (base.family() != KernelFamily::ShiftedPowerLaw)
        throw config_error("near-critical family: base kernel must be shifted power law");
    if (std::abs(base.branching_ratio() - 1.0) > 1e-12)
        throw config_error("near-critical family: base kernel must have unit mass");
    if (!(a_T > 0.0 && a_T < 1.0))
        throw config_error("near-critical family: a_T must lie in (0,1)");
    if (!(observation_scale > 0.0) || !(c_mu > 0.0))
        throw config_error("near-critical family: T and C_mu must be > 0");
    NearCriticalFamily fam;
    fam.base = base;
    fam.observation_scale = observation_scale;
    fam.a_T = a_T;
    fam.c_mu = c_mu;
    return fam;
}

}  // namespace hawkes
