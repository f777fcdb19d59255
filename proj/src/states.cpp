#include "mzi/states.hpp"

#include <cmath>
#include <sstream>

namespace mzi {

double wrap_phase(double angle) {
    // remainder() lands in [-pi, pi]; fold the open end onto +pi.
    double w = std::remainder(angle, 2.0 * M_PI);
    if (w <= -M_PI) {
        w += 2.0 * M_PI;
    }
    return w;
}

namespace {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

} // namespace

ComplexAmplitude::ComplexAmplitude(double modulus, double phase) {
    require_finite(modulus, "amplitude modulus");
    require_finite(phase, "amplitude phase");
    if (modulus < 0.0) {
        throw std::invalid_argument("amplitude modulus must be >= 0");
    }
    modulus_ = modulus;
    phase_ = wrap_phase(phase);
}

SqueezeParameter::SqueezeParameter(double r, double theta) {
    require_finite(r, "squeeze magnitude");
    require_finite(theta, "squeeze phase");
    if (r < 0.0) {
        throw std::invalid_argument("squeeze magnitude must be >= 0");
    }
    r_ = r;
    theta_ = wrap_phase(theta);
}

std::string scheme_name(DetectionScheme scheme) {
    switch (scheme) {
        case DetectionScheme::DifferenceIntensity: return "diff";
        case DetectionScheme::SingleModeIntensity: return "single";
        case DetectionScheme::HomodyneBound: return "homodyne";
    }
    throw std::invalid_argument("unknown detection scheme");
}

double power_ratio(const DoubleCoherent& state) {
    if (state.alpha.modulus() == 0.0) {
        throw DegenerateInput("power ratio undefined: reference port 1 is dark");
    }
    return state.beta.modulus() / state.alpha.modulus();
}

double power_ratio(const InputState& state) {
    const auto* dc = std::get_if<DoubleCoherent>(&state);
    if (dc == nullptr) {
        throw UnsupportedParameter("power ratio requires a double coherent input");
    }
    return power_ratio(*dc);
}

double mean_photon_number(const InputState& state) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                const double a = s.alpha.modulus();
                return a * a;
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                const double a = s.alpha.modulus();
                const double b = s.beta.modulus();
                return a * a + b * b;
            } else {
                const double a = s.alpha.modulus();
                const double sh = std::sinh(s.xi.r());
                return a * a + sh * sh;
            }
        },
        state);
}

double relative_phase(const DoubleCoherent& state) {
    return wrap_phase(state.alpha.phase() - state.beta.phase());
}

double relative_phase(const InputState& state) {
    const auto* dc = std::get_if<DoubleCoherent>(&state);
    if (dc == nullptr) {
        throw UnsupportedParameter("relative phase requires a double coherent input");
    }
    return relative_phase(*dc);
}

std::string describe(const InputState& state) {
    std::ostringstream out;
    out.precision(17);
    std::visit(
        [&out](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                out << "single alpha=" << s.alpha.modulus()
                    << " theta_alpha=" << s.alpha.phase();
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                out << "double alpha=" << s.alpha.modulus()
                    << " beta=" << s.beta.modulus()
                    << " theta_alpha=" << s.alpha.phase()
                    << " delta_theta=" << relative_phase(s);
            } else {
                out << "squeezed alpha=" << s.alpha.modulus()
                    << " theta_alpha=" << s.alpha.phase() << " r=" << s.xi.r()
                    << " theta=" << s.xi.theta();
            }
        },
        state);
    return out.str();
}

} // namespace mzi
