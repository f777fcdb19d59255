#include "mzi/analytic.hpp"

#include <cmath>

namespace mzi::analytic {

namespace {

void require_finite_phi(double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase shift phi must be finite");
    }
}

// Scenario parameter bundles, moduli only where the formulas need them.

struct DoubleParams {
    double a;      // |alpha|
    double b;      // |beta|
    double dtheta; // theta_alpha - theta_beta, wrapped
};

struct SqueezedParams {
    double a;           // |alpha|
    double theta_alpha; // coherent phase relative to the squeeze axis
    double r;
    double sh2;   // sinh^2 r
    double s2r;   // sinh 2r
    double em2r;  // e^{-2r}
};

DoubleParams double_params(const DoubleCoherent& s) {
    return {s.alpha.modulus(), s.beta.modulus(), relative_phase(s)};
}

SqueezedParams squeezed_params(const CoherentSqueezedVacuum& s) {
    if (s.xi.theta() != 0.0) {
        throw UnsupportedParameter(
            "closed forms require squeeze phase theta == 0; "
            "use the Fock oracle for nonzero theta");
    }
    const double r = s.xi.r();
    const double sh = std::sinh(r);
    return {s.alpha.modulus(), s.alpha.phase(), r,
            sh * sh, std::sinh(2.0 * r), std::exp(-2.0 * r)};
}

// Misalignment noise of the coherent input against the squeeze axis,
// per unit |alpha|^2: sinh(2r) (1 - cos 2 theta_alpha).
double misalignment(const SqueezedParams& p) {
    return p.s2r * (1.0 - std::cos(2.0 * p.theta_alpha));
}

MomentSet single_moments(const SingleCoherent& s, DetectionScheme scheme,
                         double phi) {
    const double a2 = s.alpha.modulus() * s.alpha.modulus();
    if (scheme == DetectionScheme::DifferenceIntensity) {
        return {std::cos(phi) * a2, a2, -std::sin(phi) * a2};
    }
    const double c = std::cos(phi / 2.0);
    const double mean = c * c * a2;
    return {mean, mean, -0.5 * std::sin(phi) * a2};
}

MomentSet double_moments(const DoubleCoherent& s, DetectionScheme scheme,
                         double phi) {
    const auto p = double_params(s);
    const double a2 = p.a * p.a;
    const double b2 = p.b * p.b;
    const double cross = 2.0 * p.a * p.b * std::cos(p.dtheta);
    if (scheme == DetectionScheme::DifferenceIntensity) {
        return {std::cos(phi) * (a2 - b2) - std::sin(phi) * cross, a2 + b2,
                -std::sin(phi) * (a2 - b2) - std::cos(phi) * cross};
    }
    const double sh = std::sin(phi / 2.0);
    const double ch = std::cos(phi / 2.0);
    // Output port 4 stays coherent, so the variance equals the mean.
    const double mean =
        std::max(sh * sh * b2 + ch * ch * a2 - 0.5 * std::sin(phi) * cross, 0.0);
    return {mean, mean,
            0.5 * (std::sin(phi) * (b2 - a2) - std::cos(phi) * cross)};
}

MomentSet squeezed_moments(const CoherentSqueezedVacuum& s,
                           DetectionScheme scheme, double phi) {
    const auto p = squeezed_params(s);
    const double a2 = p.a * p.a;
    const double half_s2r_sq = 0.5 * p.s2r * p.s2r;
    if (scheme == DetectionScheme::DifferenceIntensity) {
        const double cphi = std::cos(phi);
        const double sphi = std::sin(phi);
        const double var =
            cphi * cphi * (half_s2r_sq + a2) +
            sphi * sphi * (p.sh2 + a2 * p.em2r + a2 * misalignment(p));
        return {cphi * (a2 - p.sh2), var, -sphi * (a2 - p.sh2)};
    }
    const double sh = std::sin(phi / 2.0);
    const double ch = std::cos(phi / 2.0);
    const double s2 = sh * sh;
    const double c2 = ch * ch;
    const double sphi = std::sin(phi);
    const double var = s2 * s2 * half_s2r_sq + s2 * c2 * p.sh2 + c2 * c2 * a2 +
                       s2 * c2 * a2 * p.em2r +
                       0.25 * sphi * sphi * a2 * misalignment(p);
    return {s2 * p.sh2 + c2 * a2, var, 0.5 * sphi * (p.sh2 - a2)};
}

// Sensitivity closed forms. These are the algebraically reduced
// expressions, which stay accurate at the dark-port working points where
// the raw sqrt(variance)/|derivative| ratio degenerates to 0/0.

double single_sensitivity(const SingleCoherent& s, DetectionScheme scheme,
                          double phi) {
    const double a = s.alpha.modulus();
    if (a == 0.0) {
        throw DegenerateInput("vacuum input carries no phase information");
    }
    if (scheme == DetectionScheme::DifferenceIntensity) {
        return 1.0 / (std::abs(std::sin(phi)) * a);
    }
    return 1.0 / (std::abs(std::sin(phi / 2.0)) * a);
}

double double_sensitivity(const DoubleCoherent& s, DetectionScheme scheme,
                          double phi) {
    const auto p = double_params(s);
    const double w = (p.a > 0.0) ? p.b / p.a : 0.0;
    if (p.a == 0.0 && p.b == 0.0) {
        throw DegenerateInput("vacuum input carries no phase information");
    }
    if (p.a == 0.0) {
        // Degenerates to a single coherent input on port 0; N_d flips sign
        // and N_4 <-> N_5, which mirrors phi.
        const double b = p.b;
        if (scheme == DetectionScheme::DifferenceIntensity) {
            return 1.0 / (std::abs(std::sin(phi)) * b);
        }
        return 1.0 / (std::abs(std::cos(phi / 2.0)) * b);
    }
    const double cd = std::cos(p.dtheta);
    if (scheme == DetectionScheme::DifferenceIntensity) {
        const double slope = std::sin(phi) * (1.0 - w * w) +
                             2.0 * std::cos(phi) * w * cd;
        return std::sqrt(1.0 + w * w) / (p.a * std::abs(slope));
    }
    const double sh = std::sin(phi / 2.0);
    const double ch = std::cos(phi / 2.0);
    // In-phase (and anti-phase) lasers admit an exact cancellation of the
    // dark-port factor; use the reduced form there.
    if (p.dtheta == 0.0) {
        return 1.0 / (p.a * std::abs(sh + ch * w));
    }
    if (cd == -1.0) {
        return 1.0 / (p.a * std::abs(sh - ch * w));
    }
    const double num = std::sqrt(
        std::max(sh * sh * w * w + ch * ch - 2.0 * sh * ch * w * cd, 0.0));
    const double den = sh * ch * (1.0 - w * w) + (ch * ch - sh * sh) * w * cd;
    return num / (p.a * std::abs(den));
}

double squeezed_sensitivity(const CoherentSqueezedVacuum& s,
                            DetectionScheme scheme, double phi) {
    const auto p = squeezed_params(s);
    const double a2 = p.a * p.a;
    if (a2 == 0.0 && p.r == 0.0) {
        throw DegenerateInput("vacuum input carries no phase information");
    }
    const double den = std::abs(a2 - p.sh2);
    if (den == 0.0) {
        throw SingularPoint(
            "|alpha|^2 == sinh^2 r: the mean signal is phase independent");
    }
    if (scheme == DetectionScheme::DifferenceIntensity) {
        const double cot = std::cos(phi) / std::sin(phi);
        const double num = (a2 + 0.5 * p.s2r * p.s2r) * cot * cot + p.sh2 +
                           a2 * p.em2r + a2 * misalignment(p);
        return std::sqrt(num) / den;
    }
    const double t = std::tan(phi / 2.0);
    const double t2 = t * t;
    const double num = 0.5 * t2 * p.s2r * p.s2r + p.sh2 + a2 / t2 +
                       a2 * p.em2r + a2 * misalignment(p);
    return std::sqrt(num) / den;
}

double homodyne_bound(const InputState& state, double phi) {
    if (const auto* dc = std::get_if<DoubleCoherent>(&state)) {
        const auto p = double_params(*dc);
        if (p.a > 0.0 && p.b > 0.0 && p.dtheta != 0.0) {
            throw UnsupportedParameter(
                "homodyne bound is derived for in-phase lasers (delta_theta == 0)");
        }
        const double proj = p.a * std::sin(phi / 2.0) + p.b * std::cos(phi / 2.0);
        if (p.a == 0.0 && p.b == 0.0) {
            throw DegenerateInput("vacuum input carries no phase information");
        }
        return 1.0 / std::abs(proj);
    }
    if (const auto* sq = std::get_if<CoherentSqueezedVacuum>(&state)) {
        const auto p = squeezed_params(*sq);
        if (p.a == 0.0) {
            throw DegenerateInput("homodyne bound requires a bright coherent input");
        }
        return std::exp(-p.r) / p.a;  // phase independent
    }
    throw UnsupportedScheme(
        "no homodyne bound is available for a single coherent input");
}

// Wraps x into [0, period).
double wrap_into_period(double x, double period) {
    double w = std::fmod(x, period);
    if (w < 0.0) {
        w += period;
    }
    return w;
}

} // namespace

LossModel::LossModel(double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0 || sigma >= 1.0) {
        throw std::invalid_argument("loss fraction sigma must lie in [0, 1)");
    }
    sigma_ = sigma;
}

double FisherMatrix::difference_phase_bound() const {
    const double det = sum_sum * diff_diff - sum_diff * sum_diff;
    if (!(det > 0.0)) {
        throw DegenerateInput("Fisher matrix is singular");
    }
    return std::sqrt(sum_sum / det);
}

MomentSet moments(const InputState& state, DetectionScheme scheme, double phi) {
    require_finite_phi(phi);
    if (scheme == DetectionScheme::HomodyneBound) {
        throw UnsupportedScheme("homodyne detection has no photon-count moments");
    }
    return std::visit(
        [&](const auto& s) -> MomentSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                return single_moments(s, scheme, phi);
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                return double_moments(s, scheme, phi);
            } else {
                return squeezed_moments(s, scheme, phi);
            }
        },
        state);
}

SensitivityReport sensitivity(const InputState& state, DetectionScheme scheme,
                              double phi) {
    require_finite_phi(phi);
    const double bound = qcrb(state);
    double delta = 0.0;
    if (scheme == DetectionScheme::HomodyneBound) {
        delta = homodyne_bound(state, phi);
    } else {
        delta = std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, SingleCoherent>) {
                    return single_sensitivity(s, scheme, phi);
                } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                    return double_sensitivity(s, scheme, phi);
                } else {
                    return squeezed_sensitivity(s, scheme, phi);
                }
            },
            state);
    }
    return {delta, phi, scheme, bound, delta / bound};
}

double qcrb(const InputState& state) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                const double a = s.alpha.modulus();
                if (a == 0.0) {
                    throw DegenerateInput("vacuum input: Fisher information is zero");
                }
                return 1.0 / a;
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                const double a2 = s.alpha.modulus() * s.alpha.modulus();
                const double b2 = s.beta.modulus() * s.beta.modulus();
                const double sd = std::sin(relative_phase(s));
                const double total = a2 + b2;
                if (total == 0.0) {
                    throw DegenerateInput("vacuum input: Fisher information is zero");
                }
                const double info = total - 4.0 * a2 * b2 * sd * sd / total;
                if (!(info > 0.0)) {
                    throw DegenerateInput(
                        "difference-phase Fisher information is zero");
                }
                return 1.0 / std::sqrt(info);
            } else {
                const double a2 = s.alpha.modulus() * s.alpha.modulus();
                const double sh = std::sinh(s.xi.r());
                const double info = a2 * std::exp(2.0 * s.xi.r()) + sh * sh;
                if (!(info > 0.0)) {
                    throw DegenerateInput("vacuum input: Fisher information is zero");
                }
                return 1.0 / std::sqrt(info);
            }
        },
        state);
}

FisherMatrix fisher_matrix(const InputState& state) {
    const auto* dc = std::get_if<DoubleCoherent>(&state);
    if (dc == nullptr) {
        throw UnsupportedParameter(
            "the two-parameter Fisher matrix is defined for double coherent input");
    }
    const double a = dc->alpha.modulus();
    const double b = dc->beta.modulus();
    const double total = a * a + b * b;
    const double off = -2.0 * a * b * std::sin(relative_phase(*dc));
    return {total, off, total};
}

double optimal_phase(const InputState& state, DetectionScheme scheme,
                     int branch) {
    if (scheme == DetectionScheme::HomodyneBound) {
        throw UnsupportedScheme("homodyne bound has no moment-based optimum");
    }
    const bool diff = (scheme == DetectionScheme::DifferenceIntensity);
    const double period = diff ? M_PI : 2.0 * M_PI;
    const double canonical = std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                if (s.alpha.modulus() == 0.0) {
                    throw DegenerateInput("vacuum input has no optimum");
                }
                return diff ? M_PI_2 : M_PI;
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                const auto p = double_params(s);
                if (p.a == 0.0 && p.b == 0.0) {
                    throw DegenerateInput("vacuum input has no optimum");
                }
                if (p.a == 0.0) {
                    // Light only in port 0: the roles of the output ports
                    // swap, placing the single-mode optimum at phi = 0.
                    return diff ? M_PI_2 : 0.0;
                }
                const double w = p.b / p.a;
                if (diff) {
                    const double u = 1.0 - w * w;
                    const double v = 2.0 * w * std::cos(p.dtheta);
                    if (u == 0.0 && v == 0.0) {
                        throw DegenerateInput(
                            "balanced quadrature inputs: the mean signal is flat");
                    }
                    // atan2 picks the sign branch where the slope magnitude
                    // is maximal; minimisers repeat with period pi.
                    return wrap_into_period(std::atan2(u, v), M_PI);
                }
                if (p.b > 0.0 && p.dtheta != 0.0) {
                    throw UnsupportedParameter(
                        "single-mode optimum is known in closed form only for "
                        "in-phase lasers (delta_theta == 0)");
                }
                return 2.0 * std::atan2(1.0, w);
            } else {
                const auto p = squeezed_params(s);
                if (p.theta_alpha != 0.0) {
                    throw UnsupportedParameter(
                        "closed-form optimum requires theta_alpha == 0; "
                        "use the numerical search instead");
                }
                if (p.a * p.a == p.sh2) {
                    throw SingularPoint(
                        "|alpha|^2 == sinh^2 r: sensitivity diverges everywhere");
                }
                if (diff) {
                    return M_PI_2;
                }
                if (p.a == 0.0) {
                    throw DegenerateInput(
                        "single-mode optimum requires a bright coherent input");
                }
                // tan^2(phi/2) = sqrt(2) |alpha| / sinh 2r at the optimum;
                // r == 0 sends it to pi through atan(inf).
                return 2.0 * std::atan(std::sqrt(std::sqrt(2.0) * p.a / p.s2r));
            }
        },
        state);
    return canonical + static_cast<double>(branch) * period;
}

double best_sensitivity(const InputState& state, DetectionScheme scheme) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                if (scheme == DetectionScheme::HomodyneBound) {
                    throw UnsupportedScheme(
                        "no homodyne bound is available for a single coherent input");
                }
                if (s.alpha.modulus() == 0.0) {
                    throw DegenerateInput("vacuum input carries no phase information");
                }
                return 1.0 / s.alpha.modulus();
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                if (scheme == DetectionScheme::DifferenceIntensity) {
                    // The optimal slope reaches the QCRB for every
                    // relative phase.
                    return qcrb(state);
                }
                const bool has_cross_terms =
                    s.alpha.modulus() > 0.0 && s.beta.modulus() > 0.0;
                if (has_cross_terms && relative_phase(s) != 0.0) {
                    throw UnsupportedParameter(
                        "best single-mode/homodyne sensitivity is known in closed "
                        "form only for in-phase lasers (delta_theta == 0)");
                }
                return qcrb(state);
            } else {
                const auto p = squeezed_params(s);
                const double a2 = p.a * p.a;
                if (scheme == DetectionScheme::HomodyneBound) {
                    if (p.a == 0.0) {
                        throw DegenerateInput(
                            "homodyne bound requires a bright coherent input");
                    }
                    return std::exp(-p.r) / p.a;
                }
                if (p.theta_alpha != 0.0) {
                    throw UnsupportedParameter(
                        "best sensitivity closed forms require theta_alpha == 0");
                }
                const double den = std::abs(a2 - p.sh2);
                if (den == 0.0) {
                    throw SingularPoint(
                        "|alpha|^2 == sinh^2 r: sensitivity diverges everywhere");
                }
                if (scheme == DetectionScheme::DifferenceIntensity) {
                    return std::sqrt(p.sh2 + a2 * p.em2r) / den;
                }
                if (p.a == 0.0) {
                    throw DegenerateInput(
                        "single-mode optimum requires a bright coherent input");
                }
                return std::sqrt(p.sh2 + std::sqrt(2.0) * p.a * p.s2r +
                                 a2 * p.em2r) /
                       den;
            }
        },
        state);
}

double qcrb_with_loss(const InputState& state, const LossModel& loss) {
    const double sigma = loss.sigma();
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SingleCoherent>) {
                const double a = s.alpha.modulus();
                if (a == 0.0) {
                    throw DegenerateInput("vacuum input: Fisher information is zero");
                }
                return 1.0 / (a * std::sqrt(1.0 - sigma));
            } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                throw UnsupportedParameter(
                    "no lossy bound is available for the double coherent input");
            } else {
                const auto p = squeezed_params(s);
                const double a2 = p.a * p.a;
                const double num = std::sqrt(sigma + (1.0 - sigma) * p.em2r);
                const double den = std::sqrt((1.0 - sigma) * a2 +
                                             sigma * (1.0 - sigma) * p.sh2);
                if (den == 0.0) {
                    throw DegenerateInput(
                        "lossy bound requires a bright coherent input");
                }
                return num / den;
            }
        },
        state);
}

} // namespace mzi::analytic
