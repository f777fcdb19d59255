#include "mzi/fock_oracle.hpp"

#include <cmath>
#include <functional>

namespace mzi::fock {

namespace {

constexpr int kMaxPerModeCutoff = 512;
constexpr double kFixedDeficitLimit = 1e-6;

// Desk-scale guards for adaptive truncation.
constexpr double kMaxCoherentAmplitude = 6.0;
constexpr double kMaxSqueezeMagnitude = 1.2;

using cdouble = std::complex<double>;

// Coefficients of a coherent state |alpha> up to cutoff (inclusive):
// c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), built by a stable recurrence.
std::vector<cdouble> coherent_coefficients(const ComplexAmplitude& alpha,
                                           int cutoff) {
    const cdouble a = std::polar(alpha.modulus(), alpha.phase());
    std::vector<cdouble> c(static_cast<std::size_t>(cutoff) + 1);
    c[0] = std::exp(-0.5 * alpha.modulus() * alpha.modulus());
    for (int n = 1; n <= cutoff; ++n) {
        c[static_cast<std::size_t>(n)] =
            c[static_cast<std::size_t>(n) - 1] * a / std::sqrt(double(n));
    }
    return c;
}

// Squeezed-vacuum coefficients: only even occupation,
// c_{2m} = (-e^{i theta} tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r).
std::vector<cdouble> squeezed_coefficients(const SqueezeParameter& xi,
                                           int cutoff) {
    std::vector<cdouble> c(static_cast<std::size_t>(cutoff) + 1);
    c[0] = 1.0 / std::sqrt(std::cosh(xi.r()));
    const cdouble step = -std::polar(std::tanh(xi.r()), xi.theta());
    cdouble even = c[0];
    for (int m = 1; 2 * m <= cutoff; ++m) {
        even *= step * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
        c[static_cast<std::size_t>(2 * m)] = even;
    }
    return c;
}

double tail_weight(const std::vector<cdouble>& c) {
    double cum = 0.0;
    for (const auto& z : c) {
        cum += std::norm(z);
    }
    return 1.0 - cum;
}

int adaptive_cutoff(const std::function<std::vector<cdouble>(int)>& build,
                    double per_mode_target) {
    // Grow in steps; the per-mode weights decay at least geometrically for
    // the states handled here.
    for (int cutoff = 8; cutoff <= kMaxPerModeCutoff; cutoff += 8) {
        if (tail_weight(build(cutoff)) <= per_mode_target) {
            return cutoff;
        }
    }
    throw TruncationTooSmall(
        "adaptive truncation did not converge within the cutoff cap");
}

struct ModeCoefficients {
    std::vector<cdouble> port0;
    std::vector<cdouble> port1;
    double norm_deficit = 0.0;
};

// Per-mode coefficient vectors of the (product) input state, truncated per
// the policy. Port 1 always carries the coherent drive.
ModeCoefficients mode_coefficients(const InputState& state,
                                   const TruncationPolicy& policy) {
    const auto build0 = [&state](int cutoff) -> std::vector<cdouble> {
        return std::visit(
            [cutoff](const auto& s) -> std::vector<cdouble> {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, SingleCoherent>) {
                    std::vector<cdouble> vac(static_cast<std::size_t>(cutoff) + 1);
                    vac[0] = 1.0;
                    return vac;
                } else if constexpr (std::is_same_v<T, DoubleCoherent>) {
                    return coherent_coefficients(s.beta, cutoff);
                } else {
                    return squeezed_coefficients(s.xi, cutoff);
                }
            },
            state);
    };
    const auto build1 = [&state](int cutoff) {
        return coherent_coefficients(
            std::visit([](const auto& s) { return s.alpha; }, state), cutoff);
    };

    int cut0 = 0;
    int cut1 = 0;
    if (policy.is_adaptive()) {
        std::visit(
            [](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if (s.alpha.modulus() > kMaxCoherentAmplitude) {
                    throw UnsupportedParameter(
                        "adaptive truncation is guarded to |alpha| <= 6");
                }
                if constexpr (std::is_same_v<T, DoubleCoherent>) {
                    if (s.beta.modulus() > kMaxCoherentAmplitude) {
                        throw UnsupportedParameter(
                            "adaptive truncation is guarded to |beta| <= 6");
                    }
                } else if constexpr (std::is_same_v<T, CoherentSqueezedVacuum>) {
                    if (s.xi.r() > kMaxSqueezeMagnitude) {
                        throw UnsupportedParameter(
                            "adaptive truncation is guarded to r <= 1.2");
                    }
                }
            },
            state);
        const double per_mode = 0.5 * policy.target_norm_deficit();
        cut0 = adaptive_cutoff(build0, per_mode);
        cut1 = adaptive_cutoff(build1, per_mode);
    } else {
        cut0 = cut1 = policy.n_max();
    }

    ModeCoefficients modes{build0(cut0), build1(cut1), 0.0};
    const double kept =
        (1.0 - tail_weight(modes.port0)) * (1.0 - tail_weight(modes.port1));
    modes.norm_deficit = std::max(1.0 - kept, 0.0);
    if (!policy.is_adaptive() && modes.norm_deficit > kFixedDeficitLimit) {
        throw TruncationTooSmall(
            "fixed cutoff n_max leaves a norm deficit above 1e-6");
    }
    return modes;
}

// Normally ordered single-mode expectation <(a+)^p a^q> on a coefficient
// vector.
cdouble mode_moment(const std::vector<cdouble>& c, int p, int q) {
    cdouble sum = 0.0;
    const int size = static_cast<int>(c.size());
    for (int n = q; n < size; ++n) {
        const int m = n - q + p;
        if (m >= size) {
            continue;
        }
        double weight = 1.0;
        for (int j = 0; j < q; ++j) {
            weight *= double(n - j);
        }
        for (int j = 0; j < p; ++j) {
            weight *= double(m - j);
        }
        sum += std::conj(c[static_cast<std::size_t>(m)]) *
               c[static_cast<std::size_t>(n)] * std::sqrt(weight);
    }
    return sum;
}

// Input-side expectation values entering the expanded observables.
struct InputMoments {
    double n0, n1;          // <a0+ a0>, <a1+ a1>
    double n0n0, n1n1;      // <a0+ a0+ a0 a0>, <a1+ a1+ a1 a1>
    double n0n1;            // <a0+ a0 a1+ a1>
    double exchange2;       // <a0^2 (a1+)^2> + c.c.
    double drive0;          // <a0+ a0^2 a1+> + c.c.
    double drive1;          // <a0 (a1+)^2 a1> + c.c.
    double exchange1;       // <a0 a1+> + c.c.
};

InputMoments input_moments(const ModeCoefficients& modes) {
    const auto& c0 = modes.port0;
    const auto& c1 = modes.port1;
    InputMoments m{};
    m.n0 = mode_moment(c0, 1, 1).real();
    m.n1 = mode_moment(c1, 1, 1).real();
    m.n0n0 = mode_moment(c0, 2, 2).real();
    m.n1n1 = mode_moment(c1, 2, 2).real();
    m.n0n1 = m.n0 * m.n1;
    const cdouble a0 = mode_moment(c0, 0, 1);
    const cdouble a1 = mode_moment(c1, 0, 1);
    const cdouble a0sq = mode_moment(c0, 0, 2);
    const cdouble a1sq = mode_moment(c1, 0, 2);
    const cdouble na0 = mode_moment(c0, 1, 2); // <a0+ a0^2>
    const cdouble na1 = mode_moment(c1, 1, 2); // <a1+ a1^2>
    m.exchange2 = 2.0 * (a0sq * std::conj(a1sq)).real();
    m.drive0 = 2.0 * (na0 * std::conj(a1)).real();
    m.drive1 = 2.0 * (a0 * std::conj(na1)).real();
    m.exchange1 = 2.0 * (a0 * std::conj(a1)).real();
    return m;
}

} // namespace

TruncationPolicy TruncationPolicy::fixed(int n_max) {
    if (n_max <= 0 || n_max > kMaxPerModeCutoff) {
        throw std::invalid_argument("fixed cutoff n_max out of range");
    }
    TruncationPolicy p;
    p.adaptive_ = false;
    p.n_max_ = n_max;
    return p;
}

TruncationPolicy TruncationPolicy::adaptive(double target_norm_deficit) {
    if (!(target_norm_deficit > 0.0) || target_norm_deficit > 1e-6) {
        throw std::invalid_argument(
            "adaptive target norm deficit must lie in (0, 1e-6]");
    }
    TruncationPolicy p;
    p.adaptive_ = true;
    p.target_ = target_norm_deficit;
    return p;
}

FockState::FockState(std::vector<std::complex<double>> amplitudes, int n_max,
                     double norm_deficit)
    : amplitudes_(std::move(amplitudes)),
      n_max_(n_max),
      norm_deficit_(norm_deficit) {
    const std::size_t side = static_cast<std::size_t>(n_max_) + 1;
    if (n_max_ < 0 || amplitudes_.size() != side * side) {
        throw std::invalid_argument("amplitude grid does not match n_max");
    }
    if (!(norm_deficit_ >= 0.0)) {
        throw std::invalid_argument("norm deficit must be >= 0");
    }
    double norm = 0.0;
    for (const auto& z : amplitudes_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("amplitudes must be finite");
        }
        norm += std::norm(z);
    }
    if (norm > 1.0 + 1e-12) {
        throw std::invalid_argument("amplitude vector norm exceeds one");
    }
}

double FockState::norm_squared() const {
    double norm = 0.0;
    for (const auto& z : amplitudes_) {
        norm += std::norm(z);
    }
    return norm;
}

FockState prepare(const InputState& state, const TruncationPolicy& policy) {
    const ModeCoefficients modes = mode_coefficients(state, policy);
    const int cut0 = static_cast<int>(modes.port0.size()) - 1;
    const int cut1 = static_cast<int>(modes.port1.size()) - 1;
    // A grid side of cut0 + cut1 keeps every populated total-photon sector
    // complete, so the interferometer rotation is exactly unitary on them.
    const int n_cap = cut0 + cut1;
    const std::size_t side = static_cast<std::size_t>(n_cap) + 1;
    std::vector<cdouble> amp(side * side);
    for (int n0 = 0; n0 <= cut0; ++n0) {
        for (int n1 = 0; n1 <= cut1; ++n1) {
            amp[static_cast<std::size_t>(n0) * side + static_cast<std::size_t>(n1)] =
                modes.port0[static_cast<std::size_t>(n0)] *
                modes.port1[static_cast<std::size_t>(n1)];
        }
    }
    return FockState(std::move(amp), n_cap, modes.norm_deficit);
}

FockState apply_mzi(const FockState& state, double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase shift phi must be finite");
    }
    const int n_cap = state.n_max();
    const std::size_t side = static_cast<std::size_t>(n_cap) + 1;
    const double s = std::sin(phi / 2.0);
    const double c = std::cos(phi / 2.0);
    const auto& in = state.amplitudes();
    std::vector<cdouble> out(side * side);
    out[0] = in[0];

    // Per-sector matrices D_N are built by recursion: the column for
    // (n0, n1) follows from a sector-(N-1) column through one creation
    // operator, U a0+ U+ = -s a0+ + c a1+ and U a1+ U+ = c a0+ + s a1+.
    std::vector<double> prev{1.0};
    std::vector<double> curr;
    for (int N = 1; N <= n_cap; ++N) {
        const std::size_t dim = static_cast<std::size_t>(N) + 1;
        curr.assign(dim * dim, 0.0);
        for (int k = 0; k <= N; ++k) {
            const int parent = (k >= 1) ? k - 1 : 0;
            const double f0 = (k >= 1) ? -s : c;
            const double f1 = (k >= 1) ? c : s;
            const double scale = 1.0 / std::sqrt(double((k >= 1) ? k : N));
            for (int m = 0; m < N; ++m) {
                const double v =
                    prev[static_cast<std::size_t>(m) * N +
                         static_cast<std::size_t>(parent)];
                if (v == 0.0) {
                    continue;
                }
                curr[static_cast<std::size_t>(m + 1) * dim +
                     static_cast<std::size_t>(k)] +=
                    f0 * std::sqrt(double(m + 1)) * v * scale;
                curr[static_cast<std::size_t>(m) * dim +
                     static_cast<std::size_t>(k)] +=
                    f1 * std::sqrt(double(N - m)) * v * scale;
            }
        }
        // Rotate the sector amplitudes |k, N-k>.
        for (int m = 0; m <= N; ++m) {
            cdouble acc = 0.0;
            for (int k = 0; k <= N; ++k) {
                const double d = curr[static_cast<std::size_t>(m) * dim +
                                      static_cast<std::size_t>(k)];
                if (d != 0.0) {
                    acc += d * in[static_cast<std::size_t>(k) * side +
                                  static_cast<std::size_t>(N - k)];
                }
            }
            out[static_cast<std::size_t>(m) * side +
                static_cast<std::size_t>(N - m)] = acc;
        }
        prev.swap(curr);
    }

    // Sectors with N > n_cap are clipped by the square grid and cannot be
    // rotated exactly; states built by prepare() never populate them.
    double clipped = 0.0;
    for (int n0 = 1; n0 <= n_cap; ++n0) {
        for (int n1 = n_cap - n0 + 1; n1 <= n_cap; ++n1) {
            clipped += std::norm(in[static_cast<std::size_t>(n0) * side +
                                    static_cast<std::size_t>(n1)]);
        }
    }
    if (clipped > 1e-12) {
        throw std::invalid_argument(
            "state populates clipped total-photon sectors (n0 + n1 > n_max)");
    }
    return FockState(std::move(out), n_cap, state.norm_deficit());
}

std::pair<double, double> output_mean_variance(const FockState& output,
                                               DetectionScheme scheme) {
    if (scheme == DetectionScheme::HomodyneBound) {
        throw UnsupportedScheme("homodyne detection has no photon-count moments");
    }
    const bool diff = (scheme == DetectionScheme::DifferenceIntensity);
    const int n_cap = output.n_max();
    const std::size_t side = static_cast<std::size_t>(n_cap) + 1;
    const auto& amp = output.amplitudes();
    double mean = 0.0;
    double second = 0.0;
    for (int n0 = 0; n0 <= n_cap; ++n0) {
        for (int n1 = 0; n1 <= n_cap; ++n1) {
            const double p = std::norm(amp[static_cast<std::size_t>(n0) * side +
                                           static_cast<std::size_t>(n1)]);
            if (p == 0.0) {
                continue;
            }
            const double x = diff ? double(n0 - n1) : double(n0);
            mean += p * x;
            second += p * x * x;
        }
    }
    return {mean, std::max(second - mean * mean, 0.0)};
}

double total_photon_mean(const FockState& state) {
    const int n_cap = state.n_max();
    const std::size_t side = static_cast<std::size_t>(n_cap) + 1;
    const auto& amp = state.amplitudes();
    double mean = 0.0;
    for (int n0 = 0; n0 <= n_cap; ++n0) {
        for (int n1 = 0; n1 <= n_cap; ++n1) {
            mean += std::norm(amp[static_cast<std::size_t>(n0) * side +
                                  static_cast<std::size_t>(n1)]) *
                    double(n0 + n1);
        }
    }
    return mean;
}

analytic::MomentSet observable_moments(const FockState& input, double phi,
                                       DetectionScheme scheme, double fd_step) {
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    const auto [mean, variance] =
        output_mean_variance(apply_mzi(input, phi), scheme);
    const double up =
        output_mean_variance(apply_mzi(input, phi + fd_step), scheme).first;
    const double down =
        output_mean_variance(apply_mzi(input, phi - fd_step), scheme).first;
    return {mean, variance, (up - down) / (2.0 * fd_step)};
}

analytic::MomentSet normal_ordered_moments(const InputState& state, double phi,
                                           DetectionScheme scheme,
                                           const TruncationPolicy& policy) {
    if (scheme == DetectionScheme::HomodyneBound) {
        throw UnsupportedScheme("homodyne detection has no photon-count moments");
    }
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase shift phi must be finite");
    }
    const InputMoments m = input_moments(mode_coefficients(state, policy));
    const double sphi = std::sin(phi);
    const double cphi = std::cos(phi);
    if (scheme == DetectionScheme::DifferenceIntensity) {
        const double mean = cphi * (m.n1 - m.n0) - sphi * m.exchange1;
        const double second =
            cphi * cphi * (m.n0n0 + m.n1n1) - 2.0 * std::cos(2.0 * phi) * m.n0n1 +
            m.n0 + m.n1 + sphi * sphi * m.exchange2 +
            std::sin(2.0 * phi) * (m.drive0 - m.drive1);
        const double slope = sphi * (m.n0 - m.n1) - cphi * m.exchange1;
        return {mean, std::max(second - mean * mean, 0.0), slope};
    }
    const double s2 = std::sin(phi / 2.0) * std::sin(phi / 2.0);
    const double c2 = std::cos(phi / 2.0) * std::cos(phi / 2.0);
    const double mean = s2 * m.n0 + c2 * m.n1 - 0.5 * sphi * m.exchange1;
    const double second = s2 * s2 * m.n0n0 + c2 * c2 * m.n1n1 +
                          sphi * sphi * m.n0n1 + s2 * m.n0 + c2 * m.n1 +
                          0.25 * sphi * sphi * m.exchange2 -
                          s2 * sphi * m.drive0 - c2 * sphi * m.drive1 -
                          0.5 * sphi * m.exchange1;
    const double slope = 0.5 * (sphi * (m.n0 - m.n1) - cphi * m.exchange1);
    return {mean, std::max(second - mean * mean, 0.0), slope};
}

} // namespace mzi::fock
