#include "mzi/estimator.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace mzi::estimator {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section step ratio.
const double kInvGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// One parabolic fit through (x0 - w, x0, x0 + w) to pull the minimum out
// of the flat comparison-noise basin left behind by pure golden-section
// bracketing.
double parabolic_snap(const std::function<double(double)>& f, double x0,
                      double w, double lo, double hi) {
    const double xl = x0 - w;
    const double xr = x0 + w;
    if (xl <= lo || xr >= hi) {
        return x0;
    }
    const double fl = f(xl);
    const double f0 = f(x0);
    const double fr = f(xr);
    if (!std::isfinite(fl) || !std::isfinite(f0) || !std::isfinite(fr)) {
        return x0;
    }
    const double curvature = fl - 2.0 * f0 + fr;
    if (!(curvature > 0.0)) {
        return x0;
    }
    const double shift = 0.5 * w * (fl - fr) / curvature;
    if (std::abs(shift) > w) {
        return x0;
    }
    const double candidate = x0 + shift;
    return (f(candidate) <= f0) ? candidate : x0;
}

} // namespace

double sensitivity_from_moments(const analytic::MomentSet& m) {
    if (!(m.variance >= 0.0)) {
        throw std::invalid_argument("variance must be >= 0");
    }
    const double slope = std::abs(m.d_mean_d_phi);
    if (slope == 0.0) {
        if (m.variance == 0.0) {
            throw IndeterminateSensitivity(
                "vanishing noise and vanishing slope: 0/0 working point");
        }
        return kInf;
    }
    return std::sqrt(m.variance) / slope;
}

OptimumResult find_optimum(const InputState& state, DetectionScheme scheme,
                           std::pair<double, double> interval,
                           EvaluationSource source,
                           const SearchOptions& options) {
    const auto [lo, hi] = interval;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw std::invalid_argument("search interval must be finite with lo < hi");
    }
    if (hi - lo > 2.0 * M_PI + 1e-12) {
        throw std::invalid_argument("search interval must not exceed one period (2 pi)");
    }

    std::function<double(double)> evaluate;
    std::optional<fock::FockState> prepared;  // cached: phi independent
    if (source == EvaluationSource::Oracle) {
        if (scheme == DetectionScheme::HomodyneBound) {
            throw UnsupportedScheme("the oracle has no homodyne moment path");
        }
        prepared = fock::prepare(state, options.truncation);
        evaluate = [&prepared, scheme, &options](double phi) {
            return sensitivity_from_moments(fock::observable_moments(
                *prepared, phi, scheme, options.fd_step));
        };
    } else {
        evaluate = [&state, scheme](double phi) {
            return analytic::sensitivity(state, scheme, phi).delta_phi;
        };
    }

    // Dense localisation grid, ties broken towards the smallest phase.
    const int n = std::max(options.grid_points, 512);
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    int best = 0;
    for (int i = 0; i <= n; ++i) {
        const double phi = lo + (hi - lo) * double(i) / double(n);
        double v;
        try {
            v = evaluate(phi);
        } catch (const IndeterminateSensitivity&) {
            v = kInf;  // isolated 0/0 grid hit; the basin is resolved around it
        }
        values[static_cast<std::size_t>(i)] = v;
        if (v < values[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    if (best == 0 || best == n) {
        throw NoInteriorMinimum("sensitivity minimum lies on the interval boundary");
    }

    // Golden-section refinement inside the bracketing neighbours.
    double a = lo + (hi - lo) * double(best - 1) / double(n);
    double b = lo + (hi - lo) * double(best + 1) / double(n);
    double x1 = b - kInvGolden * (b - a);
    double x2 = a + kInvGolden * (b - a);
    double f1 = evaluate(x1);
    double f2 = evaluate(x2);
    while (b - a > options.bracket_tolerance) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvGolden * (b - a);
            f1 = evaluate(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvGolden * (b - a);
            f2 = evaluate(x2);
        }
    }
    double phi_opt = 0.5 * (a + b);
    phi_opt = parabolic_snap(evaluate, phi_opt, 1e-4, lo, hi);

    OptimumResult result;
    result.phi_opt = phi_opt;
    result.delta_phi_opt = evaluate(phi_opt);
    result.method = OptimumMethod::GridRefined;

    // Populate the gap against the closed-form optimum family when the
    // analytic preconditions hold: candidates are the canonical optimum
    // shifted by whole periods into the search interval.
    try {
        const double canonical = analytic::optimal_phase(state, scheme, 0);
        const double period =
            (scheme == DetectionScheme::DifferenceIntensity) ? M_PI : 2.0 * M_PI;
        double gap = kInf;
        const int k_lo = static_cast<int>(std::floor((lo - canonical) / period));
        const int k_hi = static_cast<int>(std::ceil((hi - canonical) / period));
        for (int k = k_lo; k <= k_hi; ++k) {
            gap = std::min(gap, std::abs(phi_opt - (canonical + k * period)));
        }
        result.agreement_gap = gap;
    } catch (const Error&) {
        // No closed form under these parameters; leave the gap empty.
    }
    return result;
}

} // namespace mzi::estimator
