#pragma once

#include <optional>
#include <utility>

#include "mzi/analytic.hpp"
#include "mzi/fock_oracle.hpp"

namespace mzi::estimator {

enum class OptimumMethod { ClosedForm, GridRefined };

enum class EvaluationSource { Analytic, Oracle };

/// Result of a working-point search.
struct OptimumResult {
    double phi_opt = 0.0;
    double delta_phi_opt = 0.0;
    OptimumMethod method = OptimumMethod::GridRefined;
    /// |numerical - closed form| in radians, populated when a closed-form
    /// optimum exists under the analytic preconditions.
    std::optional<double> agreement_gap;
};

/// Generic error-propagation sensitivity built only on moments:
/// sqrt(variance)/|d<N>/dphi|. Returns +inf when the derivative vanishes
/// with positive variance; throws IndeterminateSensitivity on 0/0.
double sensitivity_from_moments(const analytic::MomentSet& m);

struct SearchOptions {
    int grid_points = 512;            // dense localisation grid
    double bracket_tolerance = 1e-9;  // golden-section stop width, radians
    double fd_step = 1e-5;            // oracle finite-difference step
    fock::TruncationPolicy truncation = fock::TruncationPolicy::adaptive();
};

/// Finds the sensitivity minimum on the interval by dense-grid
/// localisation followed by golden-section refinement. The prepared Fock
/// state is cached across phase evaluations for the Oracle source.
/// Throws NoInteriorMinimum when the minimum sits on the boundary.
OptimumResult find_optimum(const InputState& state, DetectionScheme scheme,
                           std::pair<double, double> interval,
                           EvaluationSource source = EvaluationSource::Analytic,
                           const SearchOptions& options = {});

} // namespace mzi::estimator
