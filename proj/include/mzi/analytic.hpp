#pragma once

#include "mzi/states.hpp"

namespace mzi::analytic {

/// Mean, variance and phase derivative of the mean for the measured
/// photon-count observable at one working point.
struct MomentSet {
    double mean = 0.0;          // photon counts
    double variance = 0.0;      // photon counts squared, >= 0
    double d_mean_d_phi = 0.0;  // photon counts per radian
};

/// Phase sensitivity at a working point together with the detection-free
/// lower bound it is measured against.
struct SensitivityReport {
    double delta_phi = 0.0;      // radians; +inf at blind points
    double phi = 0.0;            // working point the report refers to
    DetectionScheme scheme = DetectionScheme::DifferenceIntensity;
    double qcrb = 0.0;           // radians
    double ratio_to_qcrb = 0.0;  // delta_phi / qcrb, >= 1 up to rounding
};

/// Photon loss modelled by a single fraction sigma in [0, 1).
class LossModel {
  public:
    explicit LossModel(double sigma);
    double sigma() const { return sigma_; }

  private:
    double sigma_;
};

/// 2x2 Fisher information matrix over the sum/difference phases
/// (phi_+, phi_-) of the two interferometer arms. Symmetric by
/// construction: F_{+-} == F_{-+}.
struct FisherMatrix {
    double sum_sum = 0.0;    // F_{++}
    double sum_diff = 0.0;   // F_{+-} = F_{-+}
    double diff_diff = 0.0;  // F_{--}

    /// sqrt((F^{-1})_{--}): the difference-phase estimation bound.
    /// Throws DegenerateInput if the matrix is singular.
    double difference_phase_bound() const;
};

/// Closed-form moments of the chosen photon-count observable.
///
/// Supports DifferenceIntensity and SingleModeIntensity; the squeezed
/// input requires squeeze phase theta == 0 (general theta_alpha of the
/// coherent amplitude is covered by the misalignment terms).
MomentSet moments(const InputState& state, DetectionScheme scheme, double phi);

/// Error-propagation sensitivity delta_phi = sqrt(variance)/|d<N>/dphi|
/// from the per-scenario closed forms, or the homodyne bound value for
/// DetectionScheme::HomodyneBound. Returns +inf at blind points.
SensitivityReport sensitivity(const InputState& state, DetectionScheme scheme,
                              double phi);

/// Quantum Cramer-Rao bound of the input state (detection independent).
double qcrb(const InputState& state);

/// Two-parameter Fisher matrix of a double coherent input.
FisherMatrix fisher_matrix(const InputState& state);

/// Closed-form optimal working point on branch k.
///
/// The canonical (k == 0) representative is the true minimiser in [0, pi)
/// for difference detection and [0, 2 pi) for single-mode detection;
/// branches step by pi and 2 pi respectively.
double optimal_phase(const InputState& state, DetectionScheme scheme,
                     int branch = 0);

/// Sensitivity at the optimal working point, from the dedicated best-value
/// closed forms. Coincides with sensitivity(state, scheme,
/// optimal_phase(state, scheme, 0)).delta_phi to ~1e-12 relative.
double best_sensitivity(const InputState& state, DetectionScheme scheme);

/// Cramer-Rao bound with photon loss. Supported for SingleCoherent and
/// CoherentSqueezedVacuum inputs.
double qcrb_with_loss(const InputState& state, const LossModel& loss);

} // namespace mzi::analytic
