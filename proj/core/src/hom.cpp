#include "wvsim/hom.hpp"

#include <cmath>
#include <stdexcept>

namespace wvsim {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
}

}  // namespace

PhotonPairConfig standard_pair(double p_a2, const MeasurementStrength& strength) {
    require_finite(p_a2, "standard_pair");
    return PhotonPairConfig{
        1.0, p_a2, strength,
        std::numbers::pi / 4,  // undoes photon 1's full θ → π/2−θ rotation
        strength.theta(),      // leaves photon 2 uncorrected
        0.0,
    };
}

double overlap_visibility(const StateVector& s1, const StateVector& s2) {
    if (s1.dim() != 2 || s2.dim() != 2 || !s1.same_basis(s2)) {
        throw std::invalid_argument("overlap_visibility: need two states on a shared dim-2 basis");
    }
    if (!s1.is_normalized(kPipelineTol) || !s2.is_normalized(kPipelineTol)) {
        throw std::invalid_argument("overlap_visibility: states must be normalized");
    }
    return fidelity(s1, s2);
}

double pair_visibility(const PhotonPairConfig& config) {
    require_finite(config.hwp4_angle, "pair_visibility");
    require_finite(config.hwp5_angle, "pair_visibility");
    if (!std::isfinite(config.background_ratio) || config.background_ratio < 0.0) {
        throw std::invalid_argument("pair_visibility: background_ratio must be ≥ 0");
    }
    const InterferometerRun arm1 = run_interferometer(config.p_a1, config.strength);
    const InterferometerRun arm2 = run_interferometer(config.p_a2, config.strength);
    const StateVector s1 = apply(hwp(config.hwp4_angle), arm1.output_polarization);
    const StateVector s2 = apply(hwp(config.hwp5_angle), arm2.output_polarization);
    return overlap_visibility(s1, s2) / (1.0 + config.background_ratio);
}

VisibilitySweep visibility_sweep(const PhotonPairConfig& base,
                                 const std::vector<double>& hwp5_grid) {
    if (hwp5_grid.empty()) {
        throw std::invalid_argument("visibility_sweep: empty angle grid");
    }
    VisibilitySweep sweep;
    sweep.hwp5_angles.reserve(hwp5_grid.size());
    sweep.relative_angles.reserve(hwp5_grid.size());
    sweep.visibilities.reserve(hwp5_grid.size());

    const double reference = base.strength.theta();
    PhotonPairConfig config = base;
    std::size_t best = 0;
    for (std::size_t k = 0; k < hwp5_grid.size(); ++k) {
        config.hwp5_angle = hwp5_grid[k];
        const double vis = pair_visibility(config);
        sweep.hwp5_angles.push_back(hwp5_grid[k]);
        sweep.relative_angles.push_back(hwp5_grid[k] - reference);
        sweep.visibilities.push_back(vis);
        const bool better = vis > sweep.visibilities[best] ||
                            (vis == sweep.visibilities[best] && hwp5_grid[k] < hwp5_grid[best]);
        if (k > 0 && better) best = k;
    }
    sweep.argmax_index = best;
    sweep.argmax_angle = sweep.hwp5_angles[best];
    sweep.argmax_relative = sweep.relative_angles[best];
    sweep.max_visibility = sweep.visibilities[best];
    return sweep;
}

SymmetricAngleReport symmetric_angle_report(double p_a2, const MeasurementStrength& strength) {
    require_finite(p_a2, "symmetric_angle_report");
    const double theta = strength.theta();
    const InterferometerRun run = run_interferometer(p_a2, strength);
    return SymmetricAngleReport{
        restoration_hwp_angle(run, theta),
        theta + p_a2 * delta_theta(strength) / 2.0,
        theta + p_a2 * strength.g() / 2.0,
    };
}

double tied_background_ratio(double kappa, double p_a2, const MeasurementStrength& strength) {
    require_finite(kappa, "tied_background_ratio");
    if (kappa < 0.0) {
        throw std::invalid_argument("tied_background_ratio: kappa must be ≥ 0");
    }
    const InterferometerRun run = run_interferometer(p_a2, strength);
    return kappa / run.postselect_prob;
}

}  // namespace wvsim
