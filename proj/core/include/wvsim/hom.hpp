// hom.hpp
// Two-photon Hong-Ou-Mandel visibility between a restored reference photon
// (weak value 1) and a corrected partner photon, as a function of the
// correcting wave-plate angle.
//
// Interference is modeled at zero delay with perfect spectral overlap, so
// the visibility is the squared polarization overlap |<s1|s2>|²; a scalar
// accidental/signal coincidence ratio degrades it to V/(1+r).

#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "wvsim/optics.hpp"

namespace wvsim {

struct PhotonPairConfig {
    double p_a1;                  // photon 1 weak value (nominally 1)
    double p_a2;                  // photon 2 weak value
    MeasurementStrength strength; // shared by both arms
    double hwp4_angle;            // photon 1 correction plate, radians
    double hwp5_angle;            // photon 2 correction plate, radians
    double background_ratio;      // accidental/signal coincidences, ≥ 0
};

// The experiment's standard wiring: photon 1 at p_a = 1 corrected by a π/4
// plate, photon 2 left at the p_a = 0 reference angle θ, no background.
PhotonPairConfig standard_pair(double p_a2, const MeasurementStrength& strength);

// |<s1|s2>|² for normalized dim-2 states.
double overlap_visibility(const StateVector& s1, const StateVector& s2);

// Runs both interferometer arms, applies the correction plates, and returns
// the background-degraded overlap visibility.
double pair_visibility(const PhotonPairConfig& config);

struct VisibilitySweep {
    std::vector<double> hwp5_angles;     // radians, as swept
    std::vector<double> relative_angles; // hwp5 − θ (the p_a = 0 reference)
    std::vector<double> visibilities;    // in [0, 1]
    std::size_t argmax_index;
    double argmax_angle;
    double argmax_relative;
    double max_visibility;
};

// pair_visibility over a grid of HWP5 angles. The argmax is taken over the
// sampled grid, no interpolation; ties break toward the smaller angle.
VisibilitySweep visibility_sweep(const PhotonPairConfig& base,
                                 const std::vector<double>& hwp5_grid);

// The three candidate HWP5 angles for restoring photon 2 (radians):
//   exact           — restoration_hwp_angle of the actual run
//   symmetric_mark — θ + p_a2·Δθ/2, splitting the full-strength rotation
//   small_g_mark    — θ + p_a2·g/2, its small-g limit
// They coincide as g → 0 but differ at finite g; all three are reported
// rather than picking one.
struct SymmetricAngleReport {
    double exact;
    double symmetric_mark;
    double small_g_mark;
};

SymmetricAngleReport symmetric_angle_report(double p_a2, const MeasurementStrength& strength);

// Background ratio tied inversely to the postselection probability of the
// photon-2 arm: r = kappa / postselect_prob(p_a2). Mirrors how rarer
// postselection inflates the relative accidental rate.
double tied_background_ratio(double kappa, double p_a2, const MeasurementStrength& strength);

}  // namespace wvsim
