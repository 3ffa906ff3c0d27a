// prepost.hpp
// Weak values and ABL probabilities for pre- and post-selected ensembles,
// including the canonical three-box configuration.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wvsim/qcore.hpp"

namespace wvsim {

// A pre-selected state |i> and a post-selected state |f> over the same
// basis, with their overlap <f|i> cached. Both states are normalized on
// construction; orthogonal pairs are rejected outright rather than letting
// weak values blow up downstream.
class PrePostSelection {
public:
    PrePostSelection(const StateVector& pre, const StateVector& post);

    const StateVector& pre() const { return pre_; }
    const StateVector& post() const { return post_; }
    Complex overlap() const { return overlap_; }
    std::size_t dim() const { return pre_.dim(); }

private:
    StateVector pre_;
    StateVector post_;
    Complex overlap_;
};

struct WeakValueResult {
    Complex value;
    std::string observable_tag;
};

// <f|O|i> / <f|i>. Complex in general; callers take real parts only where
// the readout limit calls for it.
WeakValueResult weak_value(const PrePostSelection& pp, const Operator& obs,
                           std::string_view tag = "");

// Probability of the projective outcome P (vs. its complement I−P) for an
// intermediate strong measurement between pre- and post-selection:
//   |<f|P|i>|² / (|<f|P|i>|² + |<f|(I−P)|i>|²)
double abl_probability(const PrePostSelection& pp, const Operator& projector);

// Sum of projector weak values over a complete set (Σ P_k = I required).
// Equals 1 like conventional probabilities.
Complex weak_value_sum(const PrePostSelection& pp, const std::vector<Operator>& projectors);

// The three-path configuration with |i> = (|A>+|B>+|C>)/√3 and
// |f> = (|A>+|B>−|C>)/√3, whose projector weak values are (1, 1, −1).
struct ThreeBoxScenario {
    PrePostSelection selection;
    Operator box_a;
    Operator box_b;
    Operator box_c;
};

ThreeBoxScenario three_box_scenario();

}  // namespace wvsim
