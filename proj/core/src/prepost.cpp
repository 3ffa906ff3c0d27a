#include "wvsim/prepost.hpp"

#include <cmath>
#include <utility>

namespace wvsim {

PrePostSelection::PrePostSelection(const StateVector& pre, const StateVector& post)
    : pre_(normalize(pre).state), post_(normalize(post).state) {
    if (!pre_.same_basis(post_)) {
        throw std::invalid_argument("PrePostSelection: pre and post states must share a basis");
    }
    overlap_ = inner(post_, pre_);
    if (std::abs(overlap_) < kOverlapCutoff) {
        throw std::invalid_argument("PrePostSelection: pre and post selections are orthogonal");
    }
}

WeakValueResult weak_value(const PrePostSelection& pp, const Operator& obs,
                           std::string_view tag) {
    if (obs.dim_out() != pp.dim() || obs.dim_in() != pp.dim()) {
        throw std::invalid_argument("weak_value: observable dimension does not match selection");
    }
    const Complex numerator = inner(pp.post(), apply(obs, pp.pre()));
    return WeakValueResult{numerator / pp.overlap(), std::string(tag)};
}

double abl_probability(const PrePostSelection& pp, const Operator& projector) {
    if (projector.dim_out() != pp.dim() || projector.dim_in() != pp.dim()) {
        throw std::invalid_argument("abl_probability: projector dimension does not match selection");
    }
    if (!projector.is_projector(kPipelineTol)) {
        throw std::invalid_argument("abl_probability: operator is not a projector");
    }
    const Operator complement = Operator::identity(pp.dim()) - projector;
    const double yes = std::norm(inner(pp.post(), apply(projector, pp.pre())));
    const double no = std::norm(inner(pp.post(), apply(complement, pp.pre())));
    const double total = yes + no;
    if (total == 0.0) {
        throw std::domain_error("abl_probability: intermediate measurement annihilates both branches");
    }
    return yes / total;
}

Complex weak_value_sum(const PrePostSelection& pp, const std::vector<Operator>& projectors) {
    if (projectors.empty()) {
        throw std::invalid_argument("weak_value_sum: need at least one projector");
    }
    Complex sum{0.0, 0.0};
    for (const auto& p : projectors) {
        sum += weak_value(pp, p).value;
    }
    return sum;
}

ThreeBoxScenario three_box_scenario() {
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<std::string> boxes{"A", "B", "C"};
    StateVector pre(boxes, {Complex{s, 0.0}, Complex{s, 0.0}, Complex{s, 0.0}});
    StateVector post(boxes, {Complex{s, 0.0}, Complex{s, 0.0}, Complex{-s, 0.0}});
    return ThreeBoxScenario{
        PrePostSelection(pre, post),
        Operator::projector(StateVector::basis_state(boxes, 0)),
        Operator::projector(StateVector::basis_state(boxes, 1)),
        Operator::projector(StateVector::basis_state(boxes, 2)),
    };
}

}  // namespace wvsim
