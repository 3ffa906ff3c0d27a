#include <doctest.h>

#include <cmath>
#include <random>

#include "wvsim/qcore.hpp"

using namespace wvsim;

namespace {

// Deterministic random complex states for property checks.
std::mt19937 property_rng(20260816u);

double unit_draw(std::mt19937& rng) {
    return static_cast<double>(rng() >> 5) * 0x1.0p-27 * 2.0 - 1.0;
}

StateVector random_state(std::mt19937& rng, std::vector<std::string> labels) {
    std::vector<Complex> amps;
    amps.reserve(labels.size());
    for (std::size_t k = 0; k < labels.size(); ++k) {
        amps.emplace_back(unit_draw(rng), unit_draw(rng));
    }
    StateVector raw(std::move(labels), std::move(amps));
    return normalize(raw).state;
}

Operator random_operator(std::mt19937& rng, std::size_t dim) {
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (std::size_t k = 0; k < dim * dim; ++k) {
        entries.emplace_back(unit_draw(rng), unit_draw(rng));
    }
    return Operator(dim, dim, std::move(entries));
}

const std::vector<std::string> kPair{"H", "V"};
const std::vector<std::string> kTriple{"A", "B", "C"};

}  // namespace

TEST_SUITE_BEGIN("qcore");

// ---------- StateVector ----------

TEST_CASE("state vector construction validates shape and labels") {
    CHECK_THROWS_AS(StateVector({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector({"a", "b"}, {Complex{1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector({"a", "a"}, {Complex{1, 0}, Complex{0, 0}}),
                    std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(StateVector({"a"}, {Complex{inf, 0}}), std::invalid_argument);
}

TEST_CASE("basis_state is one-hot") {
    const StateVector s = StateVector::basis_state(kTriple, 1);
    CHECK(s.dim() == 3);
    CHECK(std::abs(s.amp(0)) == 0.0);
    CHECK(std::abs(s.amp(1)) == 1.0);
    CHECK(std::abs(s.amp(2)) == 0.0);
    CHECK_THROWS_AS(StateVector::basis_state(kTriple, 3), std::invalid_argument);
}

TEST_CASE("norm and is_normalized") {
    const StateVector s(kPair, {Complex{3, 0}, Complex{0, 4}});
    CHECK(s.norm() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_FALSE(s.is_normalized());
    CHECK(StateVector::basis_state(kPair, 0).is_normalized());
}

TEST_CASE("normalize rescales and reports the original norm") {
    const StateVector s(kPair, {Complex{0, 2}, Complex{2, 0}});
    const Normalized n = normalize(s);
    CHECK(n.norm == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
    CHECK(n.state.is_normalized(kExactTol));
    // direction preserved
    CHECK(std::abs(n.state.amp(0) - Complex{0, 2} / n.norm) <= kExactTol);

    const StateVector zero(kPair, {Complex{0, 0}, Complex{0, 0}});
    CHECK_THROWS_AS(normalize(zero), NullStateError);
}

// ---------- inner product ----------

TEST_CASE("inner product matches hand values and conjugate symmetry") {
    const StateVector a(kPair, {Complex{1, 0}, Complex{0, 1}});
    const StateVector b(kPair, {Complex{0, 1}, Complex{1, 0}});
    // <a|b> = conj(1)*i + conj(i)*1 = i - i = 0
    CHECK(std::abs(inner(a, b)) <= kExactTol);

    for (int rep = 0; rep < 25; ++rep) {
        const StateVector x = random_state(property_rng, kTriple);
        const StateVector y = random_state(property_rng, kTriple);
        CHECK(std::abs(inner(x, y) - std::conj(inner(y, x))) <= kExactTol);
    }
}

TEST_CASE("inner product requires a shared basis") {
    const StateVector a(kPair, {Complex{1, 0}, Complex{0, 0}});
    const StateVector b({"H", "X"}, {Complex{1, 0}, Complex{0, 0}});
    CHECK_THROWS_AS(inner(a, b), std::invalid_argument);
}

TEST_CASE("fidelity is symmetric and bounded") {
    for (int rep = 0; rep < 25; ++rep) {
        const StateVector x = random_state(property_rng, kPair);
        const StateVector y = random_state(property_rng, kPair);
        const double f = fidelity(x, y);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + kExactTol);
        CHECK(f == doctest::Approx(fidelity(y, x)).epsilon(1e-14));
    }
    const StateVector z = random_state(property_rng, kPair);
    CHECK(fidelity(z, z) == doctest::Approx(1.0).epsilon(1e-14));
}

// ---------- Operator ----------

TEST_CASE("operator construction validates entry count") {
    CHECK_THROWS_AS(Operator(2, 2, {Complex{1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Operator(0, 1, {}), std::invalid_argument);
}

TEST_CASE("identity and entry access") {
    const Operator eye = Operator::identity(3);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(eye.entry(r, c) == (r == c ? Complex{1, 0} : Complex{0, 0}));
        }
    }
    CHECK_THROWS_AS(eye.entry(3, 0), std::out_of_range);
}

TEST_CASE("outer product entries are ket times conjugated bra") {
    const StateVector ket(kPair, {Complex{0, 1}, Complex{1, 0}});
    const StateVector bra(kPair, {Complex{1, 1}, Complex{2, 0}});
    const Operator op = Operator::outer(ket, bra);
    CHECK(std::abs(op.entry(0, 0) - Complex{0, 1} * std::conj(Complex{1, 1})) <= kExactTol);
    CHECK(std::abs(op.entry(1, 1) - Complex{2, 0}) <= kExactTol);
}

TEST_CASE("projector of a normalized state is a projector") {
    for (int rep = 0; rep < 10; ++rep) {
        const StateVector s = random_state(property_rng, kTriple);
        const Operator p = Operator::projector(s);
        CHECK(p.is_projector(kExactTol));
        CHECK_FALSE(p.is_unitary(kExactTol));
    }
    const StateVector unnormalized(kPair, {Complex{2, 0}, Complex{0, 0}});
    CHECK_THROWS_AS(Operator::projector(unnormalized), std::invalid_argument);
}

TEST_CASE("dagger is an involution and flips shape") {
    const Operator m = random_operator(property_rng, 3);
    CHECK(Operator::max_abs_diff(m.dagger().dagger(), m) <= kExactTol);
    const Operator rect = Operator::outer(random_state(property_rng, kTriple),
                                          random_state(property_rng, kPair));
    CHECK(rect.dim_out() == 3);
    CHECK(rect.dagger().dim_out() == 2);
}

TEST_CASE("operator algebra shape checks") {
    const Operator two = Operator::identity(2);
    const Operator three = Operator::identity(3);
    CHECK_THROWS_AS(two + three, std::invalid_argument);
    CHECK_THROWS_AS(two - three, std::invalid_argument);
    CHECK_THROWS_AS(two * three, std::invalid_argument);
}

TEST_CASE("scalar multiplication and linearity of apply") {
    const Operator m = random_operator(property_rng, 2);
    const StateVector s = random_state(property_rng, kPair);
    const StateVector lhs = apply(Complex{0, 2} * m, s);
    const StateVector rhs = apply(m, s);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(lhs.amp(k) - Complex{0, 2} * rhs.amp(k)) <= kExactTol);
    }
}

TEST_CASE("unitary application preserves norm") {
    // a rotation is the simplest honest unitary
    const double t = 0.7;
    const Operator rot(2, 2,
                       {Complex{std::cos(t), 0}, Complex{-std::sin(t), 0},
                        Complex{std::sin(t), 0}, Complex{std::cos(t), 0}});
    CHECK(rot.is_unitary(kExactTol));
    for (int rep = 0; rep < 25; ++rep) {
        const StateVector s = random_state(property_rng, kPair);
        CHECK(apply(rot, s).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("apply rejects shape mismatches and non-square without labels") {
    const Operator rect = Operator::outer(StateVector::basis_state(kTriple, 0),
                                          StateVector::basis_state(kPair, 0));
    const StateVector s2 = StateVector::basis_state(kPair, 0);
    const StateVector s3 = StateVector::basis_state(kTriple, 0);
    CHECK_THROWS_AS(apply(rect, s3), std::invalid_argument);   // no output labels
    CHECK_THROWS_AS(apply(Operator::identity(3), s2), std::invalid_argument);
    const StateVector mapped = apply(rect, s2, kTriple);
    CHECK(mapped.dim() == 3);
    CHECK(std::abs(mapped.amp(0) - Complex{1, 0}) <= kExactTol);
}

// ---------- tensor products ----------

TEST_CASE("tensor of states multiplies amplitudes and norms") {
    const StateVector a(kPair, {Complex{0.6, 0}, Complex{0.8, 0}});
    const StateVector b(kTriple, {Complex{0, 1}, Complex{0, 0}, Complex{0, 0}});
    const StateVector t = tensor(a, b);
    CHECK(t.dim() == 6);
    CHECK(std::abs(t.amp(0) - Complex{0, 0.6}) <= kExactTol);
    CHECK(std::abs(t.amp(3) - Complex{0, 0.8}) <= kExactTol);
    CHECK(t.norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-14));
}

TEST_CASE("tensor of operators acts factor-wise") {
    for (int rep = 0; rep < 10; ++rep) {
        const Operator ma = random_operator(property_rng, 2);
        const Operator mb = random_operator(property_rng, 2);
        const StateVector sa = random_state(property_rng, kPair);
        const StateVector sb = random_state(property_rng, {"0", "1"});
        const StateVector via_tensor = apply(tensor(ma, mb), tensor(sa, sb));
        const StateVector expected = tensor(apply(ma, sa), apply(mb, sb));
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(via_tensor.amp(k) - expected.amp(k)) <= 1e-14);
        }
    }
}

TEST_CASE("tensor label composition keeps factors distinguishable") {
    const StateVector t = tensor(StateVector::basis_state(kPair, 0),
                                 StateVector::basis_state(kTriple, 2));
    CHECK(t.labels()[2] == "H⊗C");
}

TEST_SUITE_END();
