#pragma once

#include "delegate/delegate.hpp"

#include <vector>

namespace fixtures {

using namespace delegate;

// Two types, outcomes and actions; action i always yields outcome i, type i values only outcome i.
inline DelegationInstance diag2() { return gen_single_bad(2); }

// Identity F on two outcomes with costs c; one type valuing both outcomes at `reward`.
inline DelegationInstance two_action(const Rational& c1, const Rational& c2, const Rational& reward = Rational(1)) {
    Matrix F(2, 2), R(2, 1);
    F(0, 0) = 1;
    F(1, 1) = 1;
    R(0, 0) = reward;
    R(1, 0) = reward;
    return make_instance({Rational(1)}, F, R, {c1, c2});
}

// Random instances of the acceptance suite: sizes cycle through 1..3.
inline DelegationInstance suite_instance(std::size_t i, std::uint64_t base = 0) {
    return gen_random(1 + i % 3, 1 + (i / 3) % 3, 1 + (i / 9) % 3, base + i);
}

// Smallest c with every outcome reached with probability >= c by some action.
inline Rational smoothness_of(const DelegationInstance& inst) {
    Rational c = 1;
    for (std::size_t o = 0; o < inst.num_outcomes(); ++o) {
        Rational best = 0;
        for (std::size_t a = 0; a < inst.num_actions(); ++a)
            if (inst.F(o, a) > best) best = inst.F(o, a);
        if (best < c) c = best;
    }
    return c;
}

}  // namespace fixtures
