#pragma once

#include "lpsvp/numeric.hpp"

#include <cstddef>
#include <vector>

namespace lpsvp {

// Sets over the universe {0, ..., universe_size - 1}.
struct SetCoverInstance {
    std::size_t universe_size = 0;
    std::vector<std::vector<std::size_t>> sets;
    // YES size: an exact cover by at most d sets exists.
    std::size_t d = 0;
    // NO instances have no cover at all by d / eta sets.
    Rational eta = 1;

    Rational no_bound() const { return Rational(static_cast<long>(d)) / eta; }
    void validate() const;
};

}  // namespace lpsvp
