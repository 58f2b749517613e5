#pragma once

#include "pmk/lift.hpp"

namespace pmk {

// Two-parameter family with a single fold pair: the lift sends 0 -> 0,
// 1/2 -> m, 1 -> m - k, so the degree is m - k and the slopes are 2m and -2k.
// Requires |m|, |k| >= 2 with matching signs; the (-m, -k) map is the
// reflection conjugate of the (m, k) one.
inline PLCircleMap make_family(const Integer& m, const Integer& k) {
  if (!((m >= 2 && k >= 2) || (m <= -2 && k <= -2)))
    throw Error("family parameters need |m|, |k| >= 2 with matching signs");
  return PLCircleMap(PLLift({Rational(0), Rational(1, 2), Rational(1)},
                            {Rational(0), Rational(m), Rational(m - k)}));
}

}  // namespace pmk
