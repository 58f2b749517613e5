#pragma once

#include <string>
#include <string_view>

#include "pmk/errors.hpp"

namespace pmk {

// One-sided monotonicity type of a map at a point: (left sign, right sign).
// (+,-) is a local maximum, (-,+) a local minimum; those two are the critical
// valencies. The enum values fix the sort order used by every matrix index
// in the pipeline: (-,+) < (+,-) < (+,+) < (-,-).
enum class Valency : int { MP = 0, PM = 1, PP = 2, MM = 3 };

inline bool is_critical(Valency v) { return v == Valency::PM || v == Valency::MP; }

// monoid product x * y, where x is the valency of the outer map at the inner
// map's image point: val(f o g, t) = val(f, g(t)) * val(g, t)
inline Valency compose_valency(Valency outer, Valency inner) {
  switch (outer) {
    case Valency::PP: return inner;
    case Valency::PM: return Valency::PM;
    case Valency::MP: return Valency::MP;
    case Valency::MM:
      switch (inner) {
        case Valency::PP: return Valency::MM;
        case Valency::MM: return Valency::PP;
        case Valency::PM: return Valency::MP;
        case Valency::MP: return Valency::PM;
      }
  }
  throw Error("bad valency value");
}

inline Valency valency_from_signs(bool left_up, bool right_up) {
  if (left_up && right_up) return Valency::PP;
  if (!left_up && !right_up) return Valency::MM;
  if (left_up) return Valency::PM;
  return Valency::MP;
}

// (-1)^v for the pure valencies, used for the signs of the B matrix
inline int valency_parity(Valency v) {
  if (v == Valency::PP) return 1;
  if (v == Valency::MM) return -1;
  throw Error("parity of a critical valency is undefined");
}

inline std::string valency_str(Valency v) {
  switch (v) {
    case Valency::MP: return "(-,+)";
    case Valency::PM: return "(+,-)";
    case Valency::PP: return "(+,+)";
    case Valency::MM: return "(-,-)";
  }
  return "?";
}

inline Valency parse_valency(std::string_view s) {
  if (s == "(-,+)") return Valency::MP;
  if (s == "(+,-)") return Valency::PM;
  if (s == "(+,+)") return Valency::PP;
  if (s == "(-,-)") return Valency::MM;
  throw ParseError("malformed valency '" + std::string(s) + "'");
}

}  // namespace pmk
