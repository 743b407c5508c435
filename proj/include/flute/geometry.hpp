#ifndef FLUTE_GEOMETRY_HPP
#define FLUTE_GEOMETRY_HPP

#include "flute/code.hpp"

#include <cstdint>
#include <vector>

namespace flute {

struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A planar realization of front-supported codes: every strand piece carries
// explicit station events (vertical lines at punctures and gaps) with rational
// heights, minimal by construction.
struct StrandPoint {
    // station key: 2k for the line through puncture k, 2k+1 for the gap line
    // between k and its successor (keys use the order embedding of Z u {P}).
    std::int64_t station;
    double height;
};

struct WiringDiagram {
    std::vector<std::vector<StrandPoint>> strands; // one polyline per code
    std::int64_t lo = 0, hi = 0;                   // station key range
};

WiringDiagram realize_front(const std::vector<Code>& codes);

// Debug dump: one line per strand point.
std::string dump_strands(const WiringDiagram& w);

// Minimal number of transverse crossings between representatives of a and b
// away from p.
std::size_t intersection_number(const Code& a, const Code& b);
bool are_disjoint(const Code& a, const Code& b);

// Independent piecewise-linear oracle: realize both arcs with generic
// heights and remove puncture-free bigons until none remain.
std::size_t intersection_number_oracle(const Code& a, const Code& b);

// True iff the code bounds an embedded strand (no forced self-crossings and
// direction-consistent turns).
bool is_embeddable(const Code& c);

// Split of a symmetric arc into its zipped ray and central closed loop.
struct ZipSplit {
    Code ray;          // maximal zipped common prefix (with its start marker)
    Code central_loop; // remaining central pair as a closed token word
};
ZipSplit zip_symmetric(const Code& c);

struct SignedPairing {
    std::size_t i_plus = 0;
    std::size_t i_minus = 0;
    friend bool operator==(const SignedPairing& a, const SignedPairing& b) {
        return a.i_plus == b.i_plus && a.i_minus == b.i_minus;
    }
};

// Signed crossing counts of the zipped rays of two symmetric arcs in minimal
// position, excluding crossings on either central loop.
SignedPairing pairing(const Code& d, const Code& g);

} // namespace flute

#endif
