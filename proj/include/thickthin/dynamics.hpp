#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "thickthin/params.hpp"

namespace thickthin {

using Complex = std::complex<double>;

// Orbits are declared escaped as soon as their modulus exceeds this, no
// matter where inside a block they are; the remaining doubling steps of the
// block would overflow a double anyway.
inline constexpr double kBailoutRadius = 1e12;

struct OrbitPoint {
    Complex value;
    bool overflow = false;
};

// Q_{m,n}(z): apply P_{m+1}, ..., P_n.  Q_{m,m} is the identity.
OrbitPoint compose(const ParameterSequence& seq, long m, long n, Complex z);

enum class Side : std::uint8_t { G, H };

struct Classification {
    enum class Status : std::uint8_t { Escaped, Survived };
    Status status = Status::Survived;

    // Escaped only.
    int escape_stage = 0;
    long escape_step = 0;
    double escape_modulus = 0.0;

    // Stage index of itinerary.front(); entries run over consecutive stages.
    int first_stage = 0;
    std::vector<Side> itinerary;

    // Set when a surviving orbit point at a time M_k - 1 fails the disk test
    // that its side entry implies, or sits exactly on the imaginary axis.
    bool anomaly = false;

    int survived_depth = 0;  // stages passed; horizon depth when Survived

    bool survived() const { return status == Status::Survived; }
};

// Iterates z from time m with escape tests only at the checkpoint times M_k,
// recording a G/H side entry at each time M_k - 1 the orbit reaches.
Classification classify(const ParameterSequence& seq, Complex z, long m, int horizon);

// Largest stage k <= kmax with |Q_{m,M_k}(z)| <= 2 (0 if none).
int survival_depth(const ParameterSequence& seq, Complex z, long m, int kmax);

enum class ItineraryClass : std::uint8_t { AllH, TailH, HitsGLate, Mixed };

struct ItineraryClassification {
    ItineraryClass cls = ItineraryClass::Mixed;
    int joining = 0;  // 1-based position of the last G entry; 0 for AllH
    int margin = 0;
};

// AllH: no G entry.  HitsGLate: a G entry within the last `margin` stages.
// TailH(t): last G at position t with >= margin trailing H entries.
// Mixed: empty itinerary.
ItineraryClassification classify_itinerary(std::span<const Side> itinerary, int margin);

// 0 if the itinerary has no G entry, else the 1-based position of the last.
int joining_stage(std::span<const Side> itinerary);

}  // namespace thickthin
