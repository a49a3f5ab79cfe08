#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "thickthin/dynamics.hpp"
#include "thickthin/params.hpp"

namespace thickthin {

// Closed-form radii for one stage value b < -6:
//   r = sqrt(-b) - sqrt(-b-2)     max distance of the survival disks' boundary
//   s = sqrt(-b+2) - sqrt(-b)     min distance of the same boundary
//   t = sqrt(-b+1/2) - sqrt(-b)   preimage radius of D(0,1/2)
//   u = sqrt(-b+1/3) - sqrt(-b)   clearance from the critical value
struct Radii {
    double r;
    double s;
    double t;
    double u;
};

Radii radii(double b);

// Radius rho with max_{|w -+ sqrt(-b)| <= rho} |w^2 + b| = R.
double forward_image_radius(double b, double R);

struct RoundAnnulus {
    Complex center;
    double inner = 0.0;
    double outer = 0.0;
    double modulus() const;
};

// A_k = A(sqrt(-b_k), r_k, 2 sqrt(-b_k) - r_k) at time M_k - 1.
RoundAnnulus annulus_A(const ParameterSequence& seq, int k);

// A conformal annulus obtained by pulling both boundary circles of A_k back
// from time M_k - 1 to time m along the square-root branch selected by a bit
// code.  Polylines are closed: the last sample joins back to the first.
struct PulledBackAnnulus {
    int stage = 0;
    long start_time = 0;
    std::string code;
    std::vector<Complex> inner;
    std::vector<Complex> outer;
    double modulus = 0.0;            // equal to mod A_k by conformal invariance
    double measured_diameter = 0.0;  // max pairwise distance over the outer polyline
    double max_gap = 0.0;            // largest consecutive sample gap, either polyline
};

// code has one bit per inverted map, length M_k - m - 1; bit j selects the
// root when inverting P_{M_k-1-j}: '0' is the root with non-negative real
// part (ties: non-negative imaginary part), '1' the other.  Continuity along
// each circle is kept by nearest-root tracking with adaptive refinement.
PulledBackAnnulus pull_back_annulus(const ParameterSequence& seq, long m, int k,
                                    std::string_view code);

// Chain of inverse square-root steps from time t_hi down to t_lo: inverts
// P_{t_hi}, ..., P_{t_lo+1}.  Roots picked by code bits as above.
std::vector<Complex> inverse_chain(const ParameterSequence& seq, long t_hi, long t_lo,
                                   Complex z, std::string_view code);

// Same chain, but each root is the one nearest the reference chain entry.
std::vector<Complex> inverse_chain_near(const ParameterSequence& seq, long t_hi, long t_lo,
                                        Complex z, const std::vector<Complex>& ref);

// |f'(z)| for the branch f of Q_{m,M_k}^{-1} selected by code (length
// M_k - m), via the chain-rule product.  Requires z in A(0, 1/3, 3).
double branch_derivative(const ParameterSequence& seq, long m, int k, Complex z,
                         std::string_view code);

// (4*pi + 3/2) * 6 sqrt(-b_{k0}) / 2^{k-k0} with k0 the smallest stage whose
// side time M_{k0} - 1 is >= m.
double diameter_bound(const ParameterSequence& seq, long m, int k);

struct SeparationCounts {
    int bounded = 0;        // inside the inner polyline
    int unbounded = 0;      // outside the outer polyline
    int inside = 0;         // strictly between the two polylines
    int indeterminate = 0;  // closer to a polyline than its sampling gap
    bool separates = false;
    bool vacuous = false;
};

SeparationCounts separation_check(const PulledBackAnnulus& annulus,
                                  std::span<const Complex> points);

// Winding number of a closed polyline about p.
int winding_number(std::span<const Complex> polyline, Complex p);

double distance_to_polyline(std::span<const Complex> polyline, Complex p);

// Max pairwise distance (convex hull + brute force over hull vertices).
double polyline_diameter(std::span<const Complex> points);

// Number of crossing pairs between polylines belonging to different groups;
// group[i] labels polylines[i].  Same-group pairs are not tested.
long count_cross_group_intersections(const std::vector<std::vector<Complex>>& polylines,
                                     const std::vector<int>& group);

}  // namespace thickthin
