#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thickthin/geometry.hpp"
#include "thickthin/params.hpp"

namespace thickthin {

// One verified inequality family.  margin is the smallest slack observed over
// all samples and subparts (negative on failure); deterministic given the
// seed.  wall_ms is informational and excluded from serialized reports.
struct CheckReport {
    enum class Status : std::uint8_t { Pass, Fail, Indeterminate };

    std::string name;
    std::string detail;
    Status status = Status::Pass;
    double margin = 0.0;
    long samples = 0;
    double wall_ms = 0.0;

    static const char* status_name(Status s);
};

// Exact log-domain re-check of the four exponent bounds for stage k, the
// consequence 2^{2^{m_k}} > |a_k| + sqrt(|b_k| + 2), and a sampled
// contrapositive: block images of samples with |z| in (2, 4] leave D(0,2).
CheckReport check_block_invariance(const ParameterSequence& seq, int k,
                                   std::uint64_t seed, long n_samples = 1000);

// Sampled invariance of the block map on stage k: D(0,1/2) maps into itself,
// lands in the H-side survival disk at time M_k - 1, and samples outside
// A(0,1/2,2) map outside it again.
CheckReport check_annulus_invariance(const ParameterSequence& seq, int k,
                                     std::uint64_t seed, long n_samples = 1000);

// Random-b sweep of the closed-form radius inequalities, 4-ulp tolerance.
CheckReport check_radii_bounds(long n_samples, std::uint64_t seed);

// Inverse-branch derivative bounds for stage k: < 6 sqrt(-b_k) for any start
// time in the block, < 1/2 for the full block, with a finite-difference
// cross-check on 10 spot samples (<= 1e-4 relative).
CheckReport check_contracting(const ParameterSequence& seq, int k,
                              std::uint64_t seed, long n_samples = 1000);

// mod A_k > ln(4 sqrt(-b_k) - 1) for every stage; the strictly-increasing
// subcheck is indeterminate unless b is strictly decreasing.
CheckReport check_modulus_growth(const ParameterSequence& seq);

// Measured pulled-back annulus diameters vs. the closed-form bound for all
// stages reachable from start time m, over sampled branch codes; also checks
// the observed stage-to-stage decay ratio <= 0.75.
CheckReport check_diameter_decay(const ParameterSequence& seq, long m,
                                 std::uint64_t seed, int codes_per_stage = 8);

// Every grid point of D(0,1/2) started at time M_{k0} survives to the
// horizon with an all-H itinerary.
CheckReport check_center_disk_in_H(const ParameterSequence& seq, int k0, long grid_n);

// All checks with per-check seeds derived from `seed`; `only` (if non-empty)
// keeps reports whose name contains it as a substring.
std::vector<CheckReport> run_all(const ParameterSequence& seq, std::uint64_t seed,
                                 const std::string& only = {});

bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace thickthin
