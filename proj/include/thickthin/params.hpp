#pragma once

#include <string>
#include <vector>

namespace thickthin {

// Per-stage margins of the four lower bounds on the block exponent m_k,
// all expressed in log2 domain so that doubly-exponential quantities are
// never materialized.  A stage is valid iff g1 > 0, g2 > 0, g3 >= 0, g4 >= 0.
struct ExponentMargins {
    double g1;  // 2^m - log2(|a| + 2^k)
    double g2;  // 2^m - log2(|a| + sqrt(|b| + 2^k))
    double g3;  // m - log2(log2(8 sqrt(-b)))
    double g4;  // m - log2(12 sqrt(-b))

    bool ok() const { return g1 > 0.0 && g2 > 0.0 && g3 >= 0.0 && g4 >= 0.0; }
};

// The quadratic sequence z^2 + c_t laid out in blocks: stage k consists of
// m_k doubling steps followed by the two marked steps with offsets a_k and
// b_k at times M_k - 1 and M_k.  Immutable after construction.
class ParameterSequence {
public:
    int depth() const { return static_cast<int>(b_.size()); }
    long total_time() const { return M_.back(); }

    // Stage accessors, 1-based k in [1, depth()].
    double b(int k) const { return b_.at(k - 1); }
    double a(int k) const { return a_.at(k - 1); }
    int block_exponent(int k) const { return m_.at(k - 1); }
    long checkpoint(int k) const { return M_.at(k); }  // M_0 = 0 allowed

    // c_t for P_t(z) = z^2 + c_t, 1 <= t <= total_time().
    double coefficient_at(long t) const;

    // Stage whose block contains time t: the k with M_{k-1} < t <= M_k.
    int stage_of_time(long t) const;

    const std::vector<std::string>& advisories() const { return advisories_; }

    // Bypasses all validation; intended for tests and deliberate-violation
    // fixtures.  Lengths must agree and M is laid out from m.
    static ParameterSequence unchecked(std::vector<double> b, std::vector<int> m);

private:
    ParameterSequence() = default;
    friend ParameterSequence build_sequence(const std::vector<double>&, const struct PlanPolicy&);

    std::vector<double> b_;
    std::vector<double> a_;
    std::vector<int> m_;
    std::vector<long> M_;  // size depth()+1, M_[0] = 0
    std::vector<std::string> advisories_;
};

struct PlanPolicy {
    // Empty: minimal exponents.  Otherwise one explicit m_k per stage, each
    // of which must still pass all four bounds.
    std::vector<int> exponent_override;
};

// a_k = -sqrt(-b_k); requires b < -6.
double derive_a(double b);

// Margins of the four bounds for a candidate exponent m at stage k.
ExponentMargins exponent_margins(int k, double b, int m);

// Smallest m passing all four bounds for stage k.
int min_block_exponent(int k, double b);

ParameterSequence build_sequence(const std::vector<double>& b,
                                 const PlanPolicy& policy = {});

}  // namespace thickthin
