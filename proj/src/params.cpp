#include "thickthin/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thickthin {

double derive_a(double b) {
    if (!(b < -6.0)) {
        throw std::domain_error("derive_a: requires b < -6, got b=" + std::to_string(b));
    }
    return -std::sqrt(-b);
}

ExponentMargins exponent_margins(int k, double b, int m) {
    if (!(b < -6.0)) {
        throw std::domain_error("exponent_margins: requires b < -6");
    }
    if (k < 1 || m < 1) {
        throw std::invalid_argument("exponent_margins: requires k >= 1 and m >= 1");
    }
    const double abs_a = std::sqrt(-b);
    const double abs_b = -b;
    const double two_k = std::exp2(static_cast<double>(k));
    const double two_m = std::exp2(static_cast<double>(m));
    ExponentMargins g{};
    g.g1 = two_m - std::log2(abs_a + two_k);
    g.g2 = two_m - std::log2(abs_a + std::sqrt(abs_b + two_k));
    g.g3 = m - std::log2(std::log2(8.0 * std::sqrt(-b)));
    g.g4 = m - std::log2(12.0 * std::sqrt(-b));
    return g;
}

int min_block_exponent(int k, double b) {
    for (int m = 1; m < 64; ++m) {
        if (exponent_margins(k, b, m).ok()) return m;
    }
    throw std::runtime_error("min_block_exponent: no exponent below 64 satisfies the bounds");
}

ParameterSequence build_sequence(const std::vector<double>& b, const PlanPolicy& policy) {
    if (b.empty()) {
        throw std::invalid_argument("build_sequence: empty coefficient list");
    }
    if (!policy.exponent_override.empty() && policy.exponent_override.size() != b.size()) {
        throw std::invalid_argument("build_sequence: override length must match b list");
    }
    ParameterSequence seq;
    seq.M_.push_back(0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        if (!(b[i] < -6.0)) {
            throw std::invalid_argument("build_sequence: b_" + std::to_string(k) +
                                        " = " + std::to_string(b[i]) + " is not < -6");
        }
        int m;
        if (policy.exponent_override.empty()) {
            m = min_block_exponent(k, b[i]);
        } else {
            m = policy.exponent_override[i];
            if (!exponent_margins(k, b[i], m).ok()) {
                throw std::invalid_argument("build_sequence: override m_" + std::to_string(k) +
                                            " = " + std::to_string(m) +
                                            " violates an exponent bound");
            }
        }
        seq.b_.push_back(b[i]);
        seq.a_.push_back(derive_a(b[i]));
        seq.m_.push_back(m);
        seq.M_.push_back(seq.M_.back() + m + 1);
    }
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (!(b[i] < b[i - 1])) {
            seq.advisories_.push_back(
                "b list is not strictly decreasing; the construction needs b_k -> -inf, "
                "which a finite prefix can only suggest");
            break;
        }
    }
    return seq;
}

ParameterSequence ParameterSequence::unchecked(std::vector<double> b, std::vector<int> m) {
    if (b.size() != m.size() || b.empty()) {
        throw std::invalid_argument("ParameterSequence::unchecked: length mismatch");
    }
    ParameterSequence seq;
    seq.M_.push_back(0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        seq.b_.push_back(b[i]);
        seq.a_.push_back(-std::sqrt(-b[i]));
        seq.m_.push_back(m[i]);
        seq.M_.push_back(seq.M_.back() + m[i] + 1);
    }
    return seq;
}

double ParameterSequence::coefficient_at(long t) const {
    if (t < 1 || t > total_time()) {
        throw std::out_of_range("coefficient_at: time index out of range");
    }
    const int k = stage_of_time(t);
    if (t == M_[k]) return b_[k - 1];
    if (t == M_[k] - 1) return a_[k - 1];
    return 0.0;
}

int ParameterSequence::stage_of_time(long t) const {
    if (t < 1 || t > total_time()) {
        throw std::out_of_range("stage_of_time: time index out of range");
    }
    auto it = std::lower_bound(M_.begin(), M_.end(), t);
    return static_cast<int>(it - M_.begin());
}

}  // namespace thickthin
