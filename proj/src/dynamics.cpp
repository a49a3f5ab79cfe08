#include "thickthin/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace thickthin {

namespace {

// r_k = sqrt(-b) - sqrt(-b-2), in the cancellation-free form.
double survival_disk_radius(double b) {
    return 2.0 / (std::sqrt(-b) + std::sqrt(-b - 2.0));
}

bool in_disk(Complex w, Complex center, double radius) {
    // Slack of a few ulps so exact boundary points are not flagged.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(center) + radius);
    return std::abs(w - center) <= radius + slack;
}

}  // namespace

OrbitPoint compose(const ParameterSequence& seq, long m, long n, Complex z) {
    if (m < 0 || n < m || n > seq.total_time()) {
        throw std::out_of_range("compose: requires 0 <= m <= n <= M_K");
    }
    for (long t = m + 1; t <= n; ++t) {
        if (std::abs(z) > kBailoutRadius) return {z, true};
        z = z * z + seq.coefficient_at(t);
    }
    if (std::abs(z) > kBailoutRadius) return {z, true};
    return {z, false};
}

Classification classify(const ParameterSequence& seq, Complex z, long m, int horizon) {
    if (horizon < 1 || horizon > seq.depth()) {
        throw std::invalid_argument("classify: horizon out of range");
    }
    if (m < 0 || m > seq.checkpoint(horizon)) {
        throw std::out_of_range("classify: start time past horizon");
    }

    Classification out;
    long t = m;
    Complex w = z;
    for (int k = 1; k <= horizon; ++k) {
        const long mk = seq.checkpoint(k);
        if (mk < m) continue;  // stage ended before the start time

        bool have_entry = false;
        Side entry = Side::H;
        bool entry_anomaly = false;
        if (mk - 1 >= m) {
            // advance to the side-sampling time M_k - 1
            while (t < mk - 1) {
                if (std::abs(w) > kBailoutRadius) {
                    out.status = Classification::Status::Escaped;
                    out.escape_stage = k;
                    out.escape_step = t;
                    out.escape_modulus = std::abs(w);
                    return out;
                }
                ++t;
                w = w * w + seq.coefficient_at(t);
            }
            if (out.first_stage == 0) out.first_stage = k;
            have_entry = true;
            const double root = std::sqrt(-seq.b(k));
            const double rk = survival_disk_radius(seq.b(k));
            const bool in_g = in_disk(w, Complex(root, 0.0), rk);
            const bool in_h = in_disk(w, Complex(-root, 0.0), rk);
            if (w.real() > 0.0) {
                entry = Side::G;
                entry_anomaly = !in_g;
            } else if (w.real() < 0.0) {
                entry = Side::H;
                entry_anomaly = !in_h;
            } else {
                entry = in_g ? Side::G : Side::H;
                entry_anomaly = !(in_g || in_h);
            }
        }
        // advance to (or test at) the checkpoint M_k
        while (t < mk) {
            if (std::abs(w) > kBailoutRadius) {
                if (have_entry) {
                    out.itinerary.push_back(entry);  // stage reached its side time
                }
                out.status = Classification::Status::Escaped;
                out.escape_stage = k;
                out.escape_step = t;
                out.escape_modulus = std::abs(w);
                return out;
            }
            ++t;
            w = w * w + seq.coefficient_at(t);
        }
        if (have_entry) out.itinerary.push_back(entry);
        if (std::abs(w) > 2.0) {
            out.status = Classification::Status::Escaped;
            out.escape_stage = k;
            out.escape_step = t;
            out.escape_modulus = std::abs(w);
            return out;
        }
        // the stage survived; its entry is now subject to the disk test
        if (have_entry && entry_anomaly) out.anomaly = true;
        out.survived_depth = k;
    }
    out.status = Classification::Status::Survived;
    return out;
}

int survival_depth(const ParameterSequence& seq, Complex z, long m, int kmax) {
    if (kmax < 1 || kmax > seq.depth()) {
        throw std::invalid_argument("survival_depth: kmax out of range");
    }
    long t = m;
    Complex w = z;
    int depth = 0;
    for (int k = 1; k <= kmax; ++k) {
        const long mk = seq.checkpoint(k);
        if (mk < m) continue;
        while (t < mk) {
            if (std::abs(w) > kBailoutRadius) return depth;
            ++t;
            w = w * w + seq.coefficient_at(t);
        }
        if (std::abs(w) > 2.0) return depth;
        depth = k;
    }
    return depth;
}

ItineraryClassification classify_itinerary(std::span<const Side> itinerary, int margin) {
    if (margin < 1) throw std::invalid_argument("classify_itinerary: margin >= 1 required");
    ItineraryClassification out;
    out.margin = margin;
    if (itinerary.empty()) {
        out.cls = ItineraryClass::Mixed;
        return out;
    }
    const int n = static_cast<int>(itinerary.size());
    const int last_g = joining_stage(itinerary);
    out.joining = last_g;
    if (last_g == 0) {
        out.cls = ItineraryClass::AllH;
    } else if (last_g > n - margin) {
        out.cls = ItineraryClass::HitsGLate;
    } else {
        out.cls = ItineraryClass::TailH;
    }
    return out;
}

int joining_stage(std::span<const Side> itinerary) {
    for (int i = static_cast<int>(itinerary.size()); i >= 1; --i) {
        if (itinerary[i - 1] == Side::G) return i;
    }
    return 0;
}

}  // namespace thickthin
