#include "thickthin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace thickthin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex principal_root(Complex w) {
    return std::sqrt(w);  // Re >= 0; on the cut, Im >= 0
}

int smallest_stage_covering(const ParameterSequence& seq, long m) {
    for (int k = 1; k <= seq.depth(); ++k) {
        if (m <= seq.checkpoint(k) - 1) return k;
    }
    throw std::invalid_argument("start time is past the last side time");
}

}  // namespace

Radii radii(double b) {
    if (!(b < -6.0)) throw std::domain_error("radii: requires b < -6");
    const double q = std::sqrt(-b);
    Radii out;
    out.r = 2.0 / (q + std::sqrt(-b - 2.0));
    out.s = 2.0 / (std::sqrt(-b + 2.0) + q);
    out.t = 0.5 / (std::sqrt(-b + 0.5) + q);
    out.u = (1.0 / 3.0) / (std::sqrt(-b + 1.0 / 3.0) + q);
    return out;
}

double forward_image_radius(double b, double R) {
    if (!(b < 0.0)) throw std::domain_error("forward_image_radius: requires b < 0");
    if (!(R >= 0.0)) throw std::domain_error("forward_image_radius: requires R >= 0");
    return R / (std::sqrt(-b + R) + std::sqrt(-b));
}

double RoundAnnulus::modulus() const {
    if (!(0.0 < inner && inner < outer)) {
        throw std::logic_error("RoundAnnulus: requires 0 < inner < outer");
    }
    return std::log(outer / inner);
}

RoundAnnulus annulus_A(const ParameterSequence& seq, int k) {
    if (k < 1 || k > seq.depth()) throw std::out_of_range("annulus_A: stage out of range");
    const double q = std::sqrt(-seq.b(k));
    const double rk = radii(seq.b(k)).r;
    return {Complex(q, 0.0), rk, 2.0 * q - rk};
}

std::vector<Complex> inverse_chain(const ParameterSequence& seq, long t_hi, long t_lo,
                                   Complex z, std::string_view code) {
    if (t_lo > t_hi) throw std::invalid_argument("inverse_chain: t_lo > t_hi");
    if (static_cast<long>(code.size()) != t_hi - t_lo) {
        throw std::invalid_argument("inverse_chain: code length must equal t_hi - t_lo");
    }
    std::vector<Complex> chain;
    chain.reserve(code.size());
    for (long j = 0; j < t_hi - t_lo; ++j) {
        const long t = t_hi - j;
        const Complex root = principal_root(z - seq.coefficient_at(t));
        const char bit = code[static_cast<std::size_t>(j)];
        if (bit != '0' && bit != '1') {
            throw std::invalid_argument("inverse_chain: code must be a bit string");
        }
        z = (bit == '0') ? root : -root;
        chain.push_back(z);
    }
    return chain;
}

std::vector<Complex> inverse_chain_near(const ParameterSequence& seq, long t_hi, long t_lo,
                                        Complex z, const std::vector<Complex>& ref) {
    if (static_cast<long>(ref.size()) != t_hi - t_lo) {
        throw std::invalid_argument("inverse_chain_near: reference length mismatch");
    }
    std::vector<Complex> chain;
    chain.reserve(ref.size());
    for (long j = 0; j < t_hi - t_lo; ++j) {
        const long t = t_hi - j;
        const Complex root = principal_root(z - seq.coefficient_at(t));
        const Complex prev = ref[static_cast<std::size_t>(j)];
        z = (std::abs(root - prev) <= std::abs(-root - prev)) ? root : -root;
        chain.push_back(z);
    }
    return chain;
}

namespace {

// Pulls one circle back through the inverse chain, keeping continuity by
// nearest-root tracking and bisecting the parameter until consecutive images
// are closer than tol.
std::vector<Complex> trace_circle(const ParameterSequence& seq, long m, long t_hi,
                                  std::string_view code, Complex center, double radius,
                                  double* out_max_gap) {
    const long steps = t_hi - m;
    auto on_circle = [&](double theta) {
        return center + radius * Complex(std::cos(theta), std::sin(theta));
    };

    if (steps == 0) {
        const int n = 512;
        std::vector<Complex> poly(n);
        for (int i = 0; i < n; ++i) poly[i] = on_circle(kTwoPi * i / n);
        if (out_max_gap) *out_max_gap = kTwoPi * radius / n;
        return poly;
    }

    struct Sample {
        double theta;
        std::vector<Complex> chain;
        Complex end() const { return chain.back(); }
    };

    auto seed = [&](double theta) {
        Sample s{theta, inverse_chain(seq, t_hi, m, on_circle(theta), code)};
        return s;
    };
    auto continue_from = [&](const Sample& prev, double theta) {
        Sample s{theta, inverse_chain_near(seq, t_hi, m, on_circle(theta), prev.chain)};
        return s;
    };

    // Pilot pass: rough diameter sets the refinement tolerance.
    const int pilot_n = 256;
    std::vector<Sample> pilot;
    pilot.reserve(pilot_n);
    pilot.push_back(seed(0.0));
    for (int i = 1; i < pilot_n; ++i) {
        pilot.push_back(continue_from(pilot.back(), kTwoPi * i / pilot_n));
    }
    std::vector<Complex> pilot_ends(pilot.size());
    for (std::size_t i = 0; i < pilot.size(); ++i) pilot_ends[i] = pilot[i].end();
    const double rough_diam = polyline_diameter(pilot_ends);
    const double tol = std::max(1e-3 * rough_diam, 1e-12);

    constexpr int kMaxDepth = 28;
    constexpr std::size_t kMaxPoints = 400000;

    std::vector<Complex> poly;
    poly.reserve(4096);
    Sample cur = pilot.front();
    poly.push_back(cur.end());

    auto diverging_step = [&](const Sample& a, const Sample& b) {
        std::size_t worst = 0;
        double worst_gap = -1.0;
        for (std::size_t j = 0; j < a.chain.size(); ++j) {
            const double g = std::abs(a.chain[j] - b.chain[j]);
            if (g > worst_gap) {
                worst_gap = g;
                worst = j;
            }
        }
        return t_hi - static_cast<long>(worst);
    };

    // Appends samples up to theta1, subdividing [cur.theta, theta1] as needed.
    auto extend = [&](double theta1, auto&& self, int depth) -> void {
        Sample next = continue_from(cur, theta1);
        if (std::abs(next.end() - cur.end()) <= tol) {
            cur = std::move(next);
            poly.push_back(cur.end());
            if (poly.size() > kMaxPoints) {
                throw std::runtime_error("pull_back_annulus: sample budget exhausted");
            }
            return;
        }
        if (depth >= kMaxDepth) {
            throw std::runtime_error(
                "pull_back_annulus: continuity failure while inverting P_" +
                std::to_string(diverging_step(cur, next)) +
                " (refinement floor hit; sampling too coarse near a critical point)");
        }
        const double mid = 0.5 * (cur.theta + theta1);
        self(mid, self, depth + 1);
        self(theta1, self, depth + 1);
    };

    for (int i = 1; i < pilot_n; ++i) extend(kTwoPi * i / pilot_n, extend, 0);
    extend(kTwoPi, extend, 0);  // close the loop

    // The continuation around the full circle must land back on the seed.
    const Complex closure = poly.back();
    poly.pop_back();
    if (std::abs(closure - poly.front()) > std::max(tol, 1e-9 * (1.0 + rough_diam))) {
        throw std::runtime_error("pull_back_annulus: branch continuation did not close up");
    }

    if (out_max_gap) {
        double g = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            g = std::max(g, std::abs(poly[(i + 1) % poly.size()] - poly[i]));
        }
        *out_max_gap = g;
    }
    return poly;
}

}  // namespace

PulledBackAnnulus pull_back_annulus(const ParameterSequence& seq, long m, int k,
                                    std::string_view code) {
    if (k < 1 || k > seq.depth()) throw std::out_of_range("pull_back_annulus: stage out of range");
    const long t_hi = seq.checkpoint(k) - 1;
    if (m < 0 || m > t_hi) throw std::invalid_argument("pull_back_annulus: requires m <= M_k - 1");
    if (static_cast<long>(code.size()) != t_hi - m) {
        throw std::invalid_argument("pull_back_annulus: code length must be M_k - m - 1");
    }
    const RoundAnnulus a = annulus_A(seq, k);

    PulledBackAnnulus out;
    out.stage = k;
    out.start_time = m;
    out.code = std::string(code);
    out.modulus = a.modulus();
    double gap_outer = 0.0;
    double gap_inner = 0.0;
    out.outer = trace_circle(seq, m, t_hi, code, a.center, a.outer, &gap_outer);
    out.inner = trace_circle(seq, m, t_hi, code, a.center, a.inner, &gap_inner);
    out.max_gap = std::max(gap_outer, gap_inner);
    out.measured_diameter = polyline_diameter(out.outer);
    return out;
}

double branch_derivative(const ParameterSequence& seq, long m, int k, Complex z,
                         std::string_view code) {
    if (k < 1 || k > seq.depth()) throw std::out_of_range("branch_derivative: stage out of range");
    const double az = std::abs(z);
    if (!(az > 1.0 / 3.0 && az < 3.0)) {
        throw std::domain_error("branch_derivative: z must lie in A(0, 1/3, 3)");
    }
    const long t_hi = seq.checkpoint(k);
    if (m < 0 || m >= t_hi) throw std::invalid_argument("branch_derivative: requires m < M_k");
    const auto chain = inverse_chain(seq, t_hi, m, z, code);
    double deriv = 1.0;
    for (const Complex& w : chain) deriv /= 2.0 * std::abs(w);
    return deriv;
}

double diameter_bound(const ParameterSequence& seq, long m, int k) {
    const int k0 = smallest_stage_covering(seq, m);
    if (k < k0 || k > seq.depth()) {
        throw std::invalid_argument("diameter_bound: requires k0 <= k <= depth");
    }
    const double c = 4.0 * std::numbers::pi + 1.5;
    return c * 6.0 * std::sqrt(-seq.b(k0)) / std::exp2(static_cast<double>(k - k0));
}

int winding_number(std::span<const Complex> polyline, Complex p) {
    int wn = 0;
    const std::size_t n = polyline.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex& v1 = polyline[i];
        const Complex& v2 = polyline[(i + 1) % n];
        const double cross = (v2.real() - v1.real()) * (p.imag() - v1.imag()) -
                             (p.real() - v1.real()) * (v2.imag() - v1.imag());
        if (v1.imag() <= p.imag()) {
            if (v2.imag() > p.imag() && cross > 0.0) ++wn;
        } else if (v2.imag() <= p.imag() && cross < 0.0) {
            --wn;
        }
    }
    return wn;
}

double distance_to_polyline(std::span<const Complex> polyline, Complex p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = polyline.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polyline[i];
        const Complex b = polyline[(i + 1) % n];
        const Complex ab = b - a;
        const double len2 = std::norm(ab);
        double s = 0.0;
        if (len2 > 0.0) {
            s = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2,
                           0.0, 1.0);
        }
        best = std::min(best, std::abs(p - (a + s * ab)));
    }
    return best;
}

SeparationCounts separation_check(const PulledBackAnnulus& annulus,
                                  std::span<const Complex> points) {
    SeparationCounts out;
    if (points.empty()) {
        out.vacuous = true;
        return out;
    }
    for (const Complex& p : points) {
        if (distance_to_polyline(annulus.inner, p) < annulus.max_gap ||
            distance_to_polyline(annulus.outer, p) < annulus.max_gap) {
            ++out.indeterminate;
            continue;
        }
        if (winding_number(annulus.inner, p) != 0) {
            ++out.bounded;
        } else if (winding_number(annulus.outer, p) != 0) {
            ++out.inside;
        } else {
            ++out.unbounded;
        }
    }
    out.separates = out.inside == 0 && out.bounded > 0 && out.unbounded > 0;
    return out;
}

double polyline_diameter(std::span<const Complex> points) {
    if (points.size() < 2) return 0.0;
    std::vector<Complex> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;

    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> hull(2 * pts.size());
    std::size_t h = 0;
    for (const Complex& p : pts) {  // lower
        while (h >= 2 && cross(hull[h - 2], hull[h - 1], p) <= 0.0) --h;
        hull[h++] = p;
    }
    for (std::size_t i = pts.size() - 1, base = h + 1; i-- > 0;) {  // upper
        while (h >= base && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0.0) --h;
        hull[h++] = pts[i];
    }
    hull.resize(h - 1);

    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            best = std::max(best, std::abs(hull[i] - hull[j]));
        }
    }
    return best;
}

namespace {

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
    auto orient = [](Complex a, Complex b, Complex c) {
        const double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
                         (b.imag() - a.imag()) * (c.real() - a.real());
        if (v > 0.0) return 1;
        if (v < 0.0) return -1;
        return 0;
    };
    auto on_segment = [](Complex a, Complex b, Complex c) {
        return std::min(a.real(), b.real()) <= c.real() &&
               c.real() <= std::max(a.real(), b.real()) &&
               std::min(a.imag(), b.imag()) <= c.imag() &&
               c.imag() <= std::max(a.imag(), b.imag());
    };
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

}  // namespace

long count_cross_group_intersections(const std::vector<std::vector<Complex>>& polylines,
                                     const std::vector<int>& group) {
    if (polylines.size() != group.size()) {
        throw std::invalid_argument("count_cross_group_intersections: size mismatch");
    }
    struct Seg {
        Complex a, b;
        int grp;
    };
    std::vector<Seg> segs;
    double max_len = 1e-12;
    for (std::size_t i = 0; i < polylines.size(); ++i) {
        const auto& poly = polylines[i];
        for (std::size_t j = 0; j < poly.size(); ++j) {
            const Seg s{poly[j], poly[(j + 1) % poly.size()], group[i]};
            segs.push_back(s);
            max_len = std::max(max_len, std::abs(s.b - s.a));
        }
    }
    const double cell = max_len;
    auto key = [cell](double x, double y) {
        const long ix = static_cast<long>(std::floor(x / cell));
        const long iy = static_cast<long>(std::floor(y / cell));
        return (static_cast<std::uint64_t>(ix) << 32) ^
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const auto& sg = segs[s];
        const long x0 = static_cast<long>(std::floor(std::min(sg.a.real(), sg.b.real()) / cell));
        const long x1 = static_cast<long>(std::floor(std::max(sg.a.real(), sg.b.real()) / cell));
        const long y0 = static_cast<long>(std::floor(std::min(sg.a.imag(), sg.b.imag()) / cell));
        const long y1 = static_cast<long>(std::floor(std::max(sg.a.imag(), sg.b.imag()) / cell));
        for (long ix = x0; ix <= x1; ++ix) {
            for (long iy = y0; iy <= y1; ++iy) {
                grid[(static_cast<std::uint64_t>(ix) << 32) ^
                     static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy))]
                    .push_back(s);
            }
        }
    }
    (void)key;
    long hits = 0;
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [cell_key, ids] : grid) {
        (void)cell_key;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                const std::size_t s1 = std::min(ids[i], ids[j]);
                const std::size_t s2 = std::max(ids[i], ids[j]);
                if (segs[s1].grp == segs[s2].grp) continue;
                if (!segments_intersect(segs[s1].a, segs[s1].b, segs[s2].a, segs[s2].b)) continue;
                seen.emplace_back(s1, s2);
            }
        }
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    hits = static_cast<long>(seen.size());
    return hits;
}

}  // namespace thickthin
