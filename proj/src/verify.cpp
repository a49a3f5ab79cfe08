#include "thickthin/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "thickthin/dynamics.hpp"

namespace thickthin {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

private:
    Clock::time_point start_ = Clock::now();
};

// Tracks the worst slack; any negative slack is a failure.
struct MarginTracker {
    double min_slack = std::numeric_limits<double>::infinity();
    long samples = 0;
    bool failed = false;

    void observe(double slack) {
        min_slack = std::min(min_slack, slack);
        if (slack < 0.0) failed = true;
        ++samples;
    }
};

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

Complex uniform_in_disk(std::mt19937_64& rng, Complex center, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    return center + r * Complex(std::cos(th), std::sin(th));
}

Complex uniform_in_round_annulus(std::mt19937_64& rng, double inner, double outer) {
    std::uniform_real_distribution<double> rad(inner, outer);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    const double r = rad(rng);
    const double th = ang(rng);
    return r * Complex(std::cos(th), std::sin(th));
}

std::string random_code(std::mt19937_64& rng, long length) {
    std::string code(static_cast<std::size_t>(length), '0');
    for (char& c : code) c = (rng() & 1u) ? '1' : '0';
    return code;
}

double block_image_modulus(const ParameterSequence& seq, int k, Complex z) {
    const OrbitPoint w = compose(seq, seq.checkpoint(k - 1), seq.checkpoint(k), z);
    return w.overflow ? kBailoutRadius : std::abs(w.value);
}

CheckReport finish(std::string name, std::string detail, const MarginTracker& t,
                   const Stopwatch& sw,
                   CheckReport::Status ok_status = CheckReport::Status::Pass) {
    CheckReport rep;
    rep.name = std::move(name);
    rep.detail = std::move(detail);
    rep.status = t.failed ? CheckReport::Status::Fail : ok_status;
    rep.margin = t.min_slack;
    rep.samples = t.samples;
    rep.wall_ms = sw.ms();
    return rep;
}

}  // namespace

const char* CheckReport::status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

CheckReport check_block_invariance(const ParameterSequence& seq, int k,
                                   std::uint64_t seed, long n_samples) {
    Stopwatch sw;
    MarginTracker t;
    const int m = seq.block_exponent(k);
    const ExponentMargins g = exponent_margins(k, seq.b(k), m);
    // strict bounds need positive margin; inclusive bounds allow zero
    const double tiny = 16.0 * std::numeric_limits<double>::epsilon();
    t.observe(g.g1 - tiny);
    t.observe(g.g2 - tiny);
    t.observe(g.g3);
    t.observe(g.g4);
    // 2^{2^m} > |a| + sqrt(|b| + 2), in log2 domain
    const double consequence =
        std::exp2(static_cast<double>(m)) -
        std::log2(std::sqrt(-seq.b(k)) + std::sqrt(-seq.b(k) + 2.0));
    t.observe(consequence - tiny);

    std::mt19937_64 rng(derive_seed(seed, "block_invariance/" + std::to_string(k)));
    for (long i = 0; i < n_samples; ++i) {
        const Complex z = uniform_in_round_annulus(rng, std::nextafter(2.0, 3.0), 4.0);
        t.observe(block_image_modulus(seq, k, z) - 2.0);
    }
    return finish("block_invariance/k=" + std::to_string(k),
                  "exponent bounds hold in log2 domain and the block map expels D(0,2)-exterior "
                  "samples",
                  t, sw);
}

CheckReport check_annulus_invariance(const ParameterSequence& seq, int k,
                                     std::uint64_t seed, long n_samples) {
    Stopwatch sw;
    MarginTracker t;
    std::mt19937_64 rng(derive_seed(seed, "annulus_invariance/" + std::to_string(k)));
    const long m0 = seq.checkpoint(k - 1);
    const double root = std::sqrt(-seq.b(k));
    const double rk = radii(seq.b(k)).r;

    for (long i = 0; i < n_samples; ++i) {
        const Complex z = uniform_in_disk(rng, Complex(0.0, 0.0), 0.5);
        // the small disk about 0 returns into itself over the block
        const OrbitPoint end = compose(seq, m0, seq.checkpoint(k), z);
        t.observe(end.overflow ? -1.0 : 0.5 - std::abs(end.value));
        // and lands in the left survival disk one step earlier
        const OrbitPoint side = compose(seq, m0, seq.checkpoint(k) - 1, z);
        if (side.overflow) {
            t.observe(-1.0);
        } else {
            t.observe(-side.value.real());
            t.observe(rk - std::abs(side.value - Complex(-root, 0.0)));
            t.observe(2.0 - std::abs(side.value * side.value + seq.b(k)));
        }
    }
    // contrapositive: samples off A(0,1/2,2) have block images off it too
    for (long i = 0; i < n_samples; ++i) {
        const bool inner_side = (rng() & 1u) != 0;
        const Complex z = inner_side
                              ? uniform_in_disk(rng, Complex(0.0, 0.0), 0.5)
                              : uniform_in_round_annulus(rng, std::nextafter(2.0, 3.0), 4.0);
        const double mod = block_image_modulus(seq, k, z);
        t.observe(std::max(0.5 - mod, mod - 2.0));
    }
    return finish("annulus_invariance/k=" + std::to_string(k),
                  "block map keeps D(0,1/2) invariant via the left survival disk and maps the "
                  "complement of A(0,1/2,2) off the annulus",
                  t, sw);
}

CheckReport check_radii_bounds(long n_samples, std::uint64_t seed) {
    Stopwatch sw;
    MarginTracker t;
    std::mt19937_64 rng(derive_seed(seed, "radii_bounds"));
    std::uniform_real_distribution<double> pick(-1e6, -6.0);
    auto ulps = [](double x) { return 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x); };
    for (long i = 0; i < n_samples; ++i) {
        double b = pick(rng);
        if (!(b < -6.0)) b = std::nextafter(-6.0, -7.0);
        const Radii rad = radii(b);
        const double q = std::sqrt(-b);
        t.observe(rad.r - 1.0 / q + ulps(rad.r));
        t.observe(1.0 / std::sqrt(-b - 2.0) - rad.r + ulps(rad.r));
        t.observe(0.5 - 1.0 / std::sqrt(-b - 2.0) + ulps(0.5));
        t.observe(rad.s - 0.5 / q + ulps(rad.s));
        t.observe(rad.t - 0.125 / q + ulps(rad.t));
        t.observe(rad.u - 1.0 / (12.0 * q) + ulps(rad.u));
    }
    return finish("radii_bounds",
                  "closed-form radii r, s, t, u respect their reciprocal-sqrt bounds across a "
                  "random b sweep (4-ulp tolerance)",
                  t, sw);
}

CheckReport check_contracting(const ParameterSequence& seq, int k,
                              std::uint64_t seed, long n_samples) {
    Stopwatch sw;
    MarginTracker t;
    std::mt19937_64 rng(derive_seed(seed, "contracting/" + std::to_string(k)));
    const long mk = seq.checkpoint(k);
    const long m_full = seq.checkpoint(k - 1);
    const double stage_bound = 6.0 * std::sqrt(-seq.b(k));

    // full-block branches contract by at least a factor 2
    long fd_checked = 0;
    for (long i = 0; i < n_samples; ++i) {
        const Complex z = uniform_in_round_annulus(rng, 1.0 / 3.0 + 1e-9, 3.0 - 1e-9);
        const std::string code = random_code(rng, mk - m_full);
        const double deriv = branch_derivative(seq, m_full, k, z, code);
        t.observe(0.5 - deriv);
        if (fd_checked < 10) {
            const auto chain = inverse_chain(seq, mk, m_full, z, code);
            const Complex w = chain.back();
            const double h = 1e-6;
            const Complex qp = compose(seq, m_full, mk, w + Complex(h, 0.0)).value;
            const Complex qm = compose(seq, m_full, mk, w - Complex(h, 0.0)).value;
            const double fd = 1.0 / std::abs((qp - qm) / (2.0 * h));
            const double rel = std::abs(fd - deriv) / deriv;
            t.observe(1e-4 - rel);
            ++fd_checked;
        }
    }
    // partial-block branches stay below the stage bound
    for (long m = m_full; m <= mk - 1; ++m) {
        for (int i = 0; i < 50; ++i) {
            const Complex z = uniform_in_round_annulus(rng, 1.0 / 3.0 + 1e-9, 3.0 - 1e-9);
            const std::string code = random_code(rng, mk - m);
            t.observe(stage_bound - branch_derivative(seq, m, k, z, code));
        }
    }
    return finish("contracting/k=" + std::to_string(k),
                  "inverse-branch derivatives stay below 1/2 over the full block and below "
                  "6 sqrt(-b_k) from any start time, finite-difference cross-checked",
                  t, sw);
}

CheckReport check_modulus_growth(const ParameterSequence& seq) {
    Stopwatch sw;
    MarginTracker t;
    bool strictly_decreasing = true;
    double prev_mod = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int k = 1; k <= seq.depth(); ++k) {
        const double mod = annulus_A(seq, k).modulus();
        t.observe(mod - std::log(4.0 * std::sqrt(-seq.b(k)) - 1.0));
        if (k > 1 && !(seq.b(k) < seq.b(k - 1))) strictly_decreasing = false;
        if (!(mod > prev_mod)) monotone = false;
        prev_mod = mod;
    }
    if (strictly_decreasing && !monotone) t.failed = true;
    const auto ok_status = strictly_decreasing ? CheckReport::Status::Pass
                                               : CheckReport::Status::Indeterminate;
    return finish("modulus_growth",
                  strictly_decreasing
                      ? "mod A_k exceeds ln(4 sqrt(-b_k) - 1) and increases along the stages"
                      : "mod A_k exceeds ln(4 sqrt(-b_k) - 1); growth subcheck indeterminate "
                        "because b is not strictly decreasing",
                  t, sw, ok_status);
}

CheckReport check_diameter_decay(const ParameterSequence& seq, long m,
                                 std::uint64_t seed, int codes_per_stage) {
    Stopwatch sw;
    MarginTracker t;
    std::mt19937_64 rng(derive_seed(seed, "diameter_decay/" + std::to_string(m)));
    int k0 = 0;
    for (int k = 1; k <= seq.depth(); ++k) {
        if (m <= seq.checkpoint(k) - 1) {
            k0 = k;
            break;
        }
    }
    if (k0 == 0) throw std::invalid_argument("check_diameter_decay: m past the last side time");

    double prev_max = 0.0;
    for (int k = k0; k <= seq.depth(); ++k) {
        const long len = seq.checkpoint(k) - 1 - m;
        const double bound = diameter_bound(seq, m, k);
        std::vector<std::string> codes;
        if (len <= 62 && (1ll << std::min<long>(len, 62)) <= codes_per_stage) {
            for (long j = 0; j < (1ll << len); ++j) {
                std::string code(static_cast<std::size_t>(len), '0');
                for (long bit = 0; bit < len; ++bit) {
                    if (j & (1ll << bit)) code[static_cast<std::size_t>(bit)] = '1';
                }
                codes.push_back(std::move(code));
            }
        } else {
            for (int j = 0; j < codes_per_stage; ++j) codes.push_back(random_code(rng, len));
        }
        double stage_max = 0.0;
        for (const std::string& code : codes) {
            const PulledBackAnnulus ann = pull_back_annulus(seq, m, k, code);
            t.observe(bound - ann.measured_diameter);
            stage_max = std::max(stage_max, ann.measured_diameter);
        }
        if (k > k0 && prev_max > 0.0) {
            t.observe(0.75 - stage_max / prev_max);
        }
        prev_max = stage_max;
    }
    return finish("diameter_decay/m=" + std::to_string(m),
                  "measured pulled-back annulus diameters stay under the closed-form bound and "
                  "decay by at least a 0.75 factor per stage",
                  t, sw);
}

CheckReport check_center_disk_in_H(const ParameterSequence& seq, int k0, long grid_n) {
    Stopwatch sw;
    MarginTracker t;
    if (k0 < 1 || k0 > seq.depth()) {
        throw std::invalid_argument("check_center_disk_in_H: k0 out of range");
    }
    const long m = seq.checkpoint(k0);
    const long side = std::max<long>(2, std::lround(std::sqrt(static_cast<double>(grid_n) * 4.0 /
                                                              std::numbers::pi)));
    for (long iy = 0; iy < side; ++iy) {
        for (long ix = 0; ix < side; ++ix) {
            const Complex z((ix + 0.5) / side - 0.5, (iy + 0.5) / side - 0.5);
            if (std::abs(z) >= 0.5) continue;
            const Classification c = classify(seq, z, m, seq.depth());
            bool all_h = c.survived() && !c.anomaly;
            for (Side s : c.itinerary) all_h = all_h && s == Side::H;
            if (!all_h) {
                t.observe(-1.0);
                continue;
            }
            const OrbitPoint end = compose(seq, m, seq.total_time(), z);
            t.observe(end.overflow ? -1.0 : 2.0 - std::abs(end.value));
        }
    }
    return finish("center_disk_in_H/k0=" + std::to_string(k0),
                  "a grid over D(0,1/2) started at the checkpoint survives to the horizon with "
                  "an all-H itinerary",
                  t, sw);
}

std::vector<CheckReport> run_all(const ParameterSequence& seq, std::uint64_t seed,
                                 const std::string& only) {
    if (seq.depth() < 1) throw std::invalid_argument("run_all: empty sequence");
    std::vector<CheckReport> reports;
    for (int k = 1; k <= seq.depth(); ++k) reports.push_back(check_block_invariance(seq, k, seed));
    for (int k = 1; k <= seq.depth(); ++k) {
        reports.push_back(check_annulus_invariance(seq, k, seed));
    }
    reports.push_back(check_radii_bounds(10000, seed));
    for (int k = 1; k <= seq.depth(); ++k) reports.push_back(check_contracting(seq, k, seed));
    reports.push_back(check_modulus_growth(seq));
    reports.push_back(check_diameter_decay(seq, 0, seed));
    if (seq.depth() >= 2) reports.push_back(check_diameter_decay(seq, seq.checkpoint(1), seed));
    for (int k0 = 1; k0 <= std::min(seq.depth(), 2); ++k0) {
        reports.push_back(check_center_disk_in_H(seq, k0, 1000));
    }
    if (!only.empty()) {
        std::erase_if(reports, [&](const CheckReport& r) {
            return r.name.find(only) == std::string::npos;
        });
    }
    return reports;
}

bool all_passed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) {
        return r.status != CheckReport::Status::Fail;
    });
}

}  // namespace thickthin
