// End-to-end acceptance suite: one line of output per criterion.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thickthin/cli.hpp"
#include "thickthin/dynamics.hpp"
#include "thickthin/geometry.hpp"
#include "thickthin/params.hpp"
#include "thickthin/render.hpp"
#include "thickthin/verify.hpp"

using namespace thickthin;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++g_failures;
}

const ParameterSequence& default_seq() {
    static const ParameterSequence seq = build_sequence({-7.0, -10.0, -13.0});
    return seq;
}

bool bounds_ok_oracle(int k, double b, int m) {
    const double abs_a = std::sqrt(-b);
    const double two_m = std::exp2(static_cast<double>(m));
    return two_m > std::log2(abs_a + std::exp2(static_cast<double>(k))) &&
           two_m > std::log2(abs_a + std::sqrt(-b + std::exp2(static_cast<double>(k)))) &&
           m >= std::log2(std::log2(8.0 * std::sqrt(-b))) &&
           m >= std::log2(12.0 * std::sqrt(-b));
}

void criterion_1() {
    const auto& seq = default_seq();
    bool ok = seq.block_exponent(1) == 5 && seq.block_exponent(2) == 6 &&
              seq.block_exponent(3) == 6;
    for (int k = 1; k <= 3 && ok; ++k) {
        const int m = seq.block_exponent(k);
        ok = bounds_ok_oracle(k, seq.b(k), m) && !bounds_ok_oracle(k, seq.b(k), m - 1);
    }
    report(1, ok, "minimal block exponents are (5,6,6), re-checked by brute force");
}

void criterion_2() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> pick(-1e6, -6.0);
    long violations = 0;
    for (int i = 0; i < 10000; ++i) {
        double b = pick(rng);
        if (!(b < -6.0)) b = std::nextafter(-6.0, -7.0);
        const Radii rad = radii(b);
        const double q = std::sqrt(-b);
        auto tol = [](double x) { return 4.0 * std::numeric_limits<double>::epsilon() * x; };
        if (rad.r < 1.0 / q - tol(rad.r)) ++violations;
        if (rad.r > 1.0 / std::sqrt(-b - 2.0) + tol(rad.r)) ++violations;
        if (!(1.0 / std::sqrt(-b - 2.0) < 0.5 + tol(0.5))) ++violations;
        if (rad.s < 0.5 / q - tol(rad.s)) ++violations;
        if (!(rad.t > 0.125 / q - tol(rad.t))) ++violations;
        if (!(rad.u > 1.0 / (12.0 * q) - tol(rad.u))) ++violations;
    }
    report(2, violations == 0,
           "radius inequalities hold for 10^4 random b, " + std::to_string(violations) +
               " violations at 4-ulp tolerance");
}

double boundary_max(double b, double rho) {
    const double center = std::sqrt(-b);
    auto value = [&](double theta) {
        const Complex w = center + rho * Complex(std::cos(theta), std::sin(theta));
        return std::abs(w * w + b);
    };
    const int n = 4096;
    double best_theta = 0.0, best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n;
        if (const double v = value(th); v > best) {
            best = v;
            best_theta = th;
        }
    }
    double lo = best_theta - 2.0 * std::numbers::pi / n;
    double hi = best_theta + 2.0 * std::numbers::pi / n;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (value(m1) < value(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    return value(0.5 * (lo + hi));
}

void criterion_3() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pick_b(-1000.0, -6.001);
    std::uniform_real_distribution<double> pick_r(0.001, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double b = pick_b(rng);
        const double R = pick_r(rng);
        const double rho = forward_image_radius(b, R);
        const double measured = boundary_max(b, rho);
        worst = std::max(worst, std::abs(measured - R) / R);
    }
    std::ostringstream msg;
    msg << "sampled disk-boundary maxima match the target radius, worst relative error " << worst;
    report(3, worst <= 1e-9, msg.str());
}

void criterion_4() {
    const auto& seq = default_seq();
    bool ok = true;
    for (int k = 1; k <= seq.depth(); ++k) {
        ok = ok && check_block_invariance(seq, k, 4).status == CheckReport::Status::Pass;
        ok = ok && check_annulus_invariance(seq, k, 4).status == CheckReport::Status::Pass;
    }
    const ParameterSequence bad = ParameterSequence::unchecked({-7.0, -10.0, -13.0}, {3, 6, 6});
    const bool corrupted_fails =
        check_block_invariance(bad, 1, 4).status == CheckReport::Status::Fail ||
        check_annulus_invariance(bad, 1, 4).status == CheckReport::Status::Fail;
    report(4, ok && corrupted_fails,
           "block/annulus invariance passes every stage; the m_1=3 fixture fails");
}

void criterion_5() {
    const auto& seq = default_seq();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> rad(1.0 / 3.0 + 1e-9, 3.0 - 1e-9);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    bool ok = true;
    double worst_fd = 0.0;
    for (int k = 1; k <= seq.depth() && ok; ++k) {
        const long m = seq.checkpoint(k - 1);
        const long len = seq.checkpoint(k) - m;
        int fd_done = 0;
        for (int i = 0; i < 1000; ++i) {
            const double r = rad(rng), th = ang(rng);
            const Complex z = r * Complex(std::cos(th), std::sin(th));
            std::string code(static_cast<std::size_t>(len), '0');
            for (char& c : code) c = (rng() & 1u) ? '1' : '0';
            const double deriv = branch_derivative(seq, m, k, z, code);
            if (!(deriv < 0.5)) ok = false;
            if (fd_done < 10) {
                const Complex w = inverse_chain(seq, seq.checkpoint(k), m, z, code).back();
                const double h = 1e-6;
                const Complex qp = compose(seq, m, seq.checkpoint(k), w + h).value;
                const Complex qm = compose(seq, m, seq.checkpoint(k), w - h).value;
                const double fd = 1.0 / std::abs((qp - qm) / (2.0 * h));
                worst_fd = std::max(worst_fd, std::abs(fd - deriv) / deriv);
                ++fd_done;
            }
        }
    }
    std::ostringstream msg;
    msg << "full-block inverse branches contract below 1/2, finite-difference agreement "
        << worst_fd;
    report(5, ok && worst_fd <= 1e-4, msg.str());
}

void criterion_6() {
    const auto& seq = default_seq();
    const double margin = annulus_A(seq, 1).modulus() - std::log(4.0 * std::sqrt(7.0) - 1.0);
    bool ok = margin >= 0.2;

    std::mt19937_64 rng(6);
    double worst_rt = 0.0;
    const double bound_base = (4.0 * std::numbers::pi + 1.5) * 6.0 * std::sqrt(7.0);
    for (int k = 1; k <= 3 && ok; ++k) {
        const long len = seq.checkpoint(k) - 1;
        std::vector<std::string> codes{std::string(static_cast<std::size_t>(len), '0')};
        for (int j = 0; j < 7; ++j) {
            std::string code(static_cast<std::size_t>(len), '0');
            for (char& c : code) c = (rng() & 1u) ? '1' : '0';
            codes.push_back(std::move(code));
        }
        const RoundAnnulus target = annulus_A(seq, k);
        for (const std::string& code : codes) {
            const PulledBackAnnulus ann = pull_back_annulus(seq, 0, k, code);
            if (!(ann.measured_diameter <= bound_base / std::exp2(k - 1))) ok = false;
            auto round_trip = [&](const std::vector<Complex>& poly, double radius) {
                for (std::size_t i = 0; i < poly.size(); i += 5) {
                    const OrbitPoint fwd = compose(seq, 0, seq.checkpoint(k) - 1, poly[i]);
                    if (fwd.overflow) {
                        ok = false;
                        return;
                    }
                    const double rel =
                        std::abs(std::abs(fwd.value - target.center) - radius) / radius;
                    worst_rt = std::max(worst_rt, rel);
                }
            };
            round_trip(ann.outer, target.outer);
            round_trip(ann.inner, target.inner);
        }
    }
    std::ostringstream msg;
    msg << "modulus margin " << margin << ", round-trip worst relative error " << worst_rt
        << ", diameters under the bound";
    report(6, ok && worst_rt <= 1e-6, msg.str());
}

void criterion_7() {
    const auto& seq = default_seq();
    RenderConfig cfg;
    cfg.center = {0.0, 0.0};
    cfg.width = 7.0;
    cfg.height = 1.6;
    cfg.res_x = 1024;
    cfg.res_y = 240;
    cfg.time = 5;  // the first side time M_1 - 1
    const ClassifiedGrid grid = classify_grid(seq, cfg);
    const auto samples = extract_julia_samples(grid);
    const double root = std::sqrt(7.0);
    const double r1 = radii(-7.0).r;
    const double outer = 2.0 * root - r1;
    bool in_disks = !samples.empty();
    bool off_annulus = true;
    for (const JuliaSample& s : samples) {
        const double dg = std::abs(s.z - Complex(root, 0.0));
        const double dh = std::abs(s.z + Complex(root, 0.0));
        if (std::min(dg, dh) > r1 + 1e-9) in_disks = false;
        if (dg > r1 + 1e-9 && dg < outer - 1e-9) off_annulus = false;
    }

    std::vector<std::vector<Complex>> polylines;
    std::vector<int> groups;
    for (int j = 0; j < 64; ++j) {
        std::string code(6, '0');
        for (int bit = 0; bit < 6; ++bit) {
            if (j & (1 << bit)) code[static_cast<std::size_t>(bit)] = '1';
        }
        const PulledBackAnnulus ann = pull_back_annulus(seq, 6, 2, code);
        polylines.push_back(ann.inner);
        groups.push_back(j);
        polylines.push_back(ann.outer);
        groups.push_back(j);
    }
    const long crossings = count_cross_group_intersections(polylines, groups);

    std::ostringstream msg;
    msg << samples.size() << " boundary samples confined to the two survival disks, "
        << crossings << " crossings among the 64 stage-2 pull-backs";
    report(7, in_disks && off_annulus && crossings == 0, msg.str());
}

void criterion_8() {
    const auto& seq = default_seq();
    RenderConfig cfg;
    cfg.center = {0.0, 0.0};
    cfg.width = 5.0;
    cfg.height = 5.0;
    cfg.res_x = 1024;
    cfg.res_y = 1024;
    cfg.time = 0;
    const ClassifiedGrid grid = classify_grid(seq, cfg);
    long thick = 0;
    for (const PixelOutcome& px : grid.pixels) {
        if (!px.survived) continue;
        const auto cls = static_cast<ItineraryClass>(px.cls);
        if (cls == ItineraryClass::AllH || cls == ItineraryClass::TailH) ++thick;
    }
    const double total = static_cast<double>(grid.pixels.size());
    const long boundary = count_boundary_pixels(grid);
    const long g3 = count_boundary_pixels_hitting_g(grid, 3);
    const double thick_frac = thick / total;
    const double g3_frac = boundary > 0 ? static_cast<double>(g3) / boundary : 0.0;

    const Classification zero = classify(seq, Complex(0, 0), 0, 3);
    bool zero_all_h = zero.survived();
    for (Side s : zero.itinerary) zero_all_h = zero_all_h && s == Side::H;
    const Classification root = classify(seq, Complex(std::sqrt(7.0), 0.0), 5, 3);
    const bool root_joins_1 = root.survived() && joining_stage(root.itinerary) == 1;

    std::ostringstream msg;
    msg << "thick fraction " << thick_frac << ", boundary pixels hitting G at stage 3: "
        << g3_frac << " of " << boundary;
    report(8, thick_frac >= 0.01 && g3_frac >= 0.001 && zero_all_h && root_joins_1, msg.str());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_9() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "thickthin_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg_path = base / "config.json";
    std::ofstream(cfg_path) << R"({"b": [-7.0, -10.0, -13.0], "seed": 7, "times": [0],)"
                            << R"( "res": "256x256", "window": [0.0, 0.0, 5.0, 5.0]})";
    bool ok = true;
    for (const char* cmd : {"verify", "render"}) {
        const fs::path d1 = base / (std::string(cmd) + "_1");
        const fs::path d2 = base / (std::string(cmd) + "_2");
        for (const fs::path& d : {d1, d2}) {
            const int rc = run_cli({cmd, "--config", cfg_path.string(), "--out", d.string()});
            if (rc != 0) ok = false;
        }
        const std::vector<std::string> files =
            std::string(cmd) == "verify"
                ? std::vector<std::string>{"verify.json", "verify.csv"}
                : std::vector<std::string>{"render_m0.ppm", "julia_m0.csv"};
        for (const std::string& f : files) {
            if (slurp(d1 / f) != slurp(d2 / f) || slurp(d1 / f).empty()) ok = false;
        }
    }
    report(9, ok, "repeated verify/render runs produce byte-identical reports and images");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
