#include "thickthin/cli.hpp"

#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "thickthin/dynamics.hpp"
#include "thickthin/geometry.hpp"
#include "thickthin/params.hpp"
#include "thickthin/render.hpp"
#include "thickthin/verify.hpp"

namespace thickthin {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToolConfig {
    std::vector<double> b{-7.0, -10.0, -13.0};
    std::vector<int> m_override;
    std::string out = ".";
    std::uint64_t seed = 1;
    std::vector<long> times{0};
    int depth = 0;  // 0: all stages of b
    int res_x = 512;
    int res_y = 512;
    Complex center{0.0, 0.0};
    double width = 5.0;
    double height = 5.0;
    std::vector<std::string> overlays;
    std::string only;
    int tail_margin = 2;
    int threads = 0;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void parse_res(const std::string& text, ToolConfig& cfg) {
    int w = 0, h = 0;
    char sep = 0;
    std::istringstream in(text);
    if (!(in >> w >> sep >> h) || (sep != 'x' && sep != 'X') || w < 2 || h < 2) {
        throw ConfigError("bad resolution '" + text + "', expected WxH with W,H >= 2");
    }
    cfg.res_x = w;
    cfg.res_y = h;
}

void parse_window(const std::string& text, ToolConfig& cfg) {
    double cx = 0, cy = 0, w = 0, h = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream in(text);
    if (!(in >> cx >> c1 >> cy >> c2 >> w >> c3 >> h) || c1 != ',' || c2 != ',' || c3 != ',' ||
        !(w > 0.0) || !(h > 0.0)) {
        throw ConfigError("bad window '" + text + "', expected CX,CY,W,H with positive area");
    }
    cfg.center = {cx, cy};
    cfg.width = w;
    cfg.height = h;
}

void load_config_file(const std::string& path, ToolConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "b") {
                cfg.b = value.get<std::vector<double>>();
            } else if (key == "m_override") {
                cfg.m_override = value.get<std::vector<int>>();
            } else if (key == "out") {
                cfg.out = value.get<std::string>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "times") {
                cfg.times = value.get<std::vector<long>>();
            } else if (key == "depth") {
                cfg.depth = value.get<int>();
            } else if (key == "res") {
                parse_res(value.get<std::string>(), cfg);
            } else if (key == "window") {
                const auto v = value.get<std::vector<double>>();
                if (v.size() != 4 || !(v[2] > 0.0) || !(v[3] > 0.0)) {
                    throw ConfigError("window must be [cx, cy, w, h] with positive area");
                }
                cfg.center = {v[0], v[1]};
                cfg.width = v[2];
                cfg.height = v[3];
            } else if (key == "overlay") {
                cfg.overlays = value.get<std::vector<std::string>>();
            } else if (key == "only") {
                cfg.only = value.get<std::string>();
            } else if (key == "tail_margin") {
                cfg.tail_margin = value.get<int>();
            } else if (key == "threads") {
                cfg.threads = value.get<int>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
}

ParameterSequence make_sequence(const ToolConfig& cfg) {
    std::vector<double> b = cfg.b;
    std::vector<int> overrides = cfg.m_override;
    if (cfg.depth > 0) {
        if (cfg.depth > static_cast<int>(b.size())) {
            throw ConfigError("depth exceeds the number of stages in b");
        }
        b.resize(static_cast<std::size_t>(cfg.depth));
        if (!overrides.empty()) overrides.resize(static_cast<std::size_t>(cfg.depth));
    }
    PlanPolicy policy;
    policy.exponent_override = overrides;
    try {
        return build_sequence(b, policy);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

// verify keeps exponent overrides that violate the bounds so the checks can
// expose them (and fail with exit code 1); bad b values stay hard errors.
ParameterSequence make_sequence_lenient(const ToolConfig& cfg) {
    try {
        return make_sequence(cfg);
    } catch (const ConfigError&) {
        std::vector<double> b = cfg.b;
        std::vector<int> overrides = cfg.m_override;
        if (cfg.depth > 0 && cfg.depth <= static_cast<int>(b.size())) {
            b.resize(static_cast<std::size_t>(cfg.depth));
            if (!overrides.empty()) overrides.resize(static_cast<std::size_t>(cfg.depth));
        }
        if (b.empty() || overrides.size() != b.size()) throw;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(b[i] < -6.0) || overrides[i] < 1) throw;
        }
        std::fprintf(stderr,
                     "warning: exponent override violates a bound; running checks anyway\n");
        return ParameterSequence::unchecked(b, overrides);
    }
}

std::ofstream open_out(const ToolConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    const auto path = std::filesystem::path(cfg.out) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

const char* class_name(ItineraryClass c) {
    switch (c) {
        case ItineraryClass::AllH: return "all_h";
        case ItineraryClass::TailH: return "tail_h";
        case ItineraryClass::HitsGLate: return "hits_g_late";
        case ItineraryClass::Mixed: return "mixed";
    }
    return "unknown";
}

int cmd_plan(const ToolConfig& cfg) {
    const ParameterSequence seq = make_sequence(cfg);
    json plan;
    plan["b"] = json::array();
    plan["a"] = json::array();
    plan["m"] = json::array();
    plan["M"] = json::array({0});
    plan["bounds"] = json::array();
    std::printf("%3s %12s %12s %4s %6s %10s %10s %10s %10s\n", "k", "b", "a", "m", "M", "g1",
                "g2", "g3", "g4");
    for (int k = 1; k <= seq.depth(); ++k) {
        const ExponentMargins g = exponent_margins(k, seq.b(k), seq.block_exponent(k));
        std::printf("%3d %12.6f %12.7f %4d %6ld %10.4f %10.4f %10.4f %10.4f\n", k, seq.b(k),
                    seq.a(k), seq.block_exponent(k), seq.checkpoint(k), g.g1, g.g2, g.g3, g.g4);
        plan["b"].push_back(seq.b(k));
        plan["a"].push_back(seq.a(k));
        plan["m"].push_back(seq.block_exponent(k));
        plan["M"].push_back(seq.checkpoint(k));
        plan["bounds"].push_back({{"k", k}, {"g1", g.g1}, {"g2", g.g2}, {"g3", g.g3}, {"g4", g.g4}});
    }
    plan["advisories"] = seq.advisories();
    for (const std::string& a : seq.advisories()) {
        std::fprintf(stderr, "advisory: %s\n", a.c_str());
    }
    open_out(cfg, "plan.json") << plan.dump(2) << "\n";
    return 0;
}

int cmd_verify(const ToolConfig& cfg) {
    const ParameterSequence seq = make_sequence_lenient(cfg);
    const std::vector<CheckReport> reports = run_all(seq, cfg.seed, cfg.only);
    if (reports.empty()) throw ConfigError("no check matches filter '" + cfg.only + "'");

    json doc;
    doc["seed"] = cfg.seed;
    doc["all_pass"] = all_passed(reports);
    doc["checks"] = json::array();
    auto csv = open_out(cfg, "verify.csv");
    csv << "name,status,margin,samples\n";
    for (const CheckReport& r : reports) {
        doc["checks"].push_back({{"name", r.name},
                                 {"detail", r.detail},
                                 {"status", CheckReport::status_name(r.status)},
                                 {"margin", r.margin},
                                 {"samples", r.samples}});
        csv << r.name << ',' << CheckReport::status_name(r.status) << ',' << fmt(r.margin) << ','
            << r.samples << "\n";
        std::printf("%-28s %-13s margin=%-12.5g samples=%ld\n", r.name.c_str(),
                    CheckReport::status_name(r.status), r.margin, r.samples);
    }
    open_out(cfg, "verify.json") << doc.dump(2) << "\n";
    return all_passed(reports) ? 0 : 1;
}

std::vector<PulledBackAnnulus> build_overlays(const ParameterSequence& seq, long time,
                                              const std::vector<std::string>& specs) {
    std::vector<PulledBackAnnulus> out;
    for (const std::string& spec : specs) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t colon = spec.find(':', start);
            parts.push_back(spec.substr(start, colon - start));
            if (colon == std::string::npos) break;
            start = colon + 1;
        }
        auto stage_of = [&](const std::string& s) {
            try {
                const int k = std::stoi(s);
                if (k < 1 || k > seq.depth()) throw std::out_of_range("stage");
                return k;
            } catch (const std::exception&) {
                throw ConfigError("bad overlay stage in '" + spec + "'");
            }
        };
        if (parts.size() == 2 && parts[0] == "A") {
            const int k = stage_of(parts[1]);
            const long len = seq.checkpoint(k) - 1 - time;
            if (len < 0) throw ConfigError("overlay '" + spec + "' needs time <= M_k - 1");
            out.push_back(pull_back_annulus(seq, time, k, std::string(len, '0')));
        } else if (parts.size() == 3 && parts[0] == "B") {
            const int k = stage_of(parts[1]);
            const long len = seq.checkpoint(k) - 1 - time;
            if (len < 0) throw ConfigError("overlay '" + spec + "' needs time <= M_k - 1");
            if (parts[2] == "*") {
                if (len > 12) throw ConfigError("overlay '" + spec + "': too many codes (2^" +
                                                std::to_string(len) + ")");
                for (long j = 0; j < (1l << len); ++j) {
                    std::string code(static_cast<std::size_t>(len), '0');
                    for (long bit = 0; bit < len; ++bit) {
                        if (j & (1l << bit)) code[static_cast<std::size_t>(bit)] = '1';
                    }
                    out.push_back(pull_back_annulus(seq, time, k, code));
                }
            } else {
                if (static_cast<long>(parts[2].size()) != len) {
                    throw ConfigError("overlay '" + spec + "': code length must be " +
                                      std::to_string(len));
                }
                out.push_back(pull_back_annulus(seq, time, k, parts[2]));
            }
        } else {
            throw ConfigError("bad overlay spec '" + spec + "' (use A:k, B:k:code, or B:k:*)");
        }
    }
    return out;
}

void write_annuli_csv(const ToolConfig& cfg, const std::vector<PulledBackAnnulus>& annuli) {
    auto csv = open_out(cfg, "annuli.csv");
    csv << "code,boundary,index,re,im\n";
    for (const PulledBackAnnulus& ann : annuli) {
        const std::string label = std::to_string(ann.stage) + ":" + ann.code;
        for (int which = 0; which < 2; ++which) {
            const auto& poly = which == 0 ? ann.inner : ann.outer;
            const char* name = which == 0 ? "inner" : "outer";
            for (std::size_t i = 0; i < poly.size(); ++i) {
                csv << label << ',' << name << ',' << i << ',' << fmt(poly[i].real()) << ','
                    << fmt(poly[i].imag()) << "\n";
            }
        }
    }
}

int cmd_render(const ToolConfig& cfg) {
    const ParameterSequence seq = make_sequence(cfg);
    std::filesystem::create_directories(cfg.out);
    bool wrote_annuli = false;
    for (const long time : cfg.times) {
        RenderConfig rc;
        rc.center = cfg.center;
        rc.width = cfg.width;
        rc.height = cfg.height;
        rc.res_x = cfg.res_x;
        rc.res_y = cfg.res_y;
        rc.time = time;
        rc.tail_margin = cfg.tail_margin;
        rc.threads = cfg.threads;
        ClassifiedGrid grid;
        try {
            grid = classify_grid(seq, rc);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        Image img = colorize(grid);
        if (!cfg.overlays.empty()) {
            const auto annuli = build_overlays(seq, time, cfg.overlays);
            overlay_annuli(img, rc, annuli);
            if (!wrote_annuli) {
                write_annuli_csv(cfg, annuli);
                wrote_annuli = true;
            }
        }
        const std::string suffix = "_m" + std::to_string(time);
        write_image(img, (std::filesystem::path(cfg.out) / ("render" + suffix + ".ppm")).string());
        auto csv = open_out(cfg, "julia" + suffix + ".csv");
        csv << "re,im,stage\n";
        for (const JuliaSample& s : extract_julia_samples(grid)) {
            csv << fmt(s.z.real()) << ',' << fmt(s.z.imag()) << ',' << s.stage << "\n";
        }
        std::printf("render%s.ppm: %dx%d, anomalies=%ld\n", suffix.c_str(), rc.res_x, rc.res_y,
                    grid.anomaly_count);
    }
    return 0;
}

int cmd_probe(const ToolConfig& cfg, Complex z, long time) {
    const ParameterSequence seq = make_sequence(cfg);
    if (time < 0 || time > seq.total_time()) throw ConfigError("probe time out of range");
    const Classification c = classify(seq, z, time, seq.depth());
    const ItineraryClassification ic = classify_itinerary(c.itinerary, std::max(1, cfg.tail_margin));

    json doc;
    doc["z"] = {z.real(), z.imag()};
    doc["time"] = time;
    doc["status"] = c.survived() ? "survived" : "escaped";
    if (!c.survived()) {
        doc["escape_stage"] = c.escape_stage;
        doc["escape_step"] = c.escape_step;
    }
    std::string itin;
    for (Side s : c.itinerary) itin += s == Side::G ? 'G' : 'H';
    doc["itinerary"] = itin;
    doc["first_stage"] = c.first_stage;
    const int jg = joining_stage(c.itinerary);
    doc["joining"] = jg == 0 ? 0 : jg + c.first_stage - 1;
    doc["class"] = class_name(ic.cls);
    doc["anomaly"] = c.anomaly;

    // every G entry of a surviving orbit pins down one enclosing pulled-back
    // annulus; its branch code reads off the orbit's root choices
    doc["annuli"] = json::array();
    if (c.survived()) {
        std::vector<Complex> orbit{z};
        Complex w = z;
        for (long t = time + 1; t <= seq.total_time(); ++t) {
            w = w * w + seq.coefficient_at(t);
            orbit.push_back(w);
        }
        for (std::size_t i = 0; i < c.itinerary.size(); ++i) {
            if (c.itinerary[i] != Side::G) continue;
            const int k = c.first_stage + static_cast<int>(i);
            const long t_hi = seq.checkpoint(k) - 1;
            std::string code;
            for (long j = 0; j < t_hi - time; ++j) {
                const Complex v = orbit[static_cast<std::size_t>(t_hi - j - 1 - time)];
                const bool principal = v.real() > 0.0 || (v.real() == 0.0 && v.imag() >= 0.0);
                code += principal ? '0' : '1';
            }
            doc["annuli"].push_back({{"stage", k}, {"code", code}});
        }
    }
    std::printf("%s\n", doc.dump(2).c_str());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"non-autonomous quadratic iteration toolkit"};
    app.require_subcommand(1);

    struct Raw {
        std::string config, out, res, window, z, only;
        std::vector<std::string> overlay;
        std::vector<long> times;
        std::uint64_t seed = 0;
        long time = LONG_MIN;
        int depth = -1;
        bool has_seed = false;
    } raw;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", raw.config, "JSON config file");
        cmd->add_option("--out", raw.out, "output directory");
        cmd->add_option("--seed", raw.seed, "sampling seed")->each([&](const std::string&) {
            raw.has_seed = true;
        });
        cmd->add_option("--time", raw.time, "start time m");
        cmd->add_option("--depth", raw.depth, "number of stages to use");
        cmd->add_option("--res", raw.res, "resolution WxH");
        cmd->add_option("--window", raw.window, "window CX,CY,W,H");
        cmd->add_option("--overlay", raw.overlay, "annulus overlays (A:k, B:k:code, B:k:*)");
        cmd->add_option("--only", raw.only, "check-name filter");
        return cmd;
    };
    CLI::App* plan = add_common(app.add_subcommand("plan", "build and print the sequence"));
    CLI::App* verify = add_common(app.add_subcommand("verify", "run the inequality checks"));
    CLI::App* render = add_common(app.add_subcommand("render", "classify a grid and write images"));
    CLI::App* probe = add_common(app.add_subcommand("probe", "classify a single point"));
    probe->add_option("--z", raw.z, "point RE,IM");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ToolConfig cfg;
        if (!raw.config.empty()) load_config_file(raw.config, cfg);
        if (!raw.out.empty()) cfg.out = raw.out;
        if (raw.has_seed) cfg.seed = raw.seed;
        if (raw.time != LONG_MIN) cfg.times = {raw.time};
        if (raw.depth >= 0) cfg.depth = raw.depth;
        if (!raw.res.empty()) parse_res(raw.res, cfg);
        if (!raw.window.empty()) parse_window(raw.window, cfg);
        if (!raw.overlay.empty()) cfg.overlays = raw.overlay;
        if (!raw.only.empty()) cfg.only = raw.only;

        if (plan->parsed()) return cmd_plan(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (render->parsed()) return cmd_render(cfg);
        if (probe->parsed()) {
            if (raw.z.empty()) throw ConfigError("probe requires --z RE,IM");
            double re = 0, im = 0;
            char sep = 0;
            std::istringstream in(raw.z);
            if (!(in >> re >> sep >> im) || sep != ',') {
                throw ConfigError("bad --z '" + raw.z + "', expected RE,IM");
            }
            return cmd_probe(cfg, Complex(re, im), raw.time == LONG_MIN ? 0 : raw.time);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace thickthin
