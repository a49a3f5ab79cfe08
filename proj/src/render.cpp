#include "thickthin/render.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace thickthin {

Complex ClassifiedGrid::pixel_center(int ix, int iy) const {
    const double x = cfg.center.real() - cfg.width / 2.0 + cfg.width * (ix + 0.5) / cfg.res_x;
    const double y = cfg.center.imag() + cfg.height / 2.0 - cfg.height * (iy + 0.5) / cfg.res_y;
    return {x, y};
}

ClassifiedGrid classify_grid(const ParameterSequence& seq, const RenderConfig& cfg) {
    if (cfg.res_x < 2 || cfg.res_y < 2) {
        throw std::invalid_argument("classify_grid: resolution must be at least 2x2");
    }
    if (!(cfg.width > 0.0 && cfg.height > 0.0)) {
        throw std::invalid_argument("classify_grid: window must have positive area");
    }
    const int horizon = cfg.horizon > 0 ? cfg.horizon : seq.depth();
    if (horizon > seq.depth() || cfg.time > seq.checkpoint(horizon)) {
        throw std::invalid_argument("classify_grid: time/horizon out of range");
    }

    ClassifiedGrid grid;
    grid.cfg = cfg;
    grid.horizon = horizon;
    grid.pixels.resize(static_cast<std::size_t>(cfg.res_x) * cfg.res_y);

    auto classify_row = [&](int iy) {
        for (int ix = 0; ix < cfg.res_x; ++ix) {
            const Classification c = classify(seq, grid.pixel_center(ix, iy), cfg.time, horizon);
            PixelOutcome& px = grid.pixels[static_cast<std::size_t>(iy) * cfg.res_x + ix];
            px.survived = c.survived() ? 1 : 0;
            px.anomaly = c.anomaly ? 1 : 0;
            px.escape_stage = static_cast<std::uint8_t>(c.escape_stage);
            px.survived_depth = static_cast<std::uint8_t>(c.survived_depth);
            for (std::size_t i = 0; i < c.itinerary.size() && i < 16; ++i) {
                const int stage = c.first_stage + static_cast<int>(i);
                if (stage > 16) break;
                px.entry_bits |= static_cast<std::uint16_t>(1u << (stage - 1));
                if (c.itinerary[i] == Side::G) {
                    px.g_bits |= static_cast<std::uint16_t>(1u << (stage - 1));
                }
            }
            const ItineraryClassification ic =
                classify_itinerary(c.itinerary, std::max(1, cfg.tail_margin));
            px.cls = static_cast<std::uint8_t>(ic.cls);
            px.joining = static_cast<std::uint8_t>(ic.joining);
        }
    };

    const unsigned n_threads =
        cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                        : std::max(1u, std::thread::hardware_concurrency());
    if (n_threads <= 1 || cfg.res_y < 8) {
        for (int iy = 0; iy < cfg.res_y; ++iy) classify_row(iy);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            workers.emplace_back([&, w] {
                for (int iy = static_cast<int>(w); iy < cfg.res_y;
                     iy += static_cast<int>(n_threads)) {
                    classify_row(iy);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    for (const PixelOutcome& px : grid.pixels) {
        if (px.anomaly) ++grid.anomaly_count;
    }
    return grid;
}

namespace {

template <typename Fn>
void for_each_boundary_pixel(const ClassifiedGrid& grid, Fn&& fn) {
    const int nx = grid.cfg.res_x;
    const int ny = grid.cfg.res_y;
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const PixelOutcome& px = grid.at(ix, iy);
            bool boundary = false;
            for (int d = 0; d < 4 && !boundary; ++d) {
                const int jx = ix + dx[d];
                const int jy = iy + dy[d];
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                boundary = grid.at(jx, jy).survived != px.survived;
            }
            if (boundary) fn(ix, iy, px);
        }
    }
}

}  // namespace

std::vector<JuliaSample> extract_julia_samples(const ClassifiedGrid& grid) {
    std::vector<JuliaSample> out;
    for_each_boundary_pixel(grid, [&](int ix, int iy, const PixelOutcome& px) {
        if (px.survived) out.push_back({grid.pixel_center(ix, iy), px.survived_depth});
    });
    return out;
}

long count_boundary_pixels(const ClassifiedGrid& grid) {
    long n = 0;
    for_each_boundary_pixel(grid, [&](int, int, const PixelOutcome&) { ++n; });
    return n;
}

long count_boundary_pixels_hitting_g(const ClassifiedGrid& grid, int stage) {
    if (stage < 1 || stage > 16) throw std::invalid_argument("stage out of packed range");
    const std::uint16_t bit = static_cast<std::uint16_t>(1u << (stage - 1));
    long n = 0;
    for_each_boundary_pixel(grid, [&](int, int, const PixelOutcome& px) {
        if (px.g_bits & bit) ++n;
    });
    return n;
}

Image colorize(const ClassifiedGrid& grid) {
    Image img;
    img.width = grid.cfg.res_x;
    img.height = grid.cfg.res_y;
    img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);
    const int horizon = std::max(1, grid.horizon);
    for (int iy = 0; iy < img.height; ++iy) {
        for (int ix = 0; ix < img.width; ++ix) {
            const PixelOutcome& px = grid.at(ix, iy);
            std::uint8_t* p = img.pixel(ix, iy);
            if (!px.survived) {
                // earlier escape -> darker blue
                const int s = std::clamp<int>(px.escape_stage, 1, horizon);
                const int v = 40 + 180 * s / horizon;
                p[0] = static_cast<std::uint8_t>(v / 4);
                p[1] = static_cast<std::uint8_t>(v / 2);
                p[2] = static_cast<std::uint8_t>(v);
                continue;
            }
            const auto cls = static_cast<ItineraryClass>(px.cls);
            if (cls == ItineraryClass::AllH || cls == ItineraryClass::TailH) {
                const int j = std::clamp<int>(px.joining, 0, horizon);
                p[0] = static_cast<std::uint8_t>(30 + 20 * j);
                p[1] = static_cast<std::uint8_t>(200 - 40 * j / std::max(1, horizon));
                p[2] = static_cast<std::uint8_t>(60 + 30 * j);
            } else {
                p[0] = 230;
                p[1] = cls == ItineraryClass::HitsGLate ? 120 : 60;
                p[2] = 30;
            }
        }
    }
    return img;
}

void overlay_annuli(Image& image, const RenderConfig& cfg,
                    const std::vector<PulledBackAnnulus>& annuli) {
    const double px_w = cfg.width / image.width;
    const double px_h = cfg.height / image.height;
    auto plot = [&](Complex z, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        const int ix = static_cast<int>(
            std::floor((z.real() - cfg.center.real() + cfg.width / 2.0) / px_w));
        const int iy = static_cast<int>(
            std::floor((cfg.center.imag() + cfg.height / 2.0 - z.imag()) / px_h));
        if (ix < 0 || ix >= image.width || iy < 0 || iy >= image.height) return;
        std::uint8_t* p = image.pixel(ix, iy);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    };
    const double step = 0.5 * std::min(px_w, px_h);
    auto draw = [&](const std::vector<Complex>& poly, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Complex a = poly[i];
            const Complex c = poly[(i + 1) % poly.size()];
            const double len = std::abs(c - a);
            const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
            for (int s = 0; s <= n; ++s) plot(a + (c - a) * (double(s) / n), r, g, b);
        }
    };
    for (const PulledBackAnnulus& ann : annuli) {
        draw(ann.outer, 255, 255, 255);
        draw(ann.inner, 255, 210, 60);
    }
}

void write_image(const Image& image, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_image: cannot open " + path);
    std::fprintf(f, "P6\n%d %d\n255\n", image.width, image.height);
    const std::size_t n = image.rgb.size();
    if (std::fwrite(image.rgb.data(), 1, n, f) != n) {
        std::fclose(f);
        throw std::runtime_error("write_image: short write to " + path);
    }
    if (std::fclose(f) != 0) throw std::runtime_error("write_image: close failed for " + path);
}

}  // namespace thickthin
