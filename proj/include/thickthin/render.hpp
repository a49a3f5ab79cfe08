#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thickthin/dynamics.hpp"
#include "thickthin/geometry.hpp"
#include "thickthin/params.hpp"

namespace thickthin {

struct RenderConfig {
    Complex center{0.0, 0.0};
    double width = 5.0;
    double height = 5.0;
    int res_x = 512;
    int res_y = 512;
    long time = 0;     // start time m of the rendered tail
    int horizon = 0;   // 0: full depth of the sequence
    int tail_margin = 2;
    int threads = 0;   // 0: hardware concurrency
};

// Compact per-pixel outcome; itinerary entries are packed as bitmasks indexed
// by stage - 1 (entry_bits marks recorded stages, g_bits the G entries).
struct PixelOutcome {
    std::uint8_t survived = 0;
    std::uint8_t anomaly = 0;
    std::uint8_t escape_stage = 0;  // 0 when survived
    std::uint8_t survived_depth = 0;
    std::uint8_t cls = 0;      // ItineraryClass
    std::uint8_t joining = 0;
    std::uint16_t entry_bits = 0;
    std::uint16_t g_bits = 0;
};

struct ClassifiedGrid {
    RenderConfig cfg;
    int horizon = 0;
    std::vector<PixelOutcome> pixels;  // row-major, y increasing downward
    long anomaly_count = 0;

    const PixelOutcome& at(int ix, int iy) const {
        return pixels[static_cast<std::size_t>(iy) * cfg.res_x + ix];
    }
    Complex pixel_center(int ix, int iy) const;
};

// Per-pixel classification at pixel centers; row-parallel, order-independent.
ClassifiedGrid classify_grid(const ParameterSequence& seq, const RenderConfig& cfg);

struct JuliaSample {
    Complex z;
    int stage = 0;  // stages survived at the horizon
};

// Surviving pixels with at least one escaped 4-neighbor: the pixelized
// boundary of the survival intersection.
std::vector<JuliaSample> extract_julia_samples(const ClassifiedGrid& grid);

// Pixels (either side) whose survival-at-horizon differs from a 4-neighbor.
long count_boundary_pixels(const ClassifiedGrid& grid);

// Boundary pixels whose recorded itinerary entry at `stage` is G.
long count_boundary_pixels_hitting_g(const ClassifiedGrid& grid, int stage);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major

    std::uint8_t* pixel(int ix, int iy) {
        return rgb.data() + 3 * (static_cast<std::size_t>(iy) * width + ix);
    }
};

// Escaped pixels: gradient by escape stage.  Survived: thick classes (AllH,
// TailH) in greens keyed by joining stage, thin classes (HitsGLate, Mixed)
// in warm hues.
Image colorize(const ClassifiedGrid& grid);

// Draws annulus boundary polylines over the image (outer white, inner gold).
void overlay_annuli(Image& image, const RenderConfig& cfg,
                    const std::vector<PulledBackAnnulus>& annuli);

// P6 binary pixmap, 8-bit, maxval 255; bit-exact for identical buffers.
void write_image(const Image& image, const std::string& path);

}  // namespace thickthin
