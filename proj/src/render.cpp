#include "gpm/render.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gpm {

namespace {

std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) r = c, g = x;
    else if (hp < 2) r = x, g = c;
    else if (hp < 3) g = c, b = x;
    else if (hp < 4) g = x, b = c;
    else if (hp < 5) r = x, b = c;
    else r = c, b = x;
    const double m = v - c;
    auto byte = [&](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
    return {byte(r), byte(g), byte(b)};
}

} // namespace

std::array<std::uint8_t, 3> label_color(Index label, Index n_joint) {
    if (label == n_joint) return {64, 64, 64}; // background
    return hsv_to_rgb(360.0 * label / std::max<Index>(n_joint, 1), 0.75, 0.95);
}

std::string render_frame_ppm(const Instance& inst, const Labeling& L, int frame) {
    const Geometry& g = inst.geometry;
    if (g.empty())
        throw std::invalid_argument("render: instance carries no segment geometry");
    if (frame < 0 || frame >= g.frames) throw std::invalid_argument("render: frame out of range");
    if (L.size() != inst.graph.n_segments)
        throw std::invalid_argument("render: labeling length mismatch");

    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(g.width) * g.height * 3, 0);
    for (Index i = 0; i < inst.graph.n_segments; ++i) {
        const auto& box = g.boxes[i];
        if (frame < box[2] || frame >= box[5]) continue;
        const auto color = label_color(L.joint[i], inst.labels.n_joint());
        for (int y = box[1]; y < box[4]; ++y)
            for (int x = box[0]; x < box[3]; ++x) {
                const std::size_t at = 3 * (static_cast<std::size_t>(y) * g.width + x);
                pixels[at] = color[0];
                pixels[at + 1] = color[1];
                pixels[at + 2] = color[2];
            }
    }

    std::ostringstream os;
    os << "P6\n" << g.width << " " << g.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    return os.str();
}

} // namespace gpm
