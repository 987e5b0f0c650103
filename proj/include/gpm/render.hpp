#pragma once

#include "gpm/instance.hpp"

#include <string>

namespace gpm {

/// Fixed palette: background is dark gray, joint label k gets a distinct hue.
std::array<std::uint8_t, 3> label_color(Index label, Index n_joint);

/// Paints one frame as a binary PPM (P6), mapping every segment box that
/// intersects the frame to its label color. Requires instance geometry;
/// throws std::invalid_argument when it is missing or the frame is out of
/// range.
std::string render_frame_ppm(const Instance& inst, const Labeling& L, int frame);

} // namespace gpm
