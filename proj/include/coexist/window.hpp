#pragma once

#include "coexist/map.hpp"

namespace coexist {

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Window {
    double x_min = -0.5;
    double x_max = 1.5;
    double y_min = -0.5;
    double y_max = 1.5;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    /// Finite with positive width and height.
    bool valid() const;
    bool contains(Point2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    friend bool operator==(const Window&, const Window&) = default;
};

inline bool Window::valid() const {
    return x_min < x_max && y_min < y_max && x_max - x_min < 1e300 && y_max - y_min < 1e300;
}

}  // namespace coexist
