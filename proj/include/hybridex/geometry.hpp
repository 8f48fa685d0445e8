#pragma once

#include <cstdint>

namespace hybridex {

/// Canonical device geometry in logical pixels.
inline constexpr int kScreenWidth = 1080;
inline constexpr int kScreenHeight = 1920;

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Half-open integer rectangle [left, right) x [top, bottom).
struct Rect {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    [[nodiscard]] constexpr int width() const { return right - left; }
    [[nodiscard]] constexpr int height() const { return bottom - top; }
    [[nodiscard]] constexpr std::int64_t area() const
    {
        return empty() ? 0 : static_cast<std::int64_t>(width()) * height();
    }
    [[nodiscard]] constexpr bool empty() const { return right <= left || bottom <= top; }

    [[nodiscard]] constexpr bool contains(Point p) const
    {
        return p.x >= left && p.x < right && p.y >= top && p.y < bottom;
    }

    [[nodiscard]] constexpr bool overlaps(const Rect& o) const
    {
        return left < o.right && o.left < right && top < o.bottom && o.top < bottom;
    }

    [[nodiscard]] constexpr bool within(const Rect& outer) const
    {
        return left >= outer.left && top >= outer.top && right <= outer.right
               && bottom <= outer.bottom;
    }

    [[nodiscard]] constexpr Point center() const
    {
        return {left + width() / 2, top + height() / 2};
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline constexpr Rect kScreenRect{0, 0, kScreenWidth, kScreenHeight};

}  // namespace hybridex
