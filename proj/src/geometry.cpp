#include "arlabel/geometry.hpp"

#include <algorithm>
#include <utility>

namespace arlabel {

namespace {

// sin and cos of an angle in degrees, exact at multiples of 90
std::pair<double, double> sincos_deg(double deg)
{
    const double quarter = std::round(deg / 90.0);
    const double r = deg_to_rad(deg - 90.0 * quarter);
    const double s = std::sin(r);
    const double c = std::cos(r);
    switch (((static_cast<long long>(quarter) % 4) + 4) % 4) {
    case 0:
        return {s, c};
    case 1:
        return {c, -s};
    case 2:
        return {-s, -c};
    default:
        return {-c, s};
    }
}

}  // namespace

double normalize_deg_360(double deg)
{
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    // fmod of a tiny negative value plus 360 can round up to exactly 360
    if (r >= 360.0) {
        r = 0.0;
    }
    return r;
}

double normalize_deg_180(double deg)
{
    double r = normalize_deg_360(deg);
    if (r > 180.0) {
        r -= 360.0;
    }
    return r;
}

Vec3 to_cartesian(const WorldPosition& p)
{
    const auto [s, c] = sincos_deg(p.azimuth_deg);
    return {p.radius_m * s, p.height_m, p.radius_m * c};
}

double distance_3d(const WorldPosition& a, const WorldPosition& b)
{
    const Vec3 u = to_cartesian(a);
    const Vec3 w = to_cartesian(b);
    return std::hypot(u.x - w.x, u.y - w.y, u.z - w.z);
}

ViewState ViewState::normalized() const
{
    return {normalize_deg_360(yaw_deg), std::clamp(pitch_deg, -90.0, 90.0), eye_height_m};
}

bool CanvasSpec::valid() const
{
    return distance_m > 0.0 && fov_h_deg > 0.0 && fov_h_deg < 180.0 && fov_v_deg > 0.0 &&
           fov_v_deg < 180.0;
}

RelativeDirection relative_direction(const WorldPosition& p, const ViewState& v)
{
    RelativeDirection d;
    d.rel_azimuth_deg = normalize_deg_180(p.azimuth_deg - v.yaw_deg);
    d.elevation_deg = rad_to_deg(std::atan2(p.height_m - v.eye_height_m, p.radius_m));
    return d;
}

std::optional<ScreenPoint> project(const WorldPosition& p, const ViewState& v, const CanvasSpec& c)
{
    const ViewState view = v.normalized();
    const auto [sr, cr] = sincos_deg(normalize_deg_180(p.azimuth_deg - view.yaw_deg));

    // yaw-aligned frame
    const double x = p.radius_m * sr;
    const double y = p.height_m - view.eye_height_m;
    const double z = p.radius_m * cr;

    // pitch (positive looks up)
    const auto [sp, cp] = sincos_deg(view.pitch_deg);
    const double y_head = y * cp - z * sp;
    const double z_head = y * sp + z * cp;

    if (z_head <= 0.0) {
        return std::nullopt;
    }
    return ScreenPoint{c.distance_m * x / z_head, c.distance_m * y_head / z_head};
}

bool on_canvas(const ScreenPoint& s, const CanvasSpec& c)
{
    return std::abs(s.x_m) <= c.half_width_m() + kBoundsEpsilon &&
           std::abs(s.y_m) <= c.half_height_m() + kBoundsEpsilon;
}

bool is_in_view(const WorldPosition& p, const ViewState& v, const CanvasSpec& c)
{
    const auto s = project(p, v, c);
    return s.has_value() && on_canvas(*s, c);
}

double canvas_angle_deg(const ScreenPoint& a, const ScreenPoint& b, const CanvasSpec& c)
{
    const double d = c.distance_m;
    const double dot = a.x_m * b.x_m + a.y_m * b.y_m + d * d;
    const double cross_x = a.y_m * d - d * b.y_m;
    const double cross_y = d * b.x_m - a.x_m * d;
    const double cross_z = a.x_m * b.y_m - a.y_m * b.x_m;
    return rad_to_deg(std::atan2(std::hypot(cross_x, cross_y, cross_z), dot));
}

}  // namespace arlabel
