#pragma once

// Coordinate conventions and the head-locked AR canvas.
//
// Angles are degrees, lengths are meters. Azimuth is measured clockwise from
// the user's initial facing direction. The canvas is a plane at a fixed
// distance in front of the eye that follows both yaw and pitch.

#include <cmath>
#include <numbers>
#include <optional>

namespace arlabel {

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, 360).
double normalize_deg_360(double deg);

/// Wraps an angle into (-180, 180].
double normalize_deg_180(double deg);

struct WorldPosition {
    double azimuth_deg = 0.0;
    double radius_m = 1.0;
    double height_m = 0.0;

    friend bool operator==(const WorldPosition&, const WorldPosition&) = default;
};

/// Cartesian position of a world point: x right, y up, z forward
/// (relative to the initial facing direction), origin on the floor under
/// the user.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vec3 to_cartesian(const WorldPosition& p);
double distance_3d(const WorldPosition& a, const WorldPosition& b);

struct ViewState {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double eye_height_m = 1.6;

    /// Yaw wrapped into [0, 360), pitch clamped to [-90, 90].
    ViewState normalized() const;

    friend bool operator==(const ViewState&, const ViewState&) = default;
};

struct CanvasSpec {
    double distance_m = 1.8;
    double fov_h_deg = 35.0;
    double fov_v_deg = 25.0;

    double half_width_m() const { return distance_m * std::tan(deg_to_rad(fov_h_deg / 2.0)); }
    double half_height_m() const { return distance_m * std::tan(deg_to_rad(fov_v_deg / 2.0)); }
    double width_m() const { return 2.0 * half_width_m(); }
    double height_m() const { return 2.0 * half_height_m(); }

    bool valid() const;

    friend bool operator==(const CanvasSpec&, const CanvasSpec&) = default;
};

struct ScreenPoint {
    double x_m = 0.0;
    double y_m = 0.0;

    friend bool operator==(const ScreenPoint&, const ScreenPoint&) = default;
};

/// Slack used for inclusive canvas bound checks.
inline constexpr double kBoundsEpsilon = 1e-12;

struct RelativeDirection {
    double rel_azimuth_deg = 0.0;  // (-180, 180]
    double elevation_deg = 0.0;    // (-90, 90), independent of pitch
};

RelativeDirection relative_direction(const WorldPosition& p, const ViewState& v);

/// Perspective projection onto the canvas plane. Returns std::nullopt when the
/// point lies in the rear hemisphere of the head frame (depth <= 0). The
/// returned point may lie outside the canvas.
std::optional<ScreenPoint> project(const WorldPosition& p, const ViewState& v, const CanvasSpec& c);

bool on_canvas(const ScreenPoint& s, const CanvasSpec& c);

bool is_in_view(const WorldPosition& p, const ViewState& v, const CanvasSpec& c);

/// Angle subtended at the eye between two canvas points, in degrees.
double canvas_angle_deg(const ScreenPoint& a, const ScreenPoint& b, const CanvasSpec& c);

}  // namespace arlabel
