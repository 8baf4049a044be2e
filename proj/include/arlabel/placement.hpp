#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arlabel/geometry.hpp"
#include "arlabel/scene.hpp"

namespace arlabel {

enum class Strategy { situated, boundary, height, angle, value };

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::situated, Strategy::boundary, Strategy::height, Strategy::angle, Strategy::value};

std::string_view to_string(Strategy s);
/// Throws std::invalid_argument for unknown names.
Strategy parse_strategy(std::string_view s);

/// True for strategies that label out-of-view objects (height, angle, value).
bool labels_out_of_view(Strategy s);

enum class Arrow { none, left, right };

std::string_view to_string(Arrow a);
Arrow parse_arrow(std::string_view s);

/// Sizes and spacing of label boxes on the canvas, in meters.
struct LabelStyle {
    double box_width_m = 0.10;
    double box_height_m = 0.035;
    double situated_offset_m = 0.12;  // anchor height above the projected object center
    double gap_m = 0.01;              // spacing between resolved neighbours
    double value_row_gap_m = 0.005;
};

struct LabelBox {
    int object_id = 0;
    ScreenPoint center;
    double width_m = 0.0;
    double height_m = 0.0;
    std::string text;
    int value = 0;
    LabelHighlight highlight = LabelHighlight::none;
    Arrow arrow = Arrow::none;

    double left() const { return center.x_m - width_m / 2.0; }
    double right() const { return center.x_m + width_m / 2.0; }
    double bottom() const { return center.y_m - height_m / 2.0; }
    double top() const { return center.y_m + height_m / 2.0; }

    friend bool operator==(const LabelBox&, const LabelBox&) = default;
};

struct LeaderLine {
    int object_id = 0;
    ScreenPoint from;  // on the label box boundary
    ScreenPoint to;    // projected object center
    bool present = false;

    friend bool operator==(const LeaderLine&, const LeaderLine&) = default;
};

/// `boxes`, `leaders` and `anchors` are parallel: entry i of each refers to
/// the same object. Leaders with present == false are placeholders for
/// out-of-view objects.
struct LabelLayout {
    Strategy strategy = Strategy::situated;
    std::vector<LabelBox> boxes;
    std::vector<LeaderLine> leaders;
    std::vector<ScreenPoint> anchors;

    const LabelBox* find_box(int object_id) const;
    const LeaderLine* find_leader(int object_id) const;

    friend bool operator==(const LabelLayout&, const LabelLayout&) = default;
};

// Design-space properties, one record per strategy.
struct StrategyMetadata {
    Strategy strategy;
    bool in_view_labels;
    bool out_of_view_labels;
    std::string_view label_label_proximity;
    std::string_view label_object_proximity;
    // "yes", "no", or "in-view / out-of-view" pairs where "-" means not applicable
    std::string_view encodes_lateral_position;
    std::string_view encodes_vertical_position;
    bool encodes_direction;
    bool encodes_angle;
    bool encodes_value;
    bool label_movement;
    std::string_view body_movement;
    std::string_view gaze_pattern;
    std::string_view familiarity;
    std::string_view predictability;
};

const std::array<StrategyMetadata, 5>& strategy_metadata();
const StrategyMetadata& metadata_for(Strategy s);

// ---------------------------------------------------------------------------
// 1D overlap resolution

struct Interval1D {
    double desired_center = 0.0;
    double length = 0.0;
};

class CapacityExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Moves intervals so none overlap and all lie within [lo, hi] (circular mode:
/// the circle of circumference hi - lo), keeping their order (circular order
/// in circular mode) and minimising total absolute displacement. Equal desired
/// centers keep input order. Throws CapacityExceeded when the lengths do not
/// fit.
std::vector<double> resolve_overlaps_1d(const std::vector<Interval1D>& intervals, double lo, double hi,
                                        bool circular);

/// Overflow fallback: spreads intervals in the given order evenly so the first
/// touches lo and the last touches hi. Overlap between neighbours is uniform.
std::vector<double> distribute_evenly(std::size_t count, double length, double lo, double hi);

// ---------------------------------------------------------------------------
// Perimeter track used by the angle strategy

/// Closed rectangular path followed by label centers, parametrised by
/// clockwise arc length from top-center.
class PerimeterTrack {
public:
    PerimeterTrack(double half_width, double half_height);
    static PerimeterTrack for_canvas(const CanvasSpec& canvas, const LabelStyle& style);

    double perimeter() const { return 4.0 * (half_width_ + half_height_); }
    double half_width() const { return half_width_; }
    double half_height() const { return half_height_; }

    ScreenPoint point_at(double arc) const;
    /// Inverse of point_at for points on the track.
    double arc_position(const ScreenPoint& p) const;

private:
    double half_width_;
    double half_height_;
};

// ---------------------------------------------------------------------------
// Strategies

LabelLayout place_situated(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                           const LabelStyle& style = {});
LabelLayout place_boundary(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                           const LabelStyle& style = {});
LabelLayout place_height(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                         const LabelStyle& style = {});
LabelLayout place_angle(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                        const LabelStyle& style = {});
LabelLayout place_value(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                        const LabelStyle& style = {});

LabelLayout place(Strategy strategy, const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                  const LabelStyle& style = {});

// ---------------------------------------------------------------------------
// Clutter metrics

struct Segment {
    ScreenPoint a;
    ScreenPoint b;
};

/// Proper intersection: the segments cross at a single interior point.
/// Touching, shared endpoints and collinear overlap do not count.
bool segments_cross(const Segment& s, const Segment& t);

int count_line_crossings(const LabelLayout& layout);

struct ClutterMetrics {
    double mean_leader_length_m = 0.0;
    int crossing_count = 0;
    double total_box_overlap_m2 = 0.0;
    double mean_label_object_gap_m = 0.0;
    double mean_label_label_gap_m = 0.0;
};

double box_overlap_area(const LabelBox& a, const LabelBox& b);
double total_box_overlap(const LabelLayout& layout);

/// Label-object gap: distance from a box center to its projected object
/// center, averaged over in-view objects. Label-label gap: distance from each
/// box center to the nearest other box center, averaged over boxes.
ClutterMetrics layout_metrics(const LabelLayout& layout, const Scene& scene, const ViewState& view,
                              const CanvasSpec& canvas = {});

nlohmann::json layout_to_json(const LabelLayout& layout);

}  // namespace arlabel
