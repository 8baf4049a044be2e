#include "arlabel/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arlabel {

std::string_view to_string(Strategy s)
{
    switch (s) {
    case Strategy::situated: return "situated";
    case Strategy::boundary: return "boundary";
    case Strategy::height: return "height";
    case Strategy::angle: return "angle";
    case Strategy::value: return "value";
    }
    return "situated";
}

Strategy parse_strategy(std::string_view s)
{
    for (Strategy st : kAllStrategies) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw std::invalid_argument("unknown condition: " + std::string(s));
}

bool labels_out_of_view(Strategy s)
{
    return metadata_for(s).out_of_view_labels;
}

std::string_view to_string(Arrow a)
{
    switch (a) {
    case Arrow::none: return "none";
    case Arrow::left: return "left";
    case Arrow::right: return "right";
    }
    return "none";
}

Arrow parse_arrow(std::string_view s)
{
    if (s == "none") return Arrow::none;
    if (s == "left") return Arrow::left;
    if (s == "right") return Arrow::right;
    throw std::invalid_argument("unknown arrow: " + std::string(s));
}

const LabelBox* LabelLayout::find_box(int object_id) const
{
    auto it = std::find_if(boxes.begin(), boxes.end(), [&](const LabelBox& b) { return b.object_id == object_id; });
    return it == boxes.end() ? nullptr : &*it;
}

const LeaderLine* LabelLayout::find_leader(int object_id) const
{
    auto it = std::find_if(leaders.begin(), leaders.end(),
                           [&](const LeaderLine& l) { return l.object_id == object_id; });
    return it == leaders.end() ? nullptr : &*it;
}

const std::array<StrategyMetadata, 5>& strategy_metadata()
{
    static const std::array<StrategyMetadata, 5> table = {{
        {Strategy::situated, true, false, "low", "high", "yes / -", "yes / -", false, false, false, false, "high",
         "arbitrary", "high", "low"},
        {Strategy::boundary, true, false, "high", "medium", "yes / -", "no / -", false, false, false, false, "high",
         "linear", "low", "high"},
        {Strategy::height, true, true, "low/medium", "high", "yes / no", "yes", true, false, false, true, "medium",
         "arbitrary/linear", "medium", "low"},
        {Strategy::angle, true, true, "high", "medium", "yes", "no", true, true, false, true, "low", "linear", "low",
         "high"},
        {Strategy::value, true, true, "high", "low", "no", "no", true, false, true, false, "medium", "linear",
         "medium", "high"},
    }};
    return table;
}

const StrategyMetadata& metadata_for(Strategy s)
{
    return strategy_metadata()[static_cast<std::size_t>(s)];
}

// ---------------------------------------------------------------------------

PerimeterTrack::PerimeterTrack(double half_width, double half_height)
    : half_width_(half_width), half_height_(half_height)
{
    if (!(half_width > 0.0 && half_height > 0.0)) {
        throw std::invalid_argument("perimeter track needs positive extent");
    }
}

PerimeterTrack PerimeterTrack::for_canvas(const CanvasSpec& canvas, const LabelStyle& style)
{
    return {canvas.half_width_m() - style.box_width_m / 2.0, canvas.half_height_m() - style.box_height_m / 2.0};
}

ScreenPoint PerimeterTrack::point_at(double arc) const
{
    const double w = half_width_;
    const double h = half_height_;
    const double quarter = w + h;
    double s = std::fmod(arc, perimeter());
    if (s < 0.0) {
        s += perimeter();
    }
    // offsets are taken from each edge midpoint so the cardinals come out exact
    if (s <= w) {
        return {s, h};
    }
    if (s <= w + 2.0 * h) {
        return {w, quarter - s};
    }
    if (s <= 3.0 * w + 2.0 * h) {
        return {2.0 * quarter - s, -h};
    }
    if (s <= 3.0 * w + 4.0 * h) {
        return {-w, s - 3.0 * quarter};
    }
    return {s - perimeter(), h};
}

double PerimeterTrack::arc_position(const ScreenPoint& p) const
{
    const double w = half_width_;
    const double h = half_height_;
    const double d_top = std::abs(p.y_m - h);
    const double d_right = std::abs(p.x_m - w);
    const double d_bottom = std::abs(p.y_m + h);
    const double d_left = std::abs(p.x_m + w);
    const double d_min = std::min({d_top, d_right, d_bottom, d_left});
    if (d_min == d_top) {
        return p.x_m >= 0.0 ? p.x_m : perimeter() + p.x_m;
    }
    if (d_min == d_right) {
        return w + (h - p.y_m);
    }
    if (d_min == d_bottom) {
        return w + 2.0 * h + (w - p.x_m);
    }
    return 3.0 * w + 2.0 * h + (p.y_m + h);
}

// ---------------------------------------------------------------------------

namespace {

struct ObjectView {
    const SceneObject* object;
    RelativeDirection direction;
    std::optional<ScreenPoint> projected;
    bool in_view;
};

std::vector<ObjectView> observe(const Scene& scene, const ViewState& view, const CanvasSpec& canvas)
{
    const ViewState v = view.normalized();
    std::vector<ObjectView> out;
    out.reserve(scene.objects.size());
    for (const auto& obj : scene.objects) {
        ObjectView ov{&obj, relative_direction(obj.position, v), project(obj.position, v, canvas), false};
        ov.in_view = ov.projected.has_value() && on_canvas(*ov.projected, canvas);
        out.push_back(ov);
    }
    return out;
}

LabelBox make_box(const SceneObject& obj, ScreenPoint center, const LabelStyle& style, Arrow arrow = Arrow::none)
{
    return {obj.id, center, style.box_width_m, style.box_height_m, obj.name, obj.rating, obj.highlight, arrow};
}

// Point where the ray from the box center toward target leaves the box.
ScreenPoint exit_point(const LabelBox& box, const ScreenPoint& target)
{
    const double dx = target.x_m - box.center.x_m;
    const double dy = target.y_m - box.center.y_m;
    double t = 1.0;
    if (dx != 0.0) {
        t = std::min(t, (box.width_m / 2.0) / std::abs(dx));
    }
    if (dy != 0.0) {
        t = std::min(t, (box.height_m / 2.0) / std::abs(dy));
    }
    return {box.center.x_m + t * dx, box.center.y_m + t * dy};
}

ScreenPoint bottom_center(const LabelBox& box)
{
    return {box.center.x_m, box.bottom()};
}

// A box whose x is fixed and whose y is free to move.
struct ColumnItem {
    double x;
    double desired_y;
    double y = 0.0;
};

// Groups boxes that overlap horizontally and resolves each group vertically,
// so boxes in different groups can never overlap.
void stack_vertically(std::vector<ColumnItem>& items, const CanvasSpec& canvas, const LabelStyle& style)
{
    const std::size_t n = items.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(items[i].x - items[j].x) < style.box_width_m) {
                parent[find(i)] = find(j);
            }
        }
    }

    const double hh = canvas.half_height_m();
    const double h = style.box_height_m;
    const double g = style.gap_m;
    for (std::size_t root = 0; root < n; ++root) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (find(i) == root) {
                members.push_back(i);
            }
        }
        if (members.empty()) {
            continue;
        }
        std::vector<Interval1D> intervals;
        for (std::size_t m : members) {
            intervals.push_back({items[m].desired_y, h + g});
        }
        std::vector<double> ys;
        try {
            // padding the span by half a gap lets boxes touch the canvas edge
            ys = resolve_overlaps_1d(intervals, -hh - g / 2.0, hh + g / 2.0, false);
        } catch (const CapacityExceeded&) {
            std::vector<std::size_t> order(members.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return intervals[a].desired_center < intervals[b].desired_center;
            });
            const auto spread = distribute_evenly(members.size(), h, -hh, hh);
            ys.resize(members.size());
            for (std::size_t k = 0; k < order.size(); ++k) {
                ys[order[k]] = spread[k];
            }
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
            items[members[k]].y = ys[k];
        }
    }
}

double clamp_box_x(double x, const CanvasSpec& canvas, const LabelStyle& style)
{
    const double limit = canvas.half_width_m() - style.box_width_m / 2.0;
    return std::clamp(x, -limit, limit);
}

ScreenPoint situated_anchor(const ObjectView& ov, const LabelStyle& style)
{
    return {ov.projected->x_m, ov.projected->y_m + style.situated_offset_m};
}

// Lays out in-view objects as situated labels, plus any extra fixed-x items
// that share the vertical resolution. Appends to layout in object order.
void append_situated(LabelLayout& layout, const std::vector<ObjectView>& views, const CanvasSpec& canvas,
                     const LabelStyle& style)
{
    std::vector<ColumnItem> items;
    std::vector<const ObjectView*> members;
    for (const auto& ov : views) {
        if (!ov.in_view) {
            continue;
        }
        const ScreenPoint anchor = situated_anchor(ov, style);
        items.push_back({clamp_box_x(anchor.x_m, canvas, style), anchor.y_m});
        members.push_back(&ov);
    }
    stack_vertically(items, canvas, style);
    for (std::size_t i = 0; i < members.size(); ++i) {
        const ObjectView& ov = *members[i];
        LabelBox box = make_box(*ov.object, {items[i].x, items[i].y}, style);
        layout.leaders.push_back({ov.object->id, bottom_center(box), *ov.projected, true});
        layout.anchors.push_back(situated_anchor(ov, style));
        layout.boxes.push_back(std::move(box));
    }
}

}  // namespace

LabelLayout place_situated(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                           const LabelStyle& style)
{
    LabelLayout layout;
    layout.strategy = Strategy::situated;
    append_situated(layout, observe(scene, view, canvas), canvas, style);
    return layout;
}

LabelLayout place_boundary(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                           const LabelStyle& style)
{
    LabelLayout layout;
    layout.strategy = Strategy::boundary;
    const auto views = observe(scene, view, canvas);

    std::vector<const ObjectView*> visible;
    for (const auto& ov : views) {
        if (ov.in_view) {
            visible.push_back(&ov);
        }
    }
    const std::size_t n = visible.size();
    const double limit = canvas.half_width_m() - style.box_width_m / 2.0;
    const double pitch = style.box_width_m + style.gap_m;
    const double y = -canvas.half_height_m() + style.box_height_m / 2.0;

    // Center-most objects claim their slot first; later ones move outward.
    std::vector<std::size_t> priority(n);
    std::iota(priority.begin(), priority.end(), std::size_t{0});
    std::stable_sort(priority.begin(), priority.end(), [&](std::size_t a, std::size_t b) {
        const double da = std::abs(visible[a]->projected->x_m);
        const double db = std::abs(visible[b]->projected->x_m);
        if (da != db) {
            return da < db;
        }
        return visible[a]->object->id < visible[b]->object->id;
    });

    std::vector<double> xs(n, 0.0);
    std::vector<double> placed;
    bool greedy_ok = true;
    for (std::size_t idx : priority) {
        const double desired = std::clamp(visible[idx]->projected->x_m, -limit, limit);
        auto is_free = [&](double c) {
            return std::all_of(placed.begin(), placed.end(),
                               [&](double p) { return std::abs(c - p) >= pitch - 1e-12; });
        };
        std::vector<double> candidates{desired, -limit, limit};
        for (double p : placed) {
            candidates.push_back(p - pitch);
            candidates.push_back(p + pitch);
        }
        // x == 0 has no outward side: both directions compete, right wins ties
        const int outward = desired > 0.0 ? 1 : (desired < 0.0 ? -1 : 0);
        auto best_in = [&](int dir) -> std::optional<double> {
            std::optional<double> best;
            for (double c : candidates) {
                if (c < -limit - 1e-12 || c > limit + 1e-12) {
                    continue;
                }
                if (dir != 0 && (c - desired) * dir < 0.0) {
                    continue;
                }
                if (!is_free(c)) {
                    continue;
                }
                const double dist = std::abs(c - desired);
                if (!best || dist < std::abs(*best - desired) ||
                    (dist == std::abs(*best - desired) && c > *best)) {
                    best = c;
                }
            }
            return best;
        };
        std::optional<double> slot = best_in(outward);
        if (!slot && outward != 0) {
            slot = best_in(-outward);
        }
        if (!slot) {
            greedy_ok = false;
            break;
        }
        xs[idx] = std::clamp(*slot, -limit, limit);
        placed.push_back(xs[idx]);
    }

    if (!greedy_ok) {
        // fragmented free space: fall back to order-preserving compaction
        std::vector<Interval1D> intervals;
        for (const auto* ov : visible) {
            intervals.push_back({std::clamp(ov->projected->x_m, -limit, limit), pitch});
        }
        const double hw = canvas.half_width_m();
        try {
            xs = resolve_overlaps_1d(intervals, -hw - style.gap_m / 2.0, hw + style.gap_m / 2.0, false);
        } catch (const CapacityExceeded&) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return intervals[a].desired_center < intervals[b].desired_center;
            });
            const auto spread = distribute_evenly(n, style.box_width_m, -hw, hw);
            for (std::size_t k = 0; k < n; ++k) {
                xs[order[k]] = spread[k];
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const ObjectView& ov = *visible[i];
        LabelBox box = make_box(*ov.object, {xs[i], y}, style);
        layout.leaders.push_back({ov.object->id, ScreenPoint{box.center.x_m, box.top()}, *ov.projected, true});
        layout.anchors.push_back({ov.projected->x_m, y});
        layout.boxes.push_back(std::move(box));
    }
    return layout;
}

LabelLayout place_height(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                         const LabelStyle& style)
{
    LabelLayout layout;
    layout.strategy = Strategy::height;
    const auto views = observe(scene, view, canvas);

    const double edge_x = canvas.half_width_m() - style.box_width_m / 2.0;
    const double y_limit = canvas.half_height_m() - style.box_height_m / 2.0;

    // In-view objects behave exactly like situated labels; out-of-view ones
    // join the same vertical resolution on their edge column.
    std::vector<ColumnItem> items;
    std::vector<ScreenPoint> anchors;
    for (const auto& ov : views) {
        if (ov.in_view) {
            const ScreenPoint anchor = situated_anchor(ov, style);
            items.push_back({clamp_box_x(anchor.x_m, canvas, style), anchor.y_m});
            anchors.push_back(anchor);
        } else {
            const double side = ov.direction.rel_azimuth_deg < 0.0 ? -1.0 : 1.0;
            const double y = std::clamp(canvas.distance_m * std::tan(deg_to_rad(ov.direction.elevation_deg)),
                                        -y_limit, y_limit);
            items.push_back({side * edge_x, y});
            anchors.push_back({side * edge_x, y});
        }
    }
    stack_vertically(items, canvas, style);

    for (std::size_t i = 0; i < views.size(); ++i) {
        const ObjectView& ov = views[i];
        LabelBox box = make_box(*ov.object, {items[i].x, items[i].y}, style);
        if (ov.in_view) {
            layout.leaders.push_back({ov.object->id, bottom_center(box), *ov.projected, true});
        } else {
            layout.leaders.push_back({ov.object->id, {}, {}, false});
        }
        layout.anchors.push_back(anchors[i]);
        layout.boxes.push_back(std::move(box));
    }
    return layout;
}

LabelLayout place_angle(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                        const LabelStyle& style)
{
    LabelLayout layout;
    layout.strategy = Strategy::angle;
    const auto views = observe(scene, view, canvas);
    const PerimeterTrack track = PerimeterTrack::for_canvas(canvas, style);
    const double perimeter = track.perimeter();

    // Arc spacing of w + h keeps boxes disjoint on edges and around corners.
    const double spacing = style.box_width_m + style.box_height_m + style.gap_m;
    std::vector<Interval1D> intervals;
    for (const auto& ov : views) {
        const double theta = normalize_deg_360(ov.direction.rel_azimuth_deg);
        intervals.push_back({theta / 360.0 * perimeter, spacing});
    }

    std::vector<double> arcs;
    try {
        arcs = resolve_overlaps_1d(intervals, 0.0, perimeter, true);
    } catch (const CapacityExceeded&) {
        // keep circular order, equal spacing, start at the first label's arc
        std::vector<std::size_t> order(intervals.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return intervals[a].desired_center < intervals[b].desired_center;
        });
        arcs.assign(intervals.size(), 0.0);
        const double step = perimeter / static_cast<double>(intervals.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            arcs[order[k]] = intervals[order[0]].desired_center + step * static_cast<double>(k);
        }
    }

    for (std::size_t i = 0; i < views.size(); ++i) {
        const ObjectView& ov = views[i];
        LabelBox box = make_box(*ov.object, track.point_at(arcs[i]), style);
        if (ov.in_view) {
            layout.leaders.push_back({ov.object->id, exit_point(box, *ov.projected), *ov.projected, true});
        } else {
            layout.leaders.push_back({ov.object->id, {}, {}, false});
        }
        layout.anchors.push_back(track.point_at(intervals[i].desired_center));
        layout.boxes.push_back(std::move(box));
    }
    return layout;
}

LabelLayout place_value(const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                        const LabelStyle& style)
{
    LabelLayout layout;
    layout.strategy = Strategy::value;
    const auto views = observe(scene, view, canvas);
    const std::size_t n = views.size();

    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        const SceneObject& oa = *views[a].object;
        const SceneObject& ob = *views[b].object;
        if (oa.rating != ob.rating) {
            return oa.rating > ob.rating;
        }
        if (oa.name != ob.name) {
            return oa.name < ob.name;
        }
        return oa.id < ob.id;
    });

    const double x = -canvas.half_width_m() + style.box_width_m / 2.0;
    const double top = canvas.half_height_m() - style.box_height_m / 2.0;
    double pitch = style.box_height_m + style.value_row_gap_m;
    if (n > 1) {
        pitch = std::min(pitch, (canvas.height_m() - style.box_height_m) / static_cast<double>(n - 1));
    }

    std::vector<double> ys(n);
    for (std::size_t row = 0; row < n; ++row) {
        ys[rank[row]] = top - pitch * static_cast<double>(row);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const ObjectView& ov = views[i];
        Arrow arrow = Arrow::none;
        if (!ov.in_view) {
            arrow = ov.direction.rel_azimuth_deg < 0.0 ? Arrow::left : Arrow::right;
        }
        LabelBox box = make_box(*ov.object, {x, ys[i]}, style, arrow);
        if (ov.in_view) {
            layout.leaders.push_back({ov.object->id, exit_point(box, *ov.projected), *ov.projected, true});
        } else {
            layout.leaders.push_back({ov.object->id, {}, {}, false});
        }
        layout.anchors.push_back(box.center);
        layout.boxes.push_back(std::move(box));
    }
    return layout;
}

LabelLayout place(Strategy strategy, const Scene& scene, const ViewState& view, const CanvasSpec& canvas,
                  const LabelStyle& style)
{
    switch (strategy) {
    case Strategy::situated: return place_situated(scene, view, canvas, style);
    case Strategy::boundary: return place_boundary(scene, view, canvas, style);
    case Strategy::height: return place_height(scene, view, canvas, style);
    case Strategy::angle: return place_angle(scene, view, canvas, style);
    case Strategy::value: return place_value(scene, view, canvas, style);
    }
    throw std::invalid_argument("unknown strategy");
}

// ---------------------------------------------------------------------------

namespace {

double orientation(const ScreenPoint& a, const ScreenPoint& b, const ScreenPoint& c)
{
    return (b.x_m - a.x_m) * (c.y_m - a.y_m) - (b.y_m - a.y_m) * (c.x_m - a.x_m);
}

double length(const ScreenPoint& a, const ScreenPoint& b)
{
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

}  // namespace

bool segments_cross(const Segment& s, const Segment& t)
{
    const double d1 = orientation(s.a, s.b, t.a);
    const double d2 = orientation(s.a, s.b, t.b);
    const double d3 = orientation(t.a, t.b, s.a);
    const double d4 = orientation(t.a, t.b, s.b);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

int count_line_crossings(const LabelLayout& layout)
{
    std::vector<Segment> segments;
    for (const auto& l : layout.leaders) {
        if (l.present) {
            segments.push_back({l.from, l.to});
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        for (std::size_t j = i + 1; j < segments.size(); ++j) {
            if (segments_cross(segments[i], segments[j])) {
                ++count;
            }
        }
    }
    return count;
}

double box_overlap_area(const LabelBox& a, const LabelBox& b)
{
    const double w = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double h = std::min(a.top(), b.top()) - std::max(a.bottom(), b.bottom());
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

double total_box_overlap(const LabelLayout& layout)
{
    double total = 0.0;
    for (std::size_t i = 0; i < layout.boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < layout.boxes.size(); ++j) {
            total += box_overlap_area(layout.boxes[i], layout.boxes[j]);
        }
    }
    return total;
}

ClutterMetrics layout_metrics(const LabelLayout& layout, const Scene& scene, const ViewState& view,
                              const CanvasSpec& canvas)
{
    ClutterMetrics m;
    int leader_count = 0;
    for (const auto& l : layout.leaders) {
        if (l.present) {
            m.mean_leader_length_m += length(l.from, l.to);
            ++leader_count;
        }
    }
    if (leader_count > 0) {
        m.mean_leader_length_m /= leader_count;
    }
    m.crossing_count = count_line_crossings(layout);
    m.total_box_overlap_m2 = total_box_overlap(layout);

    int gap_count = 0;
    for (const auto& box : layout.boxes) {
        const SceneObject& obj = scene.object(box.object_id);
        if (!is_in_view(obj.position, view, canvas)) {
            continue;
        }
        const auto projected = project(obj.position, view, canvas);
        m.mean_label_object_gap_m += length(box.center, *projected);
        ++gap_count;
    }
    if (gap_count > 0) {
        m.mean_label_object_gap_m /= gap_count;
    }

    if (layout.boxes.size() > 1) {
        for (std::size_t i = 0; i < layout.boxes.size(); ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < layout.boxes.size(); ++j) {
                if (i != j) {
                    nearest = std::min(nearest, length(layout.boxes[i].center, layout.boxes[j].center));
                }
            }
            m.mean_label_label_gap_m += nearest;
        }
        m.mean_label_label_gap_m /= static_cast<double>(layout.boxes.size());
    }
    return m;
}

nlohmann::json layout_to_json(const LabelLayout& layout)
{
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : layout.boxes) {
        boxes.push_back({
            {"object_id", b.object_id},
            {"x_m", b.center.x_m},
            {"y_m", b.center.y_m},
            {"w_m", b.width_m},
            {"h_m", b.height_m},
            {"text", b.text},
            {"value", b.value},
            {"highlight", to_string(b.highlight)},
            {"arrow", to_string(b.arrow)},
        });
    }
    nlohmann::json leaders = nlohmann::json::array();
    for (const auto& l : layout.leaders) {
        if (!l.present) {
            continue;
        }
        leaders.push_back({
            {"object_id", l.object_id},
            {"from", {l.from.x_m, l.from.y_m}},
            {"to", {l.to.x_m, l.to.y_m}},
        });
    }
    return {{"strategy", to_string(layout.strategy)}, {"boxes", std::move(boxes)}, {"leaders", std::move(leaders)}};
}

}  // namespace arlabel
