#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "arlabel/geometry.hpp"

namespace arlabel {

enum class ObjectColor { red, yellow, blue, grey };

/// Label highlight. `none` renders as the default grey label.
enum class LabelHighlight { none, green, red, blue };

std::string_view to_string(ObjectColor c);
std::string_view to_string(LabelHighlight h);
ObjectColor parse_object_color(std::string_view s);
LabelHighlight parse_label_highlight(std::string_view s);

struct SceneObject {
    int id = 0;
    std::string name;
    int rating = 1;
    ObjectColor color = ObjectColor::grey;
    LabelHighlight highlight = LabelHighlight::none;
    WorldPosition position;
    double size_m = 0.20;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    friend bool operator==(const Range&, const Range&) = default;
};

const std::vector<std::string>& default_name_pool();

struct SceneConfig {
    int size = 10;
    Range radius_range{2.5, 3.5};
    Range height_range{0.5, 2.0};
    double min_separation = 0.40;
    double cube_edge = 0.20;
    std::vector<std::string> name_pool = default_name_pool();

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;

    friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

inline constexpr int kZoneCount = 5;
inline constexpr int kMaxPlacementAttempts = 10'000;

struct Scene {
    std::vector<SceneObject> objects;
    std::uint64_t seed = 0;
    SceneConfig config;
    std::map<int, int> zone_assignment;  // object id -> zone in 1..5

    const SceneObject& object(int id) const;
    SceneObject& object(int id);

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Five 72 degree sectors, zone 1 centered on the initial facing direction,
/// numbered clockwise; each sector is half-open [start, start + 72).
int zone_of(double azimuth_deg);

/// Start azimuth of a zone's sector (may be negative for zone 1).
double zone_start_deg(int zone);

class GenerationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deterministic for a fixed (config, seed). Draw order from a single stream:
/// zone sequence, per-object azimuth/radius/height (with rejection), names,
/// ratings.
Scene generate_scene(const SceneConfig& config, std::uint64_t seed);

enum class ViolationKind {
    scene_size,
    rating_range,
    duplicate_name,
    duplicate_id,
    azimuth_range,
    radius_range,
    height_range,
    separation,
    zone_mismatch,
    zone_balance,
};

std::string_view to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::vector<int> object_ids;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_scene(const Scene& scene);

inline constexpr int kSceneFormatVersion = 1;

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const SceneConfig& config);
SceneConfig config_from_json(const nlohmann::json& j);

}  // namespace arlabel
