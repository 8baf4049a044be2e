#include "arlabel/scene.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "arlabel/random.hpp"

namespace arlabel {

std::string_view to_string(ObjectColor c)
{
    switch (c) {
    case ObjectColor::red: return "red";
    case ObjectColor::yellow: return "yellow";
    case ObjectColor::blue: return "blue";
    case ObjectColor::grey: return "grey";
    }
    return "grey";
}

std::string_view to_string(LabelHighlight h)
{
    switch (h) {
    case LabelHighlight::none: return "none";
    case LabelHighlight::green: return "green";
    case LabelHighlight::red: return "red";
    case LabelHighlight::blue: return "blue";
    }
    return "none";
}

ObjectColor parse_object_color(std::string_view s)
{
    if (s == "red") return ObjectColor::red;
    if (s == "yellow") return ObjectColor::yellow;
    if (s == "blue") return ObjectColor::blue;
    if (s == "grey") return ObjectColor::grey;
    throw std::invalid_argument("unknown color: " + std::string(s));
}

LabelHighlight parse_label_highlight(std::string_view s)
{
    if (s == "none") return LabelHighlight::none;
    if (s == "green") return LabelHighlight::green;
    if (s == "red") return LabelHighlight::red;
    if (s == "blue") return LabelHighlight::blue;
    throw std::invalid_argument("unknown highlight: " + std::string(s));
}

const std::vector<std::string>& default_name_pool()
{
    static const std::vector<std::string> pool = {
        "Apple",  "Apricot", "Banana",  "Cherry", "Coconut", "Daisy",   "Dahlia", "Fig",
        "Grape",  "Guava",   "Iris",    "Jasmine", "Kiwi",   "Lemon",   "Lilac",  "Lily",
        "Lime",   "Lotus",   "Mango",   "Melon",  "Orchid",  "Papaya",  "Peach",  "Pear",
        "Peony",  "Plum",    "Poppy",   "Rose",   "Tulip",   "Violet",
    };
    return pool;
}

void SceneConfig::validate() const
{
    if (size != 10 && size != 20) {
        throw std::invalid_argument("scene size must be 10 or 20");
    }
    if (!(radius_range.lo > 0.0 && radius_range.lo < radius_range.hi)) {
        throw std::invalid_argument("radius range must be positive and non-degenerate");
    }
    if (!(height_range.lo < height_range.hi)) {
        throw std::invalid_argument("height range must be non-degenerate");
    }
    if (!(min_separation >= 0.0) || !(cube_edge > 0.0)) {
        throw std::invalid_argument("separation and cube edge must be non-negative");
    }
    if (name_pool.size() < static_cast<std::size_t>(size)) {
        throw std::invalid_argument("name pool smaller than scene size");
    }
    const std::set<std::string> unique(name_pool.begin(), name_pool.end());
    if (unique.size() != name_pool.size()) {
        throw std::invalid_argument("name pool entries must be unique");
    }
}

int zone_of(double azimuth_deg)
{
    const double shifted = normalize_deg_360(azimuth_deg + 36.0);
    const int zone = static_cast<int>(shifted / 72.0) + 1;
    return std::min(zone, kZoneCount);
}

double zone_start_deg(int zone)
{
    return -36.0 + 72.0 * (zone - 1);
}

const SceneObject& Scene::object(int id) const
{
    auto it = std::find_if(objects.begin(), objects.end(), [id](const SceneObject& o) { return o.id == id; });
    if (it == objects.end()) {
        throw std::out_of_range("no object with id " + std::to_string(id));
    }
    return *it;
}

SceneObject& Scene::object(int id)
{
    return const_cast<SceneObject&>(std::as_const(*this).object(id));
}

Scene generate_scene(const SceneConfig& config, std::uint64_t seed)
{
    config.validate();
    Rng rng(seed, "scene");

    std::vector<int> zones;
    for (int z = 1; z <= kZoneCount; ++z) {
        zones.insert(zones.end(), static_cast<std::size_t>(config.size / kZoneCount), z);
    }
    rng.shuffle(std::span<int>(zones));

    Scene scene;
    scene.seed = seed;
    scene.config = config;
    scene.objects.resize(static_cast<std::size_t>(config.size));

    int rejections = 0;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        SceneObject& obj = scene.objects[i];
        obj.id = static_cast<int>(i);
        obj.size_m = config.cube_edge;
        for (;;) {
            const double az = normalize_deg_360(zone_start_deg(zones[i]) + 72.0 * rng.uniform01());
            const double r = rng.uniform(config.radius_range.lo, config.radius_range.hi);
            const double h = rng.uniform(config.height_range.lo, config.height_range.hi);
            const WorldPosition candidate{az, r, h};
            const bool clear = std::all_of(scene.objects.begin(), scene.objects.begin() + static_cast<std::ptrdiff_t>(i),
                                           [&](const SceneObject& o) {
                                               return distance_3d(o.position, candidate) >= config.min_separation;
                                           });
            // zone_of can disagree with the drawn sector only at a wrapped boundary
            if (clear && zone_of(az) == zones[i]) {
                obj.position = candidate;
                break;
            }
            if (++rejections >= kMaxPlacementAttempts) {
                throw GenerationFailure("scene generation exceeded " + std::to_string(kMaxPlacementAttempts) +
                                        " rejections (seed " + std::to_string(seed) + ")");
            }
        }
        scene.zone_assignment[obj.id] = zones[i];
    }

    std::vector<std::size_t> name_index(config.name_pool.size());
    std::iota(name_index.begin(), name_index.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(name_index));
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        scene.objects[i].name = config.name_pool[name_index[i]];
    }

    for (auto& obj : scene.objects) {
        obj.rating = rng.between(1, 5);
    }
    return scene;
}

std::string_view to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::scene_size: return "scene_size";
    case ViolationKind::rating_range: return "rating_range";
    case ViolationKind::duplicate_name: return "duplicate_name";
    case ViolationKind::duplicate_id: return "duplicate_id";
    case ViolationKind::azimuth_range: return "azimuth_range";
    case ViolationKind::radius_range: return "radius_range";
    case ViolationKind::height_range: return "height_range";
    case ViolationKind::separation: return "separation";
    case ViolationKind::zone_mismatch: return "zone_mismatch";
    case ViolationKind::zone_balance: return "zone_balance";
    }
    return "unknown";
}

ValidationReport validate_scene(const Scene& scene)
{
    ValidationReport report;
    auto add = [&report](ViolationKind kind, std::vector<int> ids, std::string msg) {
        report.push_back({kind, std::move(ids), std::move(msg)});
    };

    const auto n = static_cast<int>(scene.objects.size());
    if (n != 10 && n != 20) {
        add(ViolationKind::scene_size, {}, "scene has " + std::to_string(n) + " objects");
    }

    const SceneConfig& cfg = scene.config;
    std::map<std::string, int> names;
    std::set<int> ids;
    for (const auto& o : scene.objects) {
        if (!ids.insert(o.id).second) {
            add(ViolationKind::duplicate_id, {o.id}, "duplicate id");
        }
        if (auto [it, fresh] = names.emplace(o.name, o.id); !fresh) {
            add(ViolationKind::duplicate_name, {it->second, o.id}, "duplicate name " + o.name);
        }
        if (o.rating < 1 || o.rating > 5) {
            add(ViolationKind::rating_range, {o.id}, "rating " + std::to_string(o.rating));
        }
        if (!(o.position.azimuth_deg >= 0.0 && o.position.azimuth_deg < 360.0)) {
            add(ViolationKind::azimuth_range, {o.id}, "azimuth not in [0,360)");
        }
        if (!cfg.radius_range.contains(o.position.radius_m)) {
            add(ViolationKind::radius_range, {o.id}, "radius out of range");
        }
        if (!cfg.height_range.contains(o.position.height_m)) {
            add(ViolationKind::height_range, {o.id}, "height out of range");
        }
        auto zone = scene.zone_assignment.find(o.id);
        if (zone == scene.zone_assignment.end() || zone->second != zone_of(o.position.azimuth_deg)) {
            add(ViolationKind::zone_mismatch, {o.id}, "zone assignment does not match azimuth");
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = scene.objects[static_cast<std::size_t>(i)];
            const auto& b = scene.objects[static_cast<std::size_t>(j)];
            const double d = distance_3d(a.position, b.position);
            if (d < cfg.min_separation) {
                std::ostringstream msg;
                msg << "center distance " << d << " m below " << cfg.min_separation << " m";
                add(ViolationKind::separation, {a.id, b.id}, msg.str());
            }
        }
    }

    if (n > 0 && n % kZoneCount == 0) {
        std::array<std::vector<int>, kZoneCount> members;
        for (const auto& o : scene.objects) {
            members[static_cast<std::size_t>(zone_of(o.position.azimuth_deg) - 1)].push_back(o.id);
        }
        for (int z = 0; z < kZoneCount; ++z) {
            const auto count = static_cast<int>(members[static_cast<std::size_t>(z)].size());
            if (count != n / kZoneCount) {
                add(ViolationKind::zone_balance, members[static_cast<std::size_t>(z)],
                    "zone " + std::to_string(z + 1) + " holds " + std::to_string(count) + " objects");
            }
        }
    }
    return report;
}

nlohmann::json config_to_json(const SceneConfig& config)
{
    return {
        {"size", config.size},
        {"radius_range", {config.radius_range.lo, config.radius_range.hi}},
        {"height_range", {config.height_range.lo, config.height_range.hi}},
        {"min_separation", config.min_separation},
        {"cube_edge", config.cube_edge},
        {"name_pool", config.name_pool},
    };
}

SceneConfig config_from_json(const nlohmann::json& j)
{
    SceneConfig c;
    c.size = j.at("size").get<int>();
    c.radius_range = {j.at("radius_range").at(0).get<double>(), j.at("radius_range").at(1).get<double>()};
    c.height_range = {j.at("height_range").at(0).get<double>(), j.at("height_range").at(1).get<double>()};
    c.min_separation = j.at("min_separation").get<double>();
    c.cube_edge = j.at("cube_edge").get<double>();
    c.name_pool = j.at("name_pool").get<std::vector<std::string>>();
    return c;
}

nlohmann::json scene_to_json(const Scene& scene)
{
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& o : scene.objects) {
        auto zone = scene.zone_assignment.find(o.id);
        objects.push_back({
            {"id", o.id},
            {"name", o.name},
            {"rating", o.rating},
            {"color", to_string(o.color)},
            {"azimuth_deg", o.position.azimuth_deg},
            {"radius_m", o.position.radius_m},
            {"height_m", o.position.height_m},
            {"zone", zone == scene.zone_assignment.end() ? zone_of(o.position.azimuth_deg) : zone->second},
        });
    }
    return {
        {"version", kSceneFormatVersion},
        {"seed", scene.seed},
        {"config", config_to_json(scene.config)},
        {"objects", std::move(objects)},
    };
}

Scene scene_from_json(const nlohmann::json& j)
{
    const int version = j.at("version").get<int>();
    if (version != kSceneFormatVersion) {
        throw std::invalid_argument("unsupported scene version " + std::to_string(version));
    }
    Scene scene;
    scene.seed = j.at("seed").get<std::uint64_t>();
    scene.config = config_from_json(j.at("config"));
    for (const auto& jo : j.at("objects")) {
        SceneObject o;
        o.id = jo.at("id").get<int>();
        o.name = jo.at("name").get<std::string>();
        o.rating = jo.at("rating").get<int>();
        o.color = parse_object_color(jo.at("color").get<std::string>());
        o.position = {jo.at("azimuth_deg").get<double>(), jo.at("radius_m").get<double>(),
                      jo.at("height_m").get<double>()};
        o.size_m = scene.config.cube_edge;
        scene.zone_assignment[o.id] = jo.at("zone").get<int>();
        scene.objects.push_back(std::move(o));
    }
    return scene;
}

}  // namespace arlabel
