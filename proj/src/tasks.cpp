#include "arlabel/tasks.hpp"

#include <algorithm>
#include <numeric>

#include "arlabel/random.hpp"

namespace arlabel {

std::string_view to_string(TaskKind k)
{
    switch (k) {
    case TaskKind::identify: return "identify";
    case TaskKind::compare: return "compare";
    case TaskKind::summarize: return "summarize";
    }
    return "identify";
}

TaskKind parse_task_kind(std::string_view s)
{
    for (TaskKind k : kAllTasks) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown task: " + std::string(s));
}

std::string_view to_string(ClusterChoice c)
{
    switch (c) {
    case ClusterChoice::red: return "red";
    case ClusterChoice::blue: return "blue";
    case ClusterChoice::equal: return "equal";
    }
    return "equal";
}

std::string answer_to_string(const Answer& a)
{
    return std::visit([](auto v) { return std::string(to_string(v)); }, a);
}

Answer parse_answer(TaskKind kind, std::string_view s)
{
    if (kind == TaskKind::summarize) {
        if (s == "red") return ClusterChoice::red;
        if (s == "blue") return ClusterChoice::blue;
        if (s == "equal") return ClusterChoice::equal;
        throw std::invalid_argument("summarize answers are red, blue or equal");
    }
    if (s == "red") return ObjectColor::red;
    if (s == "yellow") return ObjectColor::yellow;
    if (s == "blue") return ObjectColor::blue;
    throw std::invalid_argument("color answers are red, yellow or blue");
}

bool answer_matches_kind(const Answer& a, TaskKind kind)
{
    if (kind == TaskKind::summarize) {
        return std::holds_alternative<ClusterChoice>(a);
    }
    return std::holds_alternative<ObjectColor>(a) && std::get<ObjectColor>(a) != ObjectColor::grey;
}

double circular_separation_deg(double a, double b)
{
    const double d = std::abs(normalize_deg_180(a - b));
    return d;
}

namespace {

constexpr std::array<ObjectColor, 3> kAnswerColors = {ObjectColor::red, ObjectColor::yellow, ObjectColor::blue};

ObjectColor random_color(Rng& rng)
{
    return kAnswerColors[rng.below(kAnswerColors.size())];
}

int zone(const SceneObject& o)
{
    return zone_of(o.position.azimuth_deg);
}

void clear_highlights(Scene& scene)
{
    for (auto& o : scene.objects) {
        o.highlight = LabelHighlight::none;
    }
}

// Ids of the k objects nearest to `seed` in 3D, ties by id.
std::vector<int> nearest_neighbors(const Scene& scene, int seed, int k)
{
    const SceneObject& center = scene.object(seed);
    std::vector<std::pair<double, int>> by_distance;
    for (const auto& o : scene.objects) {
        if (o.id != seed) {
            by_distance.emplace_back(distance_3d(center.position, o.position), o.id);
        }
    }
    std::sort(by_distance.begin(), by_distance.end());
    std::vector<int> ids;
    for (int i = 0; i < k && i < static_cast<int>(by_distance.size()); ++i) {
        ids.push_back(by_distance[static_cast<std::size_t>(i)].second);
    }
    return ids;
}

// Random ratings in [1, 5] whose sum is count * mean.
std::vector<int> ratings_with_mean(Rng& rng, int count, int mean)
{
    std::vector<int> r(static_cast<std::size_t>(count), mean);
    for (int step = 0; step < 4 * count; ++step) {
        const auto i = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(count)));
        const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(count)));
        if (i != j && r[i] < 5 && r[j] > 1) {
            ++r[i];
            --r[j];
        }
    }
    return r;
}

ClusterChoice compare_means(int red_sum, int red_count, int blue_sum, int blue_count)
{
    const long lhs = static_cast<long>(red_sum) * blue_count;
    const long rhs = static_cast<long>(blue_sum) * red_count;
    if (lhs > rhs) return ClusterChoice::red;
    if (lhs < rhs) return ClusterChoice::blue;
    return ClusterChoice::equal;
}

void reassign_zones(Scene& scene)
{
    scene.zone_assignment.clear();
    for (const auto& o : scene.objects) {
        scene.zone_assignment[o.id] = zone(o);
    }
}

}  // namespace

TaskInstance build_identify(const Scene& scene, std::uint64_t seed)
{
    Rng rng(seed, "identify");
    TaskInstance inst;
    inst.kind = TaskKind::identify;
    inst.scene = scene;
    clear_highlights(inst.scene);

    inst.mirrored = rng.coin();

    std::vector<int> eligible;
    for (const auto& o : scene.objects) {
        const int z = zone(o);
        if (z == 2 || z == 3) {
            eligible.push_back(o.id);
        }
    }
    if (eligible.empty()) {
        throw NoEligibleTarget("no objects in zones 2 or 3");
    }
    const int target = eligible[rng.below(eligible.size())];

    if (inst.mirrored) {
        for (auto& o : inst.scene.objects) {
            o.position.azimuth_deg = normalize_deg_360(360.0 - o.position.azimuth_deg);
        }
        reassign_zones(inst.scene);
    }

    for (auto& o : inst.scene.objects) {
        o.color = random_color(rng);
    }
    SceneObject& t = inst.scene.object(target);
    t.highlight = LabelHighlight::green;
    inst.target_ids = {target};
    inst.correct_answer = t.color;
    return inst;
}

TaskInstance build_compare(const Scene& scene, std::uint64_t seed)
{
    Rng rng(seed, "compare");
    const auto& objs = scene.objects;
    const std::size_t n = objs.size();

    std::vector<std::array<std::size_t, 3>> feasible;
    auto apart = [&](std::size_t a, std::size_t b) {
        return zone(objs[a]) != zone(objs[b]) &&
               circular_separation_deg(objs[a].position.azimuth_deg, objs[b].position.azimuth_deg) >=
                   kCompareMinSeparationDeg;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!apart(i, j)) {
                continue;
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                if (apart(i, k) && apart(j, k)) {
                    feasible.push_back({i, j, k});
                }
            }
        }
    }
    if (feasible.empty()) {
        throw NoFeasibleTriple("no three objects in distinct zones at least 40 degrees apart");
    }
    const auto triple = feasible[rng.below(feasible.size())];

    std::array<int, 4> ratings = {1, 2, 3, 4};
    rng.shuffle(std::span<int>(ratings));
    std::array<ObjectColor, 3> colors = kAnswerColors;
    rng.shuffle(std::span<ObjectColor>(colors));

    TaskInstance inst;
    inst.kind = TaskKind::compare;
    inst.scene = scene;
    clear_highlights(inst.scene);
    for (auto& o : inst.scene.objects) {
        o.color = random_color(rng);
    }

    int best_rating = 0;
    for (std::size_t t = 0; t < 3; ++t) {
        SceneObject& o = inst.scene.objects[triple[t]];
        o.rating = ratings[t];
        o.color = colors[t];
        o.highlight = LabelHighlight::green;
        inst.target_ids.push_back(o.id);
        if (o.rating > best_rating) {
            best_rating = o.rating;
            inst.correct_answer = o.color;
        }
    }
    return inst;
}

TaskInstance build_summarize(const Scene& scene, std::uint64_t seed)
{
    if (scene.objects.size() < 10) {
        throw std::invalid_argument("summarize needs at least 10 objects");
    }
    Rng rng(seed, "summarize");

    std::vector<Clusters> feasible;
    for (const auto& r : scene.objects) {
        for (const auto& b : scene.objects) {
            if (r.id == b.id || zone(r) == zone(b)) {
                continue;
            }
            Clusters c;
            c.red = {r.id};
            c.blue = {b.id};
            const auto rn = nearest_neighbors(scene, r.id, kRedClusterSize - 1);
            const auto bn = nearest_neighbors(scene, b.id, kBlueClusterSize - 1);
            c.red.insert(c.red.end(), rn.begin(), rn.end());
            c.blue.insert(c.blue.end(), bn.begin(), bn.end());
            const bool disjoint = std::none_of(c.red.begin(), c.red.end(), [&](int id) {
                return std::find(c.blue.begin(), c.blue.end(), id) != c.blue.end();
            });
            if (disjoint) {
                feasible.push_back(std::move(c));
            }
        }
    }
    if (feasible.empty()) {
        throw NoDisjointClusters("no seed pair in distinct zones yields disjoint clusters");
    }
    const Clusters clusters = feasible[rng.below(feasible.size())];

    const int red_mean = rng.between(1, 5);
    const int blue_mean = rng.between(1, 5);
    const auto red_ratings = ratings_with_mean(rng, kRedClusterSize, red_mean);
    const auto blue_ratings = ratings_with_mean(rng, kBlueClusterSize, blue_mean);

    TaskInstance inst;
    inst.kind = TaskKind::summarize;
    inst.scene = scene;
    for (auto& o : inst.scene.objects) {
        o.color = ObjectColor::grey;
        o.highlight = LabelHighlight::none;
    }
    for (std::size_t i = 0; i < clusters.red.size(); ++i) {
        inst.scene.object(clusters.red[i]).rating = red_ratings[i];
    }
    for (std::size_t i = 0; i < clusters.blue.size(); ++i) {
        inst.scene.object(clusters.blue[i]).rating = blue_ratings[i];
    }
    inst.scene.object(clusters.red_seed()).highlight = LabelHighlight::red;
    inst.scene.object(clusters.blue_seed()).highlight = LabelHighlight::blue;

    inst.target_ids = {clusters.red_seed(), clusters.blue_seed()};
    inst.clusters = clusters;
    inst.correct_answer = compare_means(red_mean * kRedClusterSize, kRedClusterSize, blue_mean * kBlueClusterSize,
                                        kBlueClusterSize);
    return inst;
}

TaskInstance build_task(TaskKind kind, const Scene& scene, std::uint64_t seed)
{
    switch (kind) {
    case TaskKind::identify: return build_identify(scene, seed);
    case TaskKind::compare: return build_compare(scene, seed);
    case TaskKind::summarize: return build_summarize(scene, seed);
    }
    throw std::invalid_argument("unknown task kind");
}

Scene apply_reveal(const TaskInstance& instance, const std::set<int>& revealed_seeds)
{
    Scene scene = instance.scene;
    if (instance.kind != TaskKind::summarize || !instance.clusters) {
        return scene;
    }
    const Clusters& c = *instance.clusters;
    auto paint = [&](const std::vector<int>& members, ObjectColor color, LabelHighlight highlight) {
        for (int id : members) {
            SceneObject& o = scene.object(id);
            o.color = color;
            o.highlight = highlight;
        }
    };
    if (revealed_seeds.contains(c.red_seed())) {
        paint(c.red, ObjectColor::red, LabelHighlight::red);
    }
    if (revealed_seeds.contains(c.blue_seed())) {
        paint(c.blue, ObjectColor::blue, LabelHighlight::blue);
    }
    return scene;
}

Scene revealed_scene(const TaskInstance& instance)
{
    if (!instance.clusters) {
        return instance.scene;
    }
    return apply_reveal(instance, {instance.clusters->red_seed(), instance.clusters->blue_seed()});
}

Answer oracle_answer(const TaskInstance& instance)
{
    switch (instance.kind) {
    case TaskKind::identify:
    case TaskKind::compare: {
        const SceneObject* best = nullptr;
        for (const auto& o : instance.scene.objects) {
            if (o.highlight == LabelHighlight::green && (best == nullptr || o.rating > best->rating)) {
                best = &o;
            }
        }
        if (best == nullptr) {
            throw std::logic_error("instance has no highlighted target");
        }
        return best->color;
    }
    case TaskKind::summarize: {
        const Scene scene = revealed_scene(instance);
        int red_sum = 0, red_count = 0, blue_sum = 0, blue_count = 0;
        for (const auto& o : scene.objects) {
            if (o.color == ObjectColor::red) {
                red_sum += o.rating;
                ++red_count;
            } else if (o.color == ObjectColor::blue) {
                blue_sum += o.rating;
                ++blue_count;
            }
        }
        if (red_count == 0 || blue_count == 0) {
            throw std::logic_error("summarize instance has an empty cluster");
        }
        return compare_means(red_sum, red_count, blue_sum, blue_count);
    }
    }
    throw std::logic_error("unknown task kind");
}

std::vector<TaskViolation> validate_task(const TaskInstance& inst)
{
    std::vector<TaskViolation> out;
    auto fail = [&out](std::string msg) { out.push_back({std::move(msg)}); };

    if (!answer_matches_kind(inst.correct_answer, inst.kind)) {
        fail("answer kind does not match task kind");
    }
    const Scene& scene = inst.scene;

    switch (inst.kind) {
    case TaskKind::identify: {
        if (inst.target_ids.size() != 1) {
            fail("identify needs exactly one target");
            break;
        }
        const SceneObject& t = scene.object(inst.target_ids[0]);
        const double source_az = inst.mirrored ? 360.0 - t.position.azimuth_deg : t.position.azimuth_deg;
        const int z = zone_of(source_az);
        if (z != 2 && z != 3) {
            fail("identify target outside zones 2 and 3");
        }
        for (const auto& o : scene.objects) {
            const bool is_target = o.id == t.id;
            if ((o.highlight == LabelHighlight::green) != is_target) {
                fail("identify highlight mismatch on object " + std::to_string(o.id));
            }
            if (o.color == ObjectColor::grey) {
                fail("identify object left uncolored");
            }
        }
        break;
    }
    case TaskKind::compare: {
        if (inst.target_ids.size() != 3) {
            fail("compare needs exactly three targets");
            break;
        }
        std::set<int> zones, ratings;
        std::set<ObjectColor> colors;
        for (std::size_t i = 0; i < 3; ++i) {
            const SceneObject& a = scene.object(inst.target_ids[i]);
            zones.insert(zone_of(a.position.azimuth_deg));
            ratings.insert(a.rating);
            colors.insert(a.color);
            if (a.rating < 1 || a.rating > 4) {
                fail("compare target rating " + std::to_string(a.rating) + " outside 1..4");
            }
            if (a.highlight != LabelHighlight::green) {
                fail("compare target not highlighted");
            }
            for (std::size_t j = i + 1; j < 3; ++j) {
                const SceneObject& b = scene.object(inst.target_ids[j]);
                if (circular_separation_deg(a.position.azimuth_deg, b.position.azimuth_deg) <
                    kCompareMinSeparationDeg) {
                    fail("compare targets closer than 40 degrees");
                }
            }
        }
        if (zones.size() != 3) fail("compare targets share a zone");
        if (ratings.size() != 3) fail("compare target ratings repeat");
        if (colors.size() != 3 || colors.contains(ObjectColor::grey)) fail("compare target colors not distinct");
        break;
    }
    case TaskKind::summarize: {
        if (!inst.clusters) {
            fail("summarize instance without clusters");
            break;
        }
        const Clusters& c = *inst.clusters;
        if (static_cast<int>(c.red.size()) != kRedClusterSize) fail("red cluster size");
        if (static_cast<int>(c.blue.size()) != kBlueClusterSize) fail("blue cluster size");
        std::set<int> all(c.red.begin(), c.red.end());
        all.insert(c.blue.begin(), c.blue.end());
        if (all.size() != c.red.size() + c.blue.size()) fail("clusters overlap");
        if (zone_of(scene.object(c.red_seed()).position.azimuth_deg) ==
            zone_of(scene.object(c.blue_seed()).position.azimuth_deg)) {
            fail("cluster seeds share a zone");
        }
        int red_sum = 0, blue_sum = 0;
        for (int id : c.red) red_sum += scene.object(id).rating;
        for (int id : c.blue) blue_sum += scene.object(id).rating;
        if (red_sum % kRedClusterSize != 0) fail("red cluster mean not an integer");
        if (blue_sum % kBlueClusterSize != 0) fail("blue cluster mean not an integer");
        for (const auto& o : scene.objects) {
            if (o.rating < 1 || o.rating > 5) fail("rating out of range");
            if (o.color != ObjectColor::grey) fail("summarize object colored before reveal");
        }
        if (scene.object(c.red_seed()).highlight != LabelHighlight::red ||
            scene.object(c.blue_seed()).highlight != LabelHighlight::blue) {
            fail("seed labels not highlighted");
        }
        break;
    }
    }
    return out;
}

nlohmann::json task_to_json(const TaskInstance& instance, const std::set<int>& reveal_state, bool include_answer)
{
    nlohmann::json j = {
        {"kind", to_string(instance.kind)},
        {"scene", scene_to_json(apply_reveal(instance, reveal_state))},
        {"target_ids", instance.target_ids},
        {"reveal_state", std::vector<int>(reveal_state.begin(), reveal_state.end())},
    };
    if (instance.clusters) {
        // members stay hidden until their seed is revealed
        const auto& c = *instance.clusters;
        auto members = [&](const std::vector<int>& cluster) {
            return reveal_state.count(cluster.front()) ? nlohmann::json(cluster) : nlohmann::json(nullptr);
        };
        j["clusters"] = {{"red_seed", c.red_seed()},
                         {"blue_seed", c.blue_seed()},
                         {"red", members(c.red)},
                         {"blue", members(c.blue)}};
    } else {
        j["clusters"] = nullptr;
    }
    if (include_answer) {
        j["correct_answer"] = answer_to_string(instance.correct_answer);
    }
    return j;
}

}  // namespace arlabel
