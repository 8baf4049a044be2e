#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arlabel/scene.hpp"

namespace arlabel {

enum class TaskKind { identify, compare, summarize };

inline constexpr std::array<TaskKind, 3> kAllTasks = {TaskKind::identify, TaskKind::compare, TaskKind::summarize};

std::string_view to_string(TaskKind k);
TaskKind parse_task_kind(std::string_view s);

enum class ClusterChoice { red, blue, equal };

std::string_view to_string(ClusterChoice c);

/// Color answer for identify/compare, cluster answer for summarize.
using Answer = std::variant<ObjectColor, ClusterChoice>;

std::string answer_to_string(const Answer& a);
/// Parses an answer for the given task kind; throws std::invalid_argument.
Answer parse_answer(TaskKind kind, std::string_view s);
bool answer_matches_kind(const Answer& a, TaskKind kind);

inline constexpr int kRedClusterSize = 3;
inline constexpr int kBlueClusterSize = 4;
inline constexpr double kCompareMinSeparationDeg = 40.0;

struct Clusters {
    std::vector<int> red;   // red seed first
    std::vector<int> blue;  // blue seed first

    int red_seed() const { return red.front(); }
    int blue_seed() const { return blue.front(); }

    friend bool operator==(const Clusters&, const Clusters&) = default;
};

struct TaskInstance {
    TaskKind kind = TaskKind::identify;
    /// Scene as shown before any reveal: colors, ratings and label highlights
    /// already applied by the builder.
    Scene scene;
    std::vector<int> target_ids;
    std::optional<Clusters> clusters;
    Answer correct_answer = ObjectColor::red;
    /// Identify only: whether the source scene was mirrored (azimuth -> 360 - azimuth).
    bool mirrored = false;

    friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

class NoEligibleTarget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoFeasibleTriple : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoDisjointClusters : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TaskInstance build_identify(const Scene& scene, std::uint64_t seed);
TaskInstance build_compare(const Scene& scene, std::uint64_t seed);
TaskInstance build_summarize(const Scene& scene, std::uint64_t seed);
TaskInstance build_task(TaskKind kind, const Scene& scene, std::uint64_t seed);

/// Shortest angular distance between two azimuths, in [0, 180].
double circular_separation_deg(double a, double b);

/// The scene with the given summarize clusters revealed: members colored and
/// their labels highlighted in the cluster color. Other kinds are unchanged.
Scene apply_reveal(const TaskInstance& instance, const std::set<int>& revealed_seeds);

/// The fully revealed scene (both clusters for summarize).
Scene revealed_scene(const TaskInstance& instance);

/// Recomputes the answer from scene state alone: label highlights, ratings
/// and revealed colors. Does not read correct_answer.
Answer oracle_answer(const TaskInstance& instance);

struct TaskViolation {
    std::string message;
};

/// Structural checks on a built instance (target zones, separations, rating
/// ranges, cluster sizes, integer means).
std::vector<TaskViolation> validate_task(const TaskInstance& instance);

/// Client-facing serialization: the scene plus kind, targets, clusters and the
/// given reveal state. The correct answer is included only when asked for.
nlohmann::json task_to_json(const TaskInstance& instance, const std::set<int>& reveal_state,
                            bool include_answer = false);

}  // namespace arlabel
