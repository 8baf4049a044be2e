#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "arlabel/geometry.hpp"
#include "arlabel/placement.hpp"
#include "arlabel/tasks.hpp"

namespace arlabel {

enum class ScanDirection { clockwise, counterclockwise };

struct AgentConfig {
    double yaw_speed_dps = 60.0;
    double gaze_speed_dps = 300.0;
    double label_read_s = 0.5;
    double context_switch_s = 0.3;
    ScanDirection scan_direction = ScanDirection::clockwise;

    bool valid() const
    {
        return yaw_speed_dps > 0.0 && gaze_speed_dps > 0.0 && label_read_s > 0.0 && context_switch_s > 0.0;
    }
};

/// Simulated search effort. Absent for human trials.
struct CostBreakdown {
    double travel_deg = 0.0;
    double gaze_deg = 0.0;
    int labels_read = 0;
    int context_switches = 0;
    int num_travels = 0;

    friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

struct TrialRecord {
    Strategy condition = Strategy::situated;
    TaskKind task = TaskKind::identify;
    int size = 0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    std::optional<CostBreakdown> costs;
    /// Weighted cost for simulated trials; elapsed wall time for human ones.
    double proxy_time_s = 0.0;
    Answer answer = ObjectColor::red;
    bool correct = false;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

double proxy_time(const CostBreakdown& costs, const AgentConfig& agent);

/// Smallest rotation that faces a relative azimuth, in [0, 180].
double min_rotation(double rel_azimuth_deg);

class UnknownCondition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Runs the condition-specific search script for one task instance. The
/// agent always answers with the ground truth; only costs vary.
TrialRecord run_trial(const TaskInstance& instance, Strategy condition, const AgentConfig& agent,
                      const CanvasSpec& canvas = {});

}  // namespace arlabel
