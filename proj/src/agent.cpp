#include "arlabel/agent.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace arlabel {

double proxy_time(const CostBreakdown& c, const AgentConfig& agent)
{
    return c.travel_deg / agent.yaw_speed_dps + c.gaze_deg / agent.gaze_speed_dps +
           c.labels_read * agent.label_read_s + c.context_switches * agent.context_switch_s;
}

double min_rotation(double rel_azimuth_deg)
{
    const double a = std::abs(normalize_deg_180(rel_azimuth_deg));
    return std::min(a, 360.0 - a);
}

namespace {

// Safety bound on stepwise rotations; every script finishes within one turn.
constexpr int kMaxSteps = 720;

struct Sighting {
    ScreenPoint label;   // box center
    ScreenPoint object;  // projected object center
};

class TrialRunner {
public:
    TrialRunner(const TaskInstance& instance, Strategy condition, const AgentConfig& agent, const CanvasSpec& canvas)
        : instance_(instance), condition_(condition), agent_(agent), canvas_(canvas), scene_(instance.scene)
    {
        const double half_v = canvas.fov_v_deg / 2.0;
        pitches_ = {0.0, -half_v, half_v};
    }

    CostBreakdown run()
    {
        if (labels_out_of_view(condition_)) {
            run_guided();
        } else {
            run_scan();
        }
        return costs_;
    }

private:
    // Objects whose label is linked by a leader at the current yaw, i.e. in
    // view for one of the vertical glance directions.
    std::map<int, Sighting> observe() const
    {
        std::map<int, Sighting> seen;
        for (double pitch : pitches_) {
            const LabelLayout layout = place(condition_, scene_, ViewState{yaw_, pitch}, canvas_);
            for (std::size_t i = 0; i < layout.leaders.size(); ++i) {
                const LeaderLine& l = layout.leaders[i];
                if (l.present && !seen.contains(l.object_id)) {
                    const LabelBox* box = layout.find_box(l.object_id);
                    seen.emplace(l.object_id, Sighting{box->center, l.to});
                }
            }
        }
        return seen;
    }

    LabelLayout level_layout() const { return place(condition_, scene_, ViewState{yaw_, 0.0}, canvas_); }

    double azimuth_of(int id) const { return scene_.object(id).position.azimuth_deg; }

    void look_at(const ScreenPoint& p)
    {
        costs_.gaze_deg += canvas_angle_deg(gaze_, p, canvas_);
        gaze_ = p;
    }

    void read_label(const ScreenPoint& label)
    {
        look_at(label);
        ++costs_.labels_read;
    }

    void switch_to_world() { ++costs_.context_switches; }

    void step(int dir)
    {
        yaw_ = normalize_deg_360(yaw_ + dir);
        costs_.travel_deg += 1.0;
    }

    void turn_to(int id)
    {
        const double rel = normalize_deg_180(azimuth_of(id) - yaw_);
        costs_.travel_deg += min_rotation(rel);
        yaw_ = azimuth_of(id);
    }

    int direction_toward(int id) const { return normalize_deg_180(azimuth_of(id) - yaw_) < 0.0 ? -1 : 1; }

    // Reads labels in nearest-next gaze order.
    void read_labels(std::vector<ScreenPoint> labels)
    {
        while (!labels.empty()) {
            auto nearest = std::min_element(labels.begin(), labels.end(), [&](const auto& a, const auto& b) {
                return canvas_angle_deg(gaze_, a, canvas_) < canvas_angle_deg(gaze_, b, canvas_);
            });
            read_label(*nearest);
            labels.erase(nearest);
        }
    }

    // ---- in-view conditions: undirected scan ----------------------------

    void run_scan()
    {
        const int dir = agent_.scan_direction == ScanDirection::clockwise ? 1 : -1;
        costs_.num_travels = 1;
        switch (instance_.kind) {
        case TaskKind::identify: {
            const int target = instance_.target_ids.front();
            scan(dir, [&](const std::map<int, Sighting>& seen) {
                auto it = seen.find(target);
                if (it == seen.end()) {
                    return false;
                }
                read_label(it->second.label);
                look_at(it->second.object);
                switch_to_world();
                return true;
            });
            turn_to(target);
            break;
        }
        case TaskKind::compare: {
            std::set<int> pending(instance_.target_ids.begin(), instance_.target_ids.end());
            scan(dir, [&](const std::map<int, Sighting>& seen) {
                for (auto it = pending.begin(); it != pending.end();) {
                    auto s = seen.find(*it);
                    if (s == seen.end()) {
                        ++it;
                        continue;
                    }
                    read_label(s->second.label);
                    look_at(s->second.object);
                    switch_to_world();
                    it = pending.erase(it);
                }
                return pending.empty();
            });
            // return to the decisive target to confirm its color
            int best = instance_.target_ids.front();
            for (int id : instance_.target_ids) {
                if (scene_.object(id).rating > scene_.object(best).rating) {
                    best = id;
                }
            }
            ++costs_.num_travels;
            turn_to(best);
            switch_to_world();
            break;
        }
        case TaskKind::summarize: run_summarize_scan(dir); break;
        }
    }

    template <typename OnStep>
    void scan(int dir, OnStep on_step)
    {
        for (int i = 0; i < kMaxSteps; ++i) {
            if (on_step(observe())) {
                return;
            }
            step(dir);
        }
        throw std::logic_error("scan did not complete within two turns");
    }

    void run_summarize_scan(int dir)
    {
        const Clusters& c = *instance_.clusters;
        std::set<int> revealed;
        std::set<int> unread;  // non-seed members of revealed clusters
        std::set<int> read;

        auto process = [&](const std::map<int, Sighting>& seen) {
            for (int seed : {c.red_seed(), c.blue_seed()}) {
                auto s = seen.find(seed);
                if (s == seen.end() || revealed.contains(seed)) {
                    continue;
                }
                read_label(s->second.label);
                look_at(s->second.object);
                switch_to_world();  // click on the object
                revealed.insert(seed);
                const auto& members = seed == c.red_seed() ? c.red : c.blue;
                unread.insert(members.begin() + 1, members.end());
                scene_ = apply_reveal(instance_, revealed);
            }
            for (auto it = unread.begin(); it != unread.end();) {
                auto s = seen.find(*it);
                if (s == seen.end()) {
                    ++it;
                    continue;
                }
                read_label(s->second.label);
                read.insert(*it);
                it = unread.erase(it);
            }
            return revealed.size() == 2 && unread.empty();
        };

        bool done = false;
        for (int i = 0; i < 360 && !done; ++i) {
            done = process(observe());
            if (!done) {
                step(dir);
            }
        }
        if (done) {
            return;
        }
        if (revealed.size() != 2) {
            throw std::logic_error("full scan missed a cluster seed");
        }
        // members passed before their cluster was revealed: go back for them
        ++costs_.num_travels;
        while (!unread.empty()) {
            int nearest = *unread.begin();
            for (int id : unread) {
                if (min_rotation(azimuth_of(id) - yaw_) < min_rotation(azimuth_of(nearest) - yaw_)) {
                    nearest = id;
                }
            }
            const int toward = direction_toward(nearest);
            for (int i = 0; i < kMaxSteps && !process(observe()) && unread.contains(nearest); ++i) {
                step(toward);
            }
        }
    }

    // ---- out-of-view conditions: read labels, then directed travel -------

    void run_guided()
    {
        const LabelLayout layout = level_layout();
        switch (instance_.kind) {
        case TaskKind::identify: {
            const int target = instance_.target_ids.front();
            read_label(layout.find_box(target)->center);
            costs_.num_travels = 1;
            travel_to(target);
            switch_to_world();
            break;
        }
        case TaskKind::compare: {
            read_compare_labels(layout);
            int best = instance_.target_ids.front();
            for (int id : instance_.target_ids) {
                if (scene_.object(id).rating > scene_.object(best).rating) {
                    best = id;
                }
            }
            costs_.num_travels = 1;
            travel_to(best);
            switch_to_world();
            break;
        }
        case TaskKind::summarize: {
            const Clusters& c = *instance_.clusters;
            read_labels({layout.find_box(c.red_seed())->center, layout.find_box(c.blue_seed())->center});
            std::vector<int> seeds = {c.red_seed(), c.blue_seed()};
            if (min_rotation(azimuth_of(seeds[1]) - yaw_) < min_rotation(azimuth_of(seeds[0]) - yaw_)) {
                std::swap(seeds[0], seeds[1]);
            }
            std::set<int> revealed;
            for (int seed : seeds) {
                ++costs_.num_travels;
                travel_to(seed);
                switch_to_world();  // click on the object
                revealed.insert(seed);
                scene_ = apply_reveal(instance_, revealed);
            }
            // cluster averages come from the labels, no further travel
            const LabelLayout after = level_layout();
            std::vector<ScreenPoint> labels;
            for (const auto& members : {c.red, c.blue}) {
                for (auto it = members.begin() + 1; it != members.end(); ++it) {
                    labels.push_back(after.find_box(*it)->center);
                }
            }
            read_labels(std::move(labels));
            break;
        }
        }
    }

    void read_compare_labels(const LabelLayout& layout)
    {
        if (condition_ != Strategy::value) {
            std::vector<ScreenPoint> labels;
            for (int id : instance_.target_ids) {
                labels.push_back(layout.find_box(id)->center);
            }
            read_labels(std::move(labels));
            return;
        }
        // Ranked scan: highlighted labels stand out by color, so only those
        // are read, top-down along the sorted column.
        std::vector<const LabelBox*> targets;
        for (const auto& b : layout.boxes) {
            if (b.highlight == LabelHighlight::green) {
                targets.push_back(&b);
            }
        }
        std::sort(targets.begin(), targets.end(),
                  [](const LabelBox* a, const LabelBox* b) { return a->center.y_m > b->center.y_m; });
        for (const LabelBox* b : targets) {
            read_label(b->center);
        }
    }

    void travel_to(int target)
    {
        if (condition_ == Strategy::angle) {
            turn_to(target);
            return;
        }
        // Height and value only tell the side: creep toward it, checking each
        // object that comes into view, until the target shows up.
        std::map<int, Sighting> seen = observe();
        for (int i = 0; i < kMaxSteps && !seen.contains(target); ++i) {
            step(indicated_side(target));
            std::map<int, Sighting> now = observe();
            for (const auto& [id, s] : now) {
                if (id != target && !seen.contains(id)) {
                    switch_to_world();
                }
            }
            seen = std::move(now);
        }
        if (!seen.contains(target)) {
            throw std::logic_error("guided travel never brought the target into view");
        }
        turn_to(target);
    }

    int indicated_side(int target) const
    {
        const LabelLayout layout = level_layout();
        const LabelBox* box = layout.find_box(target);
        if (condition_ == Strategy::value) {
            if (box->arrow == Arrow::left) return -1;
            if (box->arrow == Arrow::right) return 1;
            return direction_toward(target);
        }
        return box->center.x_m < 0.0 ? -1 : 1;
    }

    const TaskInstance& instance_;
    Strategy condition_;
    AgentConfig agent_;
    CanvasSpec canvas_;
    Scene scene_;
    std::vector<double> pitches_;
    double yaw_ = 0.0;
    ScreenPoint gaze_{0.0, 0.0};
    CostBreakdown costs_;
};

}  // namespace

TrialRecord run_trial(const TaskInstance& instance, Strategy condition, const AgentConfig& agent,
                      const CanvasSpec& canvas)
{
    if (static_cast<int>(condition) < 0 || static_cast<int>(condition) >= static_cast<int>(kAllStrategies.size())) {
        throw UnknownCondition("unknown condition");
    }
    if (!agent.valid()) {
        throw std::invalid_argument("agent rates must be strictly positive");
    }
    TrialRunner runner(instance, condition, agent, canvas);

    TrialRecord rec;
    rec.condition = condition;
    rec.task = instance.kind;
    rec.size = static_cast<int>(instance.scene.objects.size());
    rec.seed = instance.scene.seed;
    rec.costs = runner.run();
    rec.proxy_time_s = proxy_time(*rec.costs, agent);
    rec.answer = oracle_answer(instance);
    rec.correct = rec.answer == instance.correct_answer;
    return rec;
}

}  // namespace arlabel
