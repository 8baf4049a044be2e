#include "arlabel/service.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "arlabel/harness.hpp"
#include "arlabel/scene.hpp"

namespace arlabel {

namespace {

using nlohmann::json;

ServiceResponse ok(const json& body)
{
    return {200, body.dump(), "application/json"};
}

ServiceResponse error(int status, const std::string& message)
{
    return {status, json{{"error", message}}.dump(), "application/json"};
}

std::optional<double> parse_finite(const std::optional<std::string>& text)
{
    if (!text || text->empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const char* first = text->data();
    const char* last = first + text->size();
    if (*first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<json> parse_body(const std::string& body)
{
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return std::nullopt;
    }
    return j;
}

}  // namespace

StudyService::StudyService(CanvasSpec canvas) : canvas_(canvas), id_rng_(std::random_device{}()) {}

std::string StudyService::new_session_id()
{
    std::lock_guard lock(id_mutex_);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(id_rng_()),
                  static_cast<unsigned long long>(id_rng_()));
    return buf;
}

std::shared_ptr<StudyService::Entry> StudyService::find(const std::string& session_id) const
{
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t StudyService::session_count() const
{
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

ServiceResponse StudyService::create_session(const std::string& body)
{
    const auto req = parse_body(body);
    if (!req) {
        return error(400, "request body must be a JSON object");
    }
    Strategy condition;
    TaskKind task;
    int size = 0;
    std::uint64_t seed = 0;
    try {
        condition = parse_strategy(req->at("condition").get<std::string>());
        task = parse_task_kind(req->at("task").get<std::string>());
        size = req->at("size").get<int>();
        if (size != 10 && size != 20) {
            return error(400, "size must be 10 or 20");
        }
        if (req->contains("seed") && !req->at("seed").is_null()) {
            const auto& s = req->at("seed");
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
                return error(400, "seed must be a non-negative integer");
            }
            seed = s.get<std::uint64_t>();
        } else {
            std::lock_guard lock(id_mutex_);
            seed = id_rng_();
        }
    } catch (const std::exception& e) {
        return error(400, e.what());
    }

    auto entry = std::make_shared<Entry>();
    Session& session = entry->session;
    try {
        SceneConfig config;
        config.size = size;
        session.instance = build_task(task, generate_scene(config, seed), seed);
    } catch (const std::exception& e) {
        return error(500, std::string("generation failed: ") + e.what());
    }
    session.condition = condition;
    session.seed = seed;
    session.created_at = std::chrono::system_clock::now();

    json response = {
        {"condition", to_string(condition)},
        {"seed", seed},
        {"scene", scene_to_json(session.instance.scene)},
        {"task", task_to_json(session.instance, session.reveal_state)},
    };
    {
        std::unique_lock lock(sessions_mutex_);
        std::string id;
        do {
            id = new_session_id();
        } while (sessions_.count(id));
        session.session_id = id;
        sessions_.emplace(id, entry);
        response["session_id"] = id;
    }
    return ok(response);
}

ServiceResponse StudyService::get_layout(const std::string& session_id, const std::optional<std::string>& yaw,
                                         const std::optional<std::string>& pitch)
{
    auto entry = find(session_id);
    if (!entry) {
        return error(404, "unknown session");
    }
    const auto yaw_deg = parse_finite(yaw);
    const auto pitch_deg = parse_finite(pitch);
    if (!yaw_deg || !pitch_deg) {
        return error(400, "yaw and pitch must be finite numbers");
    }
    if (*pitch_deg < -90.0 || *pitch_deg > 90.0) {
        return error(400, "pitch must lie in [-90, 90]");
    }
    ViewState view;
    view.yaw_deg = *yaw_deg;
    view.pitch_deg = *pitch_deg;

    std::set<int> reveal_state;
    Strategy condition;
    {
        std::lock_guard lock(entry->mutex);
        entry->session.last_view = view;
        reveal_state = entry->session.reveal_state;
        condition = entry->session.condition;
    }
    // the instance is immutable once stored, so placement runs outside the lock
    const Scene scene = apply_reveal(entry->session.instance, reveal_state);
    return ok(layout_to_json(place(condition, scene, view, canvas_)));
}

ServiceResponse StudyService::reveal(const std::string& session_id, const std::string& body)
{
    auto entry = find(session_id);
    if (!entry) {
        return error(404, "unknown session");
    }
    const auto req = parse_body(body);
    if (!req || !req->contains("object_id") || !req->at("object_id").is_number_integer()) {
        return error(400, "body must contain an integer object_id");
    }
    const int object_id = req->at("object_id").get<int>();

    std::lock_guard lock(entry->mutex);
    Session& s = entry->session;
    if (!s.trial_log.empty()) {
        return error(409, "session already answered");
    }
    const auto& clusters = s.instance.clusters;
    if (!clusters || (object_id != clusters->red_seed() && object_id != clusters->blue_seed())) {
        return error(409, "object is not a cluster seed");
    }
    const SceneObject& object = s.instance.scene.object(object_id);
    if (!s.last_view || !is_in_view(object.position, *s.last_view, canvas_)) {
        return error(409, "object is not in view");
    }
    s.reveal_state.insert(object_id);
    return ok({{"reveal_state", std::vector<int>(s.reveal_state.begin(), s.reveal_state.end())}});
}

ServiceResponse StudyService::submit_answer(const std::string& session_id, const std::string& body)
{
    auto entry = find(session_id);
    if (!entry) {
        return error(404, "unknown session");
    }
    const auto req = parse_body(body);
    if (!req) {
        return error(400, "request body must be a JSON object");
    }

    std::lock_guard lock(entry->mutex);
    Session& s = entry->session;
    if (!s.trial_log.empty()) {
        return error(409, "answer already submitted");
    }
    Answer answer;
    double elapsed_s = 0.0;
    try {
        answer = parse_answer(s.instance.kind, req->at("answer").get<std::string>());
        elapsed_s = req->at("elapsed_s").get<double>();
    } catch (const std::exception& e) {
        return error(400, e.what());
    }
    if (!std::isfinite(elapsed_s) || elapsed_s < 0.0) {
        return error(400, "elapsed_s must be a non-negative number");
    }

    TrialRecord record;
    record.condition = s.condition;
    record.task = s.instance.kind;
    record.size = static_cast<int>(s.instance.scene.objects.size());
    record.trial_index = 0;
    record.seed = s.seed;
    record.proxy_time_s = elapsed_s;
    record.answer = answer;
    record.correct = answer == oracle_answer(s.instance);
    s.trial_log.push_back(record);
    return ok({{"correct", record.correct}});
}

ServiceResponse StudyService::export_csv(const std::string& session_id)
{
    auto entry = find(session_id);
    if (!entry) {
        return error(404, "unknown session");
    }
    std::lock_guard lock(entry->mutex);
    return {200, to_csv(entry->session.trial_log), "text/csv"};
}

ServiceResponse StudyService::healthz() const
{
    return ok({{"status", "ok"}, {"sessions", session_count()}});
}

void StudyService::bind(httplib::Server& server)
{
    auto send = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    auto query = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
        if (!req.has_param(key)) {
            return std::nullopt;
        }
        return req.get_param_value(key);
    };

    server.Post("/session", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, create_session(req.body));
    });
    server.Get(R"(/session/([0-9a-f]+)/layout)", [this, send, query](const httplib::Request& req,
                                                                    httplib::Response& res) {
        send(res, get_layout(req.matches[1], query(req, "yaw"), query(req, "pitch")));
    });
    server.Post(R"(/session/([0-9a-f]+)/reveal)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, reveal(req.matches[1], req.body));
    });
    server.Post(R"(/session/([0-9a-f]+)/answer)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, submit_answer(req.matches[1], req.body));
    });
    server.Get(R"(/session/([0-9a-f]+)/export\.csv)", [this, send](const httplib::Request& req,
                                                                  httplib::Response& res) {
        send(res, export_csv(req.matches[1]));
    });
    server.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) { send(res, healthz()); });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            res.set_content(json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
        }
    });
}

bool serve(StudyService& service, const std::string& host, int port)
{
    httplib::Server server;
    service.bind(server);
    return server.listen(host, port);
}

}  // namespace arlabel
