#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "arlabel/agent.hpp"
#include "arlabel/geometry.hpp"
#include "arlabel/placement.hpp"
#include "arlabel/tasks.hpp"

namespace httplib {
class Server;
}

namespace arlabel {

struct Session {
    std::string session_id;
    Strategy condition = Strategy::situated;
    TaskInstance instance;
    std::uint64_t seed = 0;
    std::chrono::system_clock::time_point created_at;
    std::set<int> reveal_state;
    std::optional<ViewState> last_view;
    std::vector<TrialRecord> trial_log;
};

struct ServiceResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Session store behind the HTTP routes. Every method is safe to call from
/// concurrent request threads; mutations of one session are serialized.
class StudyService {
public:
    explicit StudyService(CanvasSpec canvas = {});

    /// Body: {condition, task, size, seed?}.
    ServiceResponse create_session(const std::string& body);
    /// yaw/pitch are the raw query strings; missing or non-numeric gives 400.
    ServiceResponse get_layout(const std::string& session_id, const std::optional<std::string>& yaw,
                               const std::optional<std::string>& pitch);
    /// Body: {object_id}.
    ServiceResponse reveal(const std::string& session_id, const std::string& body);
    /// Body: {answer, elapsed_s}.
    ServiceResponse submit_answer(const std::string& session_id, const std::string& body);
    ServiceResponse export_csv(const std::string& session_id);
    ServiceResponse healthz() const;

    std::size_t session_count() const;

    /// Installs the HTTP routes on a server.
    void bind(httplib::Server& server);

private:
    struct Entry {
        std::mutex mutex;
        Session session;
    };

    std::shared_ptr<Entry> find(const std::string& session_id) const;
    std::string new_session_id();

    CanvasSpec canvas_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::mutex id_mutex_;
    std::mt19937_64 id_rng_;
};

/// Blocks serving on the given host and port until the server is stopped.
bool serve(StudyService& service, const std::string& host, int port);

}  // namespace arlabel
