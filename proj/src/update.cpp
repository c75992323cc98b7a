#include "trustmesh/update.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "trustmesh/errors.hpp"

namespace trustmesh {

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string ts_text(double ts) {
    std::string s = std::to_string(ts);
    return s;
}

bool pair_member(const StakeholderId& id, const StakeholderId& trustor,
                 const StakeholderId& trustee) {
    return id == trustor || id == trustee;
}

}  // namespace

std::int64_t window_of(double timestamp, const UpdateConfig& config) {
    return static_cast<std::int64_t>(std::floor(timestamp / config.window_seconds));
}

bool in_window(double timestamp, std::int64_t window_index, const UpdateConfig& config) {
    const double start = static_cast<double>(window_index) * config.window_seconds;
    return timestamp >= start && timestamp < start + config.window_seconds;
}

WindowLogSummary summarize_window(std::span<const SecurityLogRecord> records,
                                  const StakeholderId& trustor,
                                  const StakeholderId& trustee,
                                  std::int64_t window_index,
                                  const UpdateConfig& config) {
    WindowLogSummary summary;
    summary.trustor_id = trustor;
    summary.trustee_id = trustee;
    summary.window_index = window_index;
    for (const SecurityLogRecord& record : records) {
        if (!in_window(record.timestamp, window_index, config))
            throw ContractError("summarize_window: record at " + ts_text(record.timestamp) +
                                " is outside window " + std::to_string(window_index));
        switch (record.kind) {
            case LogKind::Conn: {
                const bool between =
                    (record.originator_id == trustor && record.responder_id == trustee) ||
                    (record.originator_id == trustee && record.responder_id == trustor);
                if (!between) break;
                const auto& payload = std::get<ConnPayload>(record.payload);
                ++summary.conn_total;
                if (config.conn_success_states.count(payload.conn_state))
                    ++summary.conn_success;
                break;
            }
            case LogKind::Notice: {
                if (!pair_member(record.originator_id, trustor, trustee) &&
                    !pair_member(record.responder_id, trustor, trustee))
                    break;
                summary.notice_weighted +=
                    std::get<NoticePayload>(record.payload).severity_weight;
                break;
            }
            case LogKind::Weird: {
                if (!pair_member(record.originator_id, trustor, trustee) &&
                    !pair_member(record.responder_id, trustor, trustee))
                    break;
                ++summary.weird_count;
                break;
            }
            case LogKind::Stats: {
                const auto& payload = std::get<StatsPayload>(record.payload);
                summary.packets_received += payload.packets_received;
                summary.packets_dropped += payload.packets_dropped;
                break;
            }
        }
    }
    return summary;
}

double rp_score(const WindowLogSummary& summary, const UpdateConfig& config) {
    const double conn =
        summary.conn_total == 0
            ? 0.5
            : static_cast<double>(summary.conn_success) /
                  static_cast<double>(summary.conn_total);
    const double notice = 1.0 - std::min(1.0, summary.notice_weighted / config.notice_cap);
    const double weird = 1.0 - std::min(1.0, static_cast<double>(summary.weird_count) /
                                                 static_cast<double>(config.weird_cap));
    const double stat =
        summary.packets_received == 0
            ? 0.5
            : 1.0 - static_cast<double>(summary.packets_dropped) /
                        static_cast<double>(summary.packets_received);
    return clamp_unit(config.weights.conn * conn + config.weights.notice * notice +
                      config.weights.weird * weird + config.weights.stat * stat);
}

double apply_update(double old_score, double rp) {
    // reward and punishment share this expression; the sign of rp - 0.5 decides
    const double next = old_score + (rp - 0.5) * (1.0 - old_score) / 10.0;
    return clamp_unit(next);
}

UpdateCycleResult run_update_cycle(const TrustState& state,
                                   std::span<const SecurityLogRecord> records,
                                   std::int64_t window_index,
                                   const UpdateConfig& config) {
    UpdateCycleResult result;
    result.summary = summarize_window(records, state.trustor_id, state.trustee_id,
                                      window_index, config);
    result.rp = rp_score(result.summary, config);
    result.old_score = state.score;
    result.state = state;
    result.state.score = apply_update(state.score, result.rp);
    result.state.provisional = false;
    result.state.updated_at =
        static_cast<double>(window_index + 1) * config.window_seconds;
    return result;
}

}  // namespace trustmesh
