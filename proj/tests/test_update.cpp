#include <vector>

#include "doctest.h"
#include "trustmesh/errors.hpp"
#include "trustmesh/update.hpp"

using namespace trustmesh;

namespace {

SecurityLogRecord conn(double ts, const StakeholderId& orig, const StakeholderId& resp,
                       const std::string& state) {
    SecurityLogRecord r;
    r.kind = LogKind::Conn;
    r.timestamp = ts;
    r.originator_id = orig;
    r.responder_id = resp;
    r.payload = ConnPayload{state, 0, 0, 0, 0};
    return r;
}

SecurityLogRecord notice(double ts, const StakeholderId& orig, double weight) {
    SecurityLogRecord r;
    r.kind = LogKind::Notice;
    r.timestamp = ts;
    r.originator_id = orig;
    r.payload = NoticePayload{"Scan::Port_Scan", weight};
    return r;
}

SecurityLogRecord weird(double ts, const StakeholderId& orig) {
    SecurityLogRecord r;
    r.kind = LogKind::Weird;
    r.timestamp = ts;
    r.originator_id = orig;
    r.payload = WeirdPayload{"bad_TCP_checksum"};
    return r;
}

SecurityLogRecord stats(double ts, std::int64_t received, std::int64_t dropped) {
    SecurityLogRecord r;
    r.kind = LogKind::Stats;
    r.timestamp = ts;
    r.payload = StatsPayload{received, dropped};
    return r;
}

WindowLogSummary summary_of(std::int64_t conn_total, std::int64_t conn_success,
                            double notice_weighted, std::int64_t weird_count,
                            std::int64_t received, std::int64_t dropped) {
    WindowLogSummary s;
    s.trustor_id = "op";
    s.trustee_id = "edge";
    s.conn_total = conn_total;
    s.conn_success = conn_success;
    s.notice_weighted = notice_weighted;
    s.weird_count = weird_count;
    s.packets_received = received;
    s.packets_dropped = dropped;
    return s;
}

}  // namespace

TEST_CASE("window arithmetic") {
    UpdateConfig cfg;
    cfg.window_seconds = 300.0;
    CHECK(window_of(0.0, cfg) == 0);
    CHECK(window_of(299.999, cfg) == 0);
    CHECK(window_of(300.0, cfg) == 1);
    CHECK(in_window(300.0, 1, cfg));
    CHECK_FALSE(in_window(300.0, 0, cfg));
    CHECK(in_window(599.9, 1, cfg));
    CHECK_FALSE(in_window(600.0, 1, cfg));
}

TEST_CASE("window summary counts and attribution") {
    UpdateConfig cfg;
    const WindowLogSummary empty = summarize_window({}, "op", "edge", 0, cfg);
    CHECK(empty.conn_total == 0);
    CHECK(empty.conn_success == 0);
    CHECK(empty.notice_weighted == doctest::Approx(0.0));
    CHECK(empty.weird_count == 0);
    CHECK(empty.packets_received == 0);
    CHECK(empty.packets_dropped == 0);

    std::vector<SecurityLogRecord> records = {
        conn(10, "op", "edge", "SF"),  conn(20, "edge", "op", "SF"),
        conn(30, "op", "edge", "SF"),  conn(40, "op", "edge", "REJ"),
        conn(50, "op", "other", "SF"),  // not between the pair: ignored
        notice(60, "edge", 1.0),
        notice(70, "op", 0.5),
        notice(80, "other", 1.0),  // neither endpoint in the pair: ignored
        weird(90, "edge"),
        stats(100, 1000, 10),
    };
    const WindowLogSummary s = summarize_window(records, "op", "edge", 0, cfg);
    CHECK(s.conn_total == 4);
    CHECK(s.conn_success == 3);
    CHECK(s.notice_weighted == doctest::Approx(1.5));
    CHECK(s.weird_count == 1);
    CHECK(s.packets_received == 1000);
    CHECK(s.packets_dropped == 10);

    std::vector<SecurityLogRecord> outside = {conn(400, "op", "edge", "SF")};
    CHECK_THROWS_AS(summarize_window(outside, "op", "edge", 0, cfg), ContractError);
}

TEST_CASE("reward and punishment score") {
    UpdateConfig cfg;
    CHECK(rp_score(summary_of(8, 8, 0.0, 0, 1000, 0), cfg) == doctest::Approx(1.0));
    CHECK(rp_score(summary_of(0, 0, 0.0, 0, 0, 0), cfg) ==
          doctest::Approx(0.75).epsilon(1e-9));
    CHECK(rp_score(summary_of(4, 2, 0.0, 0, 100, 0), cfg) ==
          doctest::Approx(0.8).epsilon(1e-9));
    // all four dimensions at their floor
    CHECK(rp_score(summary_of(8, 0, 5.0, 10, 100, 100), cfg) == doctest::Approx(0.0));
    // caps saturate rather than going negative
    CHECK(rp_score(summary_of(8, 0, 50.0, 99, 100, 100), cfg) == doctest::Approx(0.0));
}

TEST_CASE("score update hand cases") {
    CHECK(apply_update(0.8, 0.7) == doctest::Approx(0.804).epsilon(1e-9));
    CHECK(apply_update(0.6, 0.2) == doctest::Approx(0.588).epsilon(1e-9));
    CHECK(apply_update(0.6, 0.5) == doctest::Approx(0.6));
    CHECK(apply_update(0.0, 0.0) == doctest::Approx(0.0));  // clamped from -0.05
    for (double rp : {0.0, 0.3, 0.5, 0.8, 1.0})
        CHECK(apply_update(1.0, rp) == doctest::Approx(1.0));
}

TEST_CASE("update cycle chains windows") {
    UpdateConfig cfg;
    TrustState state;
    state.trustor_id = "op";
    state.trustee_id = "edge";
    state.score = 0.8;
    state.provisional = true;

    std::vector<SecurityLogRecord> pristine = {conn(10, "op", "edge", "SF"),
                                               stats(20, 1000, 0)};
    const UpdateCycleResult first = run_update_cycle(state, pristine, 0, cfg);
    CHECK(first.rp == doctest::Approx(1.0));
    CHECK(first.old_score == doctest::Approx(0.8));
    CHECK(first.state.score == doctest::Approx(0.81).epsilon(1e-9));
    CHECK_FALSE(first.state.provisional);
    CHECK(first.state.updated_at == doctest::Approx(300.0));

    std::vector<SecurityLogRecord> pristine2 = {conn(310, "op", "edge", "SF"),
                                                stats(320, 1000, 0)};
    const UpdateCycleResult second = run_update_cycle(first.state, pristine2, 1, cfg);
    CHECK(second.state.score == doctest::Approx(0.8195).epsilon(1e-9));

    // the worst window moves the score down by exactly (1 - old) / 20
    std::vector<SecurityLogRecord> awful = {
        conn(650, "op", "edge", "REJ"), notice(660, "edge", 1.0), notice(670, "edge", 1.0),
        notice(680, "edge", 1.0),       notice(690, "edge", 1.0), notice(695, "edge", 1.0),
        weird(700, "edge"),             weird(701, "edge"),       weird(702, "edge"),
        weird(703, "edge"),             weird(704, "edge"),       weird(705, "edge"),
        weird(706, "edge"),             weird(707, "edge"),       weird(708, "edge"),
        weird(709, "edge"),             stats(710, 100, 100),
    };
    const UpdateCycleResult third = run_update_cycle(second.state, awful, 2, cfg);
    CHECK(third.rp == doctest::Approx(0.0));
    const double old = second.state.score;
    CHECK(third.state.score == doctest::Approx(old - 0.5 * (1.0 - old) / 10.0));
}
