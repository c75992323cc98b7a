#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "trustmesh/errors.hpp"
#include "trustmesh/ingestion.hpp"
#include "trustmesh/serde.hpp"

using namespace trustmesh;

namespace {

const AddressMap kAddresses = {
    {"10.0.0.1", "op-a"}, {"10.0.0.2", "edge-b"}, {"10.0.0.3", "op-c"}};

const SeverityMap kSeverities = {{"Scan::Port_Scan", 0.8}};

std::string offer_line(const std::string& id, const std::string& provider,
                       const std::string& type, double price, double published,
                       const char* withdrawn = nullptr) {
    std::string line = "{\"asset_type\":\"" + type + "\",\"location\":\"mad\",\"offer_id\":\"" +
                       id + "\",\"price\":" + std::to_string(price) +
                       ",\"provider_id\":\"" + provider +
                       "\",\"published_at\":" + std::to_string(published);
    if (withdrawn) line += std::string(",\"withdrawn_at\":") + withdrawn;
    return line + "}";
}

}  // namespace

TEST_CASE("catalog parsing") {
    std::istringstream in(offer_line("o1", "p1", "edge", 12.5, 0.0) + "\n");
    const auto out = parse_catalog(in);
    REQUIRE(out.records.size() == 1);
    CHECK(out.errors.empty());
    CHECK(out.records[0].asset_type == AssetType::Edge);
    CHECK(out.records[0].price == doctest::Approx(12.5));

    std::istringstream bad(offer_line("o1", "p1", "quantum", 1.0, 0.0) + "\n");
    const auto rejected = parse_catalog(bad);
    CHECK(rejected.records.empty());
    REQUIRE(rejected.errors.size() == 1);
    CHECK(rejected.errors[0].line == 1);
}

TEST_CASE("catalog covers every asset category") {
    std::string text;
    int i = 0;
    for (const char* type : {"ran", "spectrum", "vnf", "cnf", "slice", "network_service",
                             "cloud", "edge"})
        text += offer_line("o" + std::to_string(i++), "p", type, 5.0, 0.0) + "\n";
    std::istringstream in(text);
    const auto out = parse_catalog(in);
    REQUIRE(out.records.size() == 8);
    std::set<AssetType> seen;
    for (const ProductOffer& offer : out.records) seen.insert(offer.asset_type);
    CHECK(seen.size() == 8);
}

TEST_CASE("catalog features") {
    CHECK(derive_catalog_features({}, 100.0).empty());

    std::istringstream in(offer_line("e1", "P", "edge", 10, 0.0) + "\n" +
                          offer_line("e2", "P", "edge", 11, 0.0) + "\n" +
                          offer_line("c1", "P", "cloud", 12, 0.0, "50.0") + "\n" +
                          offer_line("q1", "Q", "ran", 13, 0.0) + "\n");
    const auto offers = parse_catalog(in);
    REQUIRE(offers.errors.empty());
    const auto features = derive_catalog_features(offers.records, 100.0);
    REQUIRE(features.size() == 2);
    const CatalogFeatures& p = features.at("P");
    CHECK(p.offers_total == 2);
    CHECK(p.offers_by_type.at(AssetType::Edge) == 2);
    CHECK(p.offers_by_type.count(AssetType::Cloud) == 0);
    CHECK(p.offers_withdrawn == 1);
    CHECK(features.at("Q").offers_total == 1);
}

TEST_CASE("sla events") {
    std::istringstream one(render_sla_event_line({"prov", 10.0, SlaEventKind::Violation}) +
                           "\n");
    CHECK(ingest_sla_events(one).records.size() == 1);

    std::istringstream shuffled(
        render_sla_event_line({"a", 30.0, SlaEventKind::Violation}) + "\n" +
        render_sla_event_line({"a", 10.0, SlaEventKind::Warning}) + "\n" +
        render_sla_event_line({"b", 20.0, SlaEventKind::Violation}) + "\n" +
        render_sla_event_line({"a", 25.0, SlaEventKind::Violation}) + "\n" +
        render_sla_event_line({"b", 5.0, SlaEventKind::Warning}) + "\n");
    const auto out = ingest_sla_events(shuffled);
    REQUIRE(out.records.size() == 5);
    for (std::size_t i = 1; i < out.records.size(); ++i)
        CHECK(out.records[i - 1].timestamp <= out.records[i].timestamp);
    const auto counts = sla_counts_by_provider(out.records);
    CHECK(counts.at("a") == 3);
    CHECK(counts.at("b") == 2);
}

TEST_CASE("conn log parsing") {
    const std::string log =
        "#separator \\x09\n"
        "#set_separator\t,\n"
        "#empty_field\t(empty)\n"
        "#unset_field\t-\n"
        "#path\tconn\n"
        "#fields\tts\tuid\tid.orig_h\tid.orig_p\tid.resp_h\tid.resp_p\tproto\t"
        "conn_state\torig_bytes\tresp_bytes\torig_pkts\tresp_pkts\n"
        "#types\ttime\tstring\taddr\tport\taddr\tport\tenum\tstring\tcount\tcount\t"
        "count\tcount\n"
        "100.5\tC1\t10.0.0.1\t4431\t10.0.0.2\t443\ttcp\tSF\t100\t2000\t5\t6\n"
        "101.0\tC2\t10.0.0.2\t5000\t10.0.0.1\t80\ttcp\tREJ\t-\t-\t-\t-\n"
        "102.0\tC3\t192.168.9.9\t1\t10.0.0.2\t443\ttcp\tXX\t0\t0\t0\t0\n";
    std::istringstream in(log);
    const auto out = parse_zeek_log(in, LogKind::Conn, kAddresses);
    CHECK(out.errors.empty());
    REQUIRE(out.records.size() == 3);

    const SecurityLogRecord& first = out.records[0];
    CHECK(first.timestamp == doctest::Approx(100.5));
    CHECK(first.originator_id == "op-a");
    CHECK(first.responder_id == "edge-b");
    const ConnPayload& payload = std::get<ConnPayload>(first.payload);
    CHECK(payload.conn_state == "SF");
    CHECK(payload.orig_bytes == 100);
    CHECK(payload.resp_bytes == 2000);

    // unset counters parse as zero
    CHECK(std::get<ConnPayload>(out.records[1].payload).orig_bytes == 0);
    // unmapped endpoints keep the sentinel; unknown states are normalized
    CHECK(out.records[2].originator_id == kUnknownStakeholder);
    CHECK(std::get<ConnPayload>(out.records[2].payload).conn_state == "UNKNOWN");
}

TEST_CASE("notice log parsing applies severities") {
    const std::string log =
        "#fields\tts\tuid\tsrc\tdst\tnote\tmsg\n"
        "10.0\tN1\t10.0.0.2\t10.0.0.1\tScan::Port_Scan\tscanning\n"
        "11.0\tN2\t10.0.0.2\t-\tWeird::Activity\t(empty)\n";
    std::istringstream in(log);
    const auto out = parse_zeek_log(in, LogKind::Notice, kAddresses, kSeverities);
    CHECK(out.errors.empty());
    REQUIRE(out.records.size() == 2);
    const NoticePayload& scan = std::get<NoticePayload>(out.records[0].payload);
    CHECK(scan.note == "Scan::Port_Scan");
    CHECK(scan.severity_weight == doctest::Approx(0.8));
    CHECK(out.records[0].originator_id == "edge-b");
    CHECK(out.records[0].responder_id == "op-a");
    // unknown note types default to full weight
    CHECK(std::get<NoticePayload>(out.records[1].payload).severity_weight ==
          doctest::Approx(1.0));
    CHECK(out.records[1].responder_id == kUnknownStakeholder);
}

TEST_CASE("weird and stats log parsing") {
    const std::string weird_log =
        "#fields\tts\tuid\tid.orig_h\tid.resp_h\tname\tnotice\n"
        "5.0\tW1\t10.0.0.2\t10.0.0.1\tbad_TCP_checksum\tF\n";
    std::istringstream win(weird_log);
    const auto weird = parse_zeek_log(win, LogKind::Weird, kAddresses);
    REQUIRE(weird.records.size() == 1);
    CHECK(std::get<WeirdPayload>(weird.records[0].payload).name == "bad_TCP_checksum");

    const std::string stats_log =
        "#fields\tts\tpeer\tmem\tpkts_proc\tpkts_dropped\n"
        "60.0\tzeek\t100\t5000\t12\n"
        "120.0\tzeek\t100\t4000\t-\n";
    std::istringstream sin(stats_log);
    const auto stats = parse_zeek_log(sin, LogKind::Stats, kAddresses);
    REQUIRE(stats.records.size() == 2);
    CHECK(std::get<StatsPayload>(stats.records[0].payload).packets_received == 5000);
    CHECK(std::get<StatsPayload>(stats.records[0].payload).packets_dropped == 12);
    CHECK(std::get<StatsPayload>(stats.records[1].payload).packets_dropped == 0);
}

TEST_CASE("zeek header errors are whole-file errors") {
    std::istringstream missing("100.0\tC1\t10.0.0.1\n");
    CHECK_THROWS_AS(parse_zeek_log(missing, LogKind::Conn, kAddresses), FormatError);

    std::istringstream incomplete("#fields\tts\tuid\n100.0\tC1\n");
    CHECK_THROWS_WITH_AS(parse_zeek_log(incomplete, LogKind::Conn, kAddresses),
                         doctest::Contains("missing required fields"), FormatError);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_zeek_log(empty, LogKind::Conn, kAddresses), FormatError);
}

TEST_CASE("malformed value lines are reported per line") {
    const std::string log =
        "#fields\tts\tuid\tid.orig_h\tid.orig_p\tid.resp_h\tid.resp_p\tproto\t"
        "conn_state\n"
        "1.0\tC1\t10.0.0.1\t1\t10.0.0.2\t2\ttcp\tSF\n"
        "oops\tC2\t10.0.0.1\t1\t10.0.0.2\t2\ttcp\tSF\n"
        "3.0\tC3\t10.0.0.1\t1\t10.0.0.2\t2\ttcp\tSF\n"
        "4.0\tC4\tmissing-fields\n"
        "5.0\tC5\t10.0.0.2\t1\t10.0.0.1\t2\ttcp\tREJ\n";
    std::istringstream in(log);
    const auto out = parse_zeek_log(in, LogKind::Conn, kAddresses);
    CHECK(out.records.size() == 3);
    REQUIRE(out.errors.size() == 2);
    CHECK(out.errors[0].line == 3);
    CHECK(out.errors[1].line == 5);
    CHECK(format_line_errors(out.errors).find("line 3:") != std::string::npos);
}
