#pragma once

#include <istream>
#include <map>
#include <vector>

#include "trustmesh/config.hpp"
#include "trustmesh/errors.hpp"
#include "trustmesh/types.hpp"

namespace trustmesh {

/// Parse result: well-formed lines become records, malformed lines become
/// per-line errors. A parse only throws for stream-level problems.
template <typename T>
struct ParseOutcome {
    std::vector<T> records;
    std::vector<LineError> errors;
};

ParseOutcome<ProductOffer> parse_catalog(std::istream& in);
ParseOutcome<InteractionRecord> parse_interactions(std::istream& in);
ParseOutcome<Recommendation> parse_recommendations(std::istream& in);

/// Events come back sorted by timestamp ascending.
ParseOutcome<SlaEvent> ingest_sla_events(std::istream& in);

std::map<StakeholderId, std::int64_t> sla_counts_by_provider(
    const std::vector<SlaEvent>& events);

/// Parse one Zeek-format ASCII log. Column layout is taken from the
/// `#fields` header line; endpoint addresses are mapped to stakeholders via
/// `address_map` (unmapped addresses keep the UNKNOWN sentinel). Notice
/// severity weights come from `severities`, defaulting to 1.0.
///
/// Throws FormatError when the `#fields` header is missing or the declared
/// columns do not cover the requested log kind.
ParseOutcome<SecurityLogRecord> parse_zeek_log(std::istream& in, LogKind kind,
                                               const AddressMap& address_map,
                                               const SeverityMap& severities = {});

/// Per-provider catalog statistics at `as_of`. An offer is live when
/// published_at <= as_of and it is not withdrawn by then; offers withdrawn
/// at or before as_of count toward offers_withdrawn only.
std::map<StakeholderId, CatalogFeatures> derive_catalog_features(
    const std::vector<ProductOffer>& offers, double as_of);

}  // namespace trustmesh
