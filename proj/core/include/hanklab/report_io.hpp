#pragma once

// Serialization of McReport. JSON is schema-versioned; CSV is one row per
// estimated quantity. Both embed the resolved run configuration (a JSON
// string supplied by the caller) and the tool version. Wall time and worker
// count are left out so reruns with a different worker count are identical.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "hanklab/mc.hpp"

namespace hanklab::io {

/// "%.17g"; "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double value);

void write_report_json(std::ostream& out, const mc::McReport& report, std::string_view resolved_config_json);

/// Header line "# hanklab <version> config=<compact json>", then columns
/// kind,p,q,t1,t2,value,se,n,bn,R,seed.
void write_report_csv(std::ostream& out, const mc::McReport& report, std::string_view resolved_config_json);

}  // namespace hanklab::io
