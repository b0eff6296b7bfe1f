#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "permeable/cb_rank.hpp"
#include "permeable/exception_set.hpp"
#include "permeable/fixtures.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

using Json = nlohmann::json;

/// Version tag written as the first line of every CSV export.
inline constexpr std::string_view kCsvVersion = "# permeable-csv v1";

// JSON readers. `where` is the dotted field path used in diagnostics; every
// failure is a schema_violation, unknown_kind or dimension_mismatch Error
// whose message starts with that path.

Point parse_point(const Json& j, std::size_t dimension, const std::string& where);
Polyline parse_polyline(const Json& j, const std::string& where);
ExceptionSet parse_exception_set(const Json& j, std::size_t dimension, const std::string& where);
FixtureFunction parse_function(const Json& j, std::size_t dimension, const std::string& where);
CBSet parse_cb_set(const Json& j, const std::string& where);

/// Rejects keys of `j` outside `allowed`.
void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where);

// Writers.

Json to_json(const Point& p);
Json to_json(const Polyline& p);
Json to_json(const CrossingReport& r);

/// Version line, header x1..xd, one vertex per row.
std::string polyline_csv(const Polyline& p);

}  // namespace permeable
