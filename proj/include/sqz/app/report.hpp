#pragma once

// Serialization of traces and reports.
//
// Traces are comma-separated with one leading '#' line of generator
// parameters. Reports are built as a nested document and rendered either as
// JSON (doc) or as flattened key,value rows (csv). The timestamp is the only
// non-deterministic content and always sits on a line of its own.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sqz/control.hpp"
#include "sqz/detection.hpp"

namespace sqz::app {

using Document = nlohmann::ordered_json;
using Params = std::vector<std::pair<std::string, std::string>>;

// Shortest representation that reads back to the same double.
std::string format_number(double v);

// "# key=value key=value ..." (no trailing newline). Values containing
// spaces are quoted.
std::string header_line(const std::string& title, const Params& params);

// Columns: frequency_hz,shot_db,squeezed_db,antisqueezed_db
inline constexpr const char* kSpectrumColumns = "frequency_hz,shot_db,squeezed_db,antisqueezed_db";
std::string spectrum_csv(const SpectrumSet& set, const Params& params);
Document spectrum_doc(const SpectrumSet& set, const Params& params);

std::string trace_csv(const ErrorSignalTrace& trace, const Params& params);
Document trace_doc(const ErrorSignalTrace& trace, const Params& params);

// Column-oriented table: first column is the sweep, all columns equal length.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[column][row]
};
std::string table_csv(const Table& t, const std::string& title, const Params& params);
Document table_doc(const Table& t, const std::string& title, const Params& params);

// Report renderers. `generated_at` goes first, on its own line.
std::string render_doc(const Document& body, const std::string& generated_at);
std::string render_key_values(const Document& body, const std::string& generated_at);

// Drops every line mentioning generated_at; used to compare report bodies.
std::string strip_timestamp(const std::string& rendered);

}  // namespace sqz::app
