#include "sqz/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace sqz::app {

namespace {

void flatten(const Document& node, const std::string& prefix, std::ostringstream& out) {
    if (node.is_object()) {
        if (node.empty()) out << prefix << ",\n";
        for (const auto& [key, value] : node.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (node.is_array()) {
        if (node.empty()) out << prefix << ",\n";
        for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "." + std::to_string(i), out);
    } else if (node.is_null()) {
        out << prefix << ",missing\n";
    } else if (node.is_string()) {
        const auto s = node.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : s) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
            out << prefix << "," << quoted << "\"\n";
        } else {
            out << prefix << "," << s << "\n";
        }
    } else if (node.is_number_float()) {
        out << prefix << "," << format_number(node.get<double>()) << "\n";
    } else {
        out << prefix << "," << node.dump() << "\n";
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string header_line(const std::string& title, const Params& params) {
    std::string line = "# " + title;
    for (const auto& [k, v] : params) {
        line += " " + k + "=";
        line += v.find(' ') == std::string::npos ? v : "\"" + v + "\"";
    }
    return line;
}

std::string spectrum_csv(const SpectrumSet& set, const Params& params) {
    Params p = params;
    if (!set.squeezed.artifacts.empty() || !set.anti_squeezed.artifacts.empty()) {
        std::string flags;
        for (const auto* t : {&set.shot, &set.squeezed, &set.anti_squeezed}) {
            for (const auto& a : t->artifacts) flags += (flags.empty() ? "" : ";") + t->label + ":" + a;
        }
        p.emplace_back("synthetic_artifacts", flags);
    }
    std::ostringstream out;
    out << header_line("squeezer-sim spectrum", p) << "\n" << kSpectrumColumns << "\n";
    for (std::size_t i = 0; i < set.shot.points.size(); ++i) {
        out << format_number(set.shot.points[i].frequency_hz) << ',' << format_number(set.shot.points[i].level_db)
            << ',' << format_number(set.squeezed.points[i].level_db) << ','
            << format_number(set.anti_squeezed.points[i].level_db) << "\n";
    }
    return out.str();
}

Document spectrum_doc(const SpectrumSet& set, const Params& params) {
    Document doc;
    for (const auto& [k, v] : params) doc["parameters"][k] = v;
    Document columns;
    for (const char* c : {"frequency_hz", "shot_db", "squeezed_db", "antisqueezed_db"}) columns[c] = Document::array();
    for (std::size_t i = 0; i < set.shot.points.size(); ++i) {
        columns["frequency_hz"].push_back(set.shot.points[i].frequency_hz);
        columns["shot_db"].push_back(set.shot.points[i].level_db);
        columns["squeezed_db"].push_back(set.squeezed.points[i].level_db);
        columns["antisqueezed_db"].push_back(set.anti_squeezed.points[i].level_db);
    }
    doc["traces"] = columns;
    Document artifacts = Document::object();
    for (const auto* t : {&set.shot, &set.squeezed, &set.anti_squeezed}) artifacts[t->label] = t->artifacts;
    doc["synthetic_artifacts"] = artifacts;
    return doc;
}

std::string trace_csv(const ErrorSignalTrace& trace, const Params& params) {
    Table t{{trace.sweep_column, trace.normalized ? "error_normalized" : "error"}, {trace.sweep, trace.error}};
    return table_csv(t, "squeezer-sim errorsignal", params);
}

Document trace_doc(const ErrorSignalTrace& trace, const Params& params) {
    Table t{{trace.sweep_column, trace.normalized ? "error_normalized" : "error"}, {trace.sweep, trace.error}};
    return table_doc(t, "errorsignal", params);
}

std::string table_csv(const Table& t, const std::string& title, const Params& params) {
    if (t.columns.size() != t.data.size()) throw std::logic_error("table: column count mismatch");
    std::ostringstream out;
    out << header_line(title, params) << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << "\n";
    const std::size_t rows = t.data.empty() ? 0 : t.data.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < t.data.size(); ++c) out << (c ? "," : "") << format_number(t.data[c].at(r));
        out << "\n";
    }
    return out.str();
}

Document table_doc(const Table& t, const std::string& title, const Params& params) {
    Document doc;
    doc["title"] = title;
    for (const auto& [k, v] : params) doc["parameters"][k] = v;
    for (std::size_t c = 0; c < t.columns.size(); ++c) doc["columns"][t.columns[c]] = t.data[c];
    return doc;
}

std::string render_doc(const Document& body, const std::string& generated_at) {
    Document doc;
    doc["generated_at"] = generated_at;
    for (const auto& [k, v] : body.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

std::string render_key_values(const Document& body, const std::string& generated_at) {
    std::ostringstream out;
    out << "# generated_at=" << generated_at << "\n";
    out << "key,value\n";
    flatten(body, "", out);
    return out.str();
}

std::string strip_timestamp(const std::string& rendered) {
    std::istringstream in(rendered);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.find("generated_at") != std::string::npos) continue;
        out += line + "\n";
    }
    return out;
}

}  // namespace sqz::app
