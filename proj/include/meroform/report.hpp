#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

namespace meroform {

using Json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Command report: echo of the invocation, a digest of the input file, the
// command-specific result object, and wall time. Everything except
// timing_ms is deterministic for a fixed input and seed.
struct Report {
    std::string command;
    std::string input_digest;
    Json result = Json::object();
    double timing_ms = 0.0;
};

enum class ReportFormat { text, json };

namespace detail {

inline void render_text_value(std::ostream& out, const std::string& prefix, const Json& v);

inline void render_text_object(std::ostream& out, const std::string& prefix, const Json& obj)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        render_text_value(out, key, it.value());
    }
}

inline void render_text_value(std::ostream& out, const std::string& prefix, const Json& v)
{
    if (v.is_object()) {
        render_text_object(out, prefix, v);
    } else if (v.is_array()) {
        // "lambdas" renders as lambda[1], lambda[2], ... to match the
        // 1-based indices of the f_i
        std::string stem = prefix;
        if (stem.size() > 7 && stem.substr(stem.size() - 7) == "lambdas")
            stem = stem.substr(0, stem.size() - 1);
        else if (stem == "lambdas")
            stem = "lambda";
        int i = 0;
        for (const auto& item : v) {
            ++i;
            render_text_value(out, stem + "[" + std::to_string(i) + "]", item);
        }
        if (i == 0)
            out << prefix << " = []\n";
    } else if (v.is_string()) {
        out << prefix << " = " << v.get<std::string>() << "\n";
    } else {
        out << prefix << " = " << v.dump() << "\n";
    }
}

} // namespace detail

inline std::string render_report(const Report& r, ReportFormat format)
{
    if (format == ReportFormat::json) {
        Json j = Json::object();
        j["command"] = r.command;
        j["input_digest"] = r.input_digest;
        j["result"] = r.result;
        j["timing_ms"] = r.timing_ms;
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "command = " << r.command << "\n";
    out << "input_digest = " << r.input_digest << "\n";
    detail::render_text_object(out, "", r.result);
    out << "timing_ms = " << r.timing_ms << "\n";
    return out.str();
}

} // namespace meroform
