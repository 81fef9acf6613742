#pragma once

// Scenario files (JSON), trace CSV and run summaries.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "wmr/simulator.hpp"

namespace wmr::io {

/// Parses a scenario document. Unknown keys and wrong types raise
/// ScenarioInvalid naming the key; semantic checks are left to
/// Scenario::validate(). When "initial" is absent (or partial) the missing
/// fields come from the reference at t = 0.
Scenario scenario_from_json(const nlohmann::json& doc, const std::string& default_id = "scenario");

/// Throws ParseError when the file is missing or is not valid JSON.
nlohmann::json read_json(const std::filesystem::path& path);

Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const control::GainSet& gains);
nlohmann::json to_json(const NamedController& controller);

control::EquivalentMode parse_mode(const std::string& text);
control::Chattering parse_chattering(const std::string& text);

/// Fixed column order; numbers use the shortest round-trip representation.
inline constexpr const char* kTraceHeader =
    "t,x,y,theta,v_cmd,w_cmd,v_sat,w_sat,gx,gy,gxd,gyd,ex,ey,sx,sy,sigx,sigy,vx,vy,un1,un2,dx,dy,dth,wpx,wpy,fault";

void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path);

/// Structured run summary: metrics, fault statistics, final pose, peak errors.
nlohmann::json summarize(const SimTrace& trace);

/// Hex SHA-256 of a file's bytes / of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wmr::io
