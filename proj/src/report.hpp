#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "simulation.hpp"

namespace myopia {

inline constexpr const char* kMetricsHeader =
    "trial,mse_p1,mse_p2,info_gain,ud_mean,rd_mean,width_immediate,width_next";

/// 12 significant digits, locale independent.
std::string format_number(double v);

/// One row per trial under kMetricsHeader; diagnostics columns stay empty when absent.
std::string metrics_csv(const MetricsTable& table);

/// Long-format decomposition curves: trial,design_index,design,immediate,expected_next.
/// Trials outside the table are skipped.
std::string curves_csv(const MetricsTable& table, std::span<const int> trials);

/// Per-trial columns for each labelled table side by side.
std::string comparison_csv(std::span<const MetricsTable> tables);

void write_text_file(const std::string& path, const std::string& content);

struct RunManifest {
    std::string command;
    std::string config;  // emitted config text
    std::string engine_version;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> notes;

    bool operator==(const RunManifest&) const = default;
};

/// Fixed interpretation notes recorded with every run.
std::map<std::string, std::string> standard_notes();

std::string manifest_json(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& json);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace myopia
