#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace myopia {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string metrics_csv(const MetricsTable& table) {
    std::ostringstream out;
    out << kMetricsHeader << "\n";
    for (const auto& row : table.rows) {
        out << row.trial << ',' << format_number(row.mse.at(0)) << ','
            << (row.mse.size() > 1 ? format_number(row.mse[1]) : std::string()) << ','
            << format_number(row.info_gain) << ',' << optional_number(row.ud_mean) << ','
            << optional_number(row.rd_mean) << ',' << optional_number(row.width_immediate) << ','
            << optional_number(row.width_next) << "\n";
    }
    return out.str();
}

std::string curves_csv(const MetricsTable& table, std::span<const int> trials) {
    std::ostringstream out;
    out << "trial,design_index,design,immediate,expected_next\n";
    for (int t : trials) {
        if (t < 1 || static_cast<std::size_t>(t) > table.mean_immediate.size()) continue;
        const auto& imm = table.mean_immediate[static_cast<std::size_t>(t - 1)];
        const auto& next = table.mean_expected_next[static_cast<std::size_t>(t - 1)];
        for (std::size_t j = 0; j < imm.size(); ++j)
            out << t << ',' << j << ',' << format_number(table.design_values[j]) << ','
                << format_number(imm[j]) << ',' << format_number(next[j]) << "\n";
    }
    return out.str();
}

std::string comparison_csv(std::span<const MetricsTable> tables) {
    std::ostringstream out;
    out << "trial";
    for (const auto& t : tables) {
        const std::string tag = std::string(strategy_name(t.strategy)) + std::to_string(t.steps);
        out << ',' << tag << "_mse_p1," << tag << "_mse_p2," << tag << "_info_gain";
    }
    out << "\n";
    const std::size_t n = tables.empty() ? 0 : tables.front().rows.size();
    for (const auto& t : tables)
        if (t.rows.size() != n) throw ContractViolation("comparison tables have different trial counts");
    for (std::size_t i = 0; i < n; ++i) {
        out << tables.front().rows[i].trial;
        for (const auto& t : tables) {
            const auto& r = t.rows[i];
            out << ',' << format_number(r.mse.at(0)) << ','
                << (r.mse.size() > 1 ? format_number(r.mse[1]) : std::string()) << ','
                << format_number(r.info_gain);
        }
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::map<std::string, std::string> standard_notes() {
    return {
        {"log_base", "natural log; utilities and entropies are in nats"},
        {"ud_myopic_term",
         "greedy two-step total = u(d_myopic|p_t) + E_y max_d u(d|p_{t+1}), posterior taken after d_myopic"},
        {"ud_timing", "ud/rd/width columns describe the prior at the start of the trial; mse/info_gain the posterior after it"},
        {"averaging", "rd is computed per replication and then averaged; info_gain = initial entropy - mean posterior entropy"},
        {"axis_mapping", "parameter axes are bound to model parameters by name"},
        {"estimate", "posterior mean over the grid"},
    };
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["engine_version"] = m.engine_version;
    j["seed"] = m.seed;
    j["timestamp"] = m.timestamp;
    j["outputs"] = m.outputs;
    j["notes"] = m.notes;
    j["config"] = m.config;
    return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.engine_version = j.at("engine_version").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.timestamp = j.at("timestamp").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.notes = j.at("notes").get<std::map<std::string, std::string>>();
        m.config = j.at("config").get<std::string>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace myopia
