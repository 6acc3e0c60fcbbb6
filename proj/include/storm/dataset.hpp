#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "storm/json_util.hpp"
#include "storm/rng.hpp"
#include "storm/tlr.hpp"

namespace storm {

constexpr std::size_t kProcessAttributeCount = 8;

/// The monitored process attributes, in dataset column order.  The last
/// column is the networking signal.
inline const std::vector<std::string>& process_attribute_names() {
    static const std::vector<std::string> names = {
        "IO Write Operations/sec", "IO Read Operations/sec", "IO Other Operations/sec",
        "IO Data Operations/sec",  "% Privileged Time",      "% Processor Time",
        "% User Time",             "Datagrams Sent/sec"};
    return names;
}

constexpr std::size_t kNetAttributeIndex = 7; // "Datagrams Sent/sec"

/// An ordered record collection with attribute names and, once normalize()
/// has run, the per-attribute (min,max) used for scaling.
struct Dataset {
    std::vector<InputRecord> records;
    std::vector<std::string> attribute_names;
    std::vector<ValueRange> normalization_stats; // empty until normalized

    std::size_t dim() const {
        return records.empty() ? attribute_names.size() : records.front().x.size();
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Observed per-attribute (min,max) over all records.
inline std::vector<ValueRange> data_ranges(const Dataset& d) {
    if (d.records.empty()) throw std::invalid_argument("data_ranges: dataset is empty");
    const std::size_t n = d.records.front().x.size();
    std::vector<ValueRange> ranges(n, {std::numeric_limits<double>::infinity(),
                                       -std::numeric_limits<double>::infinity()});
    for (const InputRecord& r : d.records) {
        for (std::size_t k = 0; k < n; ++k) {
            ranges[k].first = std::min(ranges[k].first, r.x[k]);
            ranges[k].second = std::max(ranges[k].second, r.x[k]);
        }
    }
    return ranges;
}

/// Min-max scaling of every attribute to [0,1].  Constant attributes map
/// to 0.  The original ranges are kept in normalization_stats.
inline Dataset normalize(const Dataset& d) {
    if (d.records.empty()) throw std::invalid_argument("normalize: dataset is empty");
    Dataset out = d;
    out.normalization_stats = data_ranges(d);
    for (InputRecord& r : out.records) {
        for (std::size_t k = 0; k < r.x.size(); ++k) {
            const auto& [lo, hi] = out.normalization_stats[k];
            r.x[k] = hi > lo ? (r.x[k] - lo) / (hi - lo) : 0.0;
        }
    }
    return out;
}

// --- dataset files -------------------------------------------------------
//
// One JSON document per line.  The first line is a header carrying the
// attribute names (and the normalization stats when present); every further
// line is a record {"id", "x", "s"}.

inline std::string dataset_to_jsonl(const Dataset& d) {
    std::string out = "{\"attributes\":[";
    for (std::size_t k = 0; k < d.attribute_names.size(); ++k) {
        if (k) out += ",";
        out += jsonio::quoted(d.attribute_names[k]);
    }
    out += "]";
    if (!d.normalization_stats.empty()) {
        std::string mins, maxs;
        for (std::size_t k = 0; k < d.normalization_stats.size(); ++k) {
            if (k) { mins += ","; maxs += ","; }
            mins += jsonio::num_exact(d.normalization_stats[k].first);
            maxs += jsonio::num_exact(d.normalization_stats[k].second);
        }
        out += ",\"stats\":{\"min\":[" + mins + "],\"max\":[" + maxs + "]}";
    }
    out += "}\n";

    for (const InputRecord& r : d.records) {
        out += "{\"id\":" + jsonio::quoted(r.id) + ",\"x\":[";
        for (std::size_t k = 0; k < r.x.size(); ++k) {
            if (k) out += ",";
            out += jsonio::num_exact(r.x[k]);
        }
        out += "],\"s\":[";
        std::size_t i = 0;
        for (const std::string& token : r.s.tokens) {
            if (i++) out += ",";
            out += jsonio::quoted(token);
        }
        out += "]}\n";
    }
    return out;
}

inline void save_dataset(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file " + path.string());
    out << dataset_to_jsonl(d);
}

inline Dataset dataset_from_jsonl(const std::string& text, const std::string& name = "dataset") {
    Dataset d;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_dim = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string ctx = name + " line " + std::to_string(line_no);
        const nlohmann::json doc = jsonio::parse(line, ctx);

        if (!have_header) {
            have_header = true;
            d.attribute_names = jsonio::field_as<std::vector<std::string>>(doc, "attributes", ctx);
            if (doc.contains("stats")) {
                const auto& stats = doc.at("stats");
                const auto mins = jsonio::field_as<std::vector<double>>(stats, "min", ctx);
                const auto maxs = jsonio::field_as<std::vector<double>>(stats, "max", ctx);
                if (mins.size() != d.attribute_names.size() || maxs.size() != mins.size())
                    throw ParseError(ctx + ": stats do not cover every attribute");
                for (std::size_t k = 0; k < mins.size(); ++k)
                    d.normalization_stats.push_back({mins[k], maxs[k]});
            }
            continue;
        }

        InputRecord r;
        r.id = jsonio::field_as<std::string>(doc, "id", ctx);
        r.x = jsonio::field_as<std::vector<double>>(doc, "x", ctx);
        for (const double v : r.x)
            if (!std::isfinite(v)) throw ParseError(ctx + ": non-finite attribute value");
        for (const auto& token : jsonio::field_as<std::vector<std::string>>(doc, "s", ctx))
            r.s.tokens.insert(token);

        if (expected_dim == 0) {
            expected_dim = r.x.size();
            if (!d.attribute_names.empty() && d.attribute_names.size() != expected_dim)
                throw ParseError(ctx + ": record has " + std::to_string(expected_dim) +
                                 " attributes, header names " +
                                 std::to_string(d.attribute_names.size()));
        } else if (r.x.size() != expected_dim) {
            throw ParseError(ctx + ": record has " + std::to_string(r.x.size()) +
                             " attributes, expected " + std::to_string(expected_dim));
        }
        d.records.push_back(std::move(r));
    }

    if (!have_header) throw ParseError(name + ": missing header line");
    return d;
}

inline Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return dataset_from_jsonl(buf.str(), path.filename().string());
}

// --- synthetic generators ------------------------------------------------

/// Parameter block for one emulated process.  Inactive processes emit
/// near-zero activity regardless of their nominal means.
struct ProcessProfile {
    std::string name;
    std::array<double, kProcessAttributeCount> attribute_means{};
    std::array<double, kProcessAttributeCount> attribute_stddevs{};
    SideInfo imports;
    std::size_t snapshots = 1;
    bool active = true;

    friend bool operator==(const ProcessProfile&, const ProcessProfile&) = default;
};

namespace detail {

inline double clip_attribute(double v, std::size_t attribute) {
    // IO rates and datagram counts cannot go negative; the three percentage
    // attributes (indexes 4..6) live in [0,100].
    if (v < 0.0) return 0.0;
    if (attribute >= 4 && attribute <= 6 && v > 100.0) return 100.0;
    return v;
}

inline ProcessProfile make_profile(std::string name,
                                   std::array<double, kProcessAttributeCount> means,
                                   std::array<double, kProcessAttributeCount> stddevs,
                                   std::vector<std::string> imports, std::size_t snapshots,
                                   bool active = true) {
    ProcessProfile p;
    p.name = std::move(name);
    p.attribute_means = means;
    p.attribute_stddevs = stddevs;
    for (std::string& token : imports) p.imports.tokens.insert(std::move(token));
    p.snapshots = snapshots;
    p.active = active;
    return p;
}

} // namespace detail

/// The two-process scenario: a file editor with no networking imports and a
/// messaging client with bursty IO and its own datagram traffic.  The
/// numbers are illustrative generator parameters, not measurements.
inline std::vector<ProcessProfile> experiment1_profiles() {
    using detail::make_profile;
    return {
        make_profile("editor", {18, 35, 10, 45, 2.5, 6, 4, 0}, {6, 12, 4, 15, 1.2, 2.5, 2, 0},
                     {"CreateFileW", "ReadFile", "WriteFile"}, 150),
        make_profile("messenger", {55, 70, 40, 130, 9, 20, 14, 42}, {22, 28, 18, 50, 3.5, 7, 5, 16},
                     {"WSASend", "WSARecv", "InternetConnectA", "HttpOpenRequestA", "DnsQuery_A"},
                     150),
    };
}

/// Thirty-three mixed desktop processes: twelve import networking APIs
/// (three of those idle through the whole session), the rest do not.
inline std::vector<ProcessProfile> experiment2_profiles() {
    using detail::make_profile;
    const std::size_t snaps = 200;
    std::vector<ProcessProfile> out;

    // networking-capable, active
    out.push_back(make_profile("browser", {45, 60, 30, 110, 8, 22, 15, 55},
                               {18, 25, 12, 40, 3, 7, 5, 18},
                               {"InternetOpenA", "InternetConnectA", "HttpOpenRequestA",
                                "HttpSendRequestA", "DnsQuery_A", "WSAStartup"},
                               snaps));
    out.push_back(make_profile("mail", {25, 30, 15, 60, 4, 10, 7, 25}, {10, 12, 6, 22, 1.5, 4, 3, 9},
                               {"InternetConnectA", "HttpOpenRequestA", "WSAStartup", "DnsQuery_W"},
                               snaps));
    out.push_back(make_profile("chat", {30, 28, 20, 55, 5, 12, 8, 35}, {12, 11, 8, 20, 2, 4, 3, 12},
                               {"WSASend", "WSARecv", "WSAStartup", "DnsQuery_A"}, snaps));
    out.push_back(make_profile("voip", {38, 36, 25, 70, 7, 18, 11, 70},
                               {14, 13, 10, 25, 2.5, 6, 4, 20},
                               {"WSASendTo", "WSARecvFrom", "WSASocketW", "DnsQuery_A"}, snaps));
    out.push_back(make_profile("sync_client", {50, 55, 28, 95, 6, 15, 10, 40},
                               {20, 22, 11, 35, 2, 5, 3.5, 14},
                               {"WinHttpOpen", "WinHttpConnect", "WinHttpSendRequest", "DnsQuery_W"},
                               snaps));
    out.push_back(make_profile("update_agent", {42, 48, 22, 80, 5, 13, 8, 30},
                               {16, 18, 9, 28, 2, 4.5, 3, 11},
                               {"WinHttpOpen", "HttpQueryInfoA", "DnsQuery_W", "WSAStartup"}, snaps));
    out.push_back(make_profile("rss_reader", {20, 24, 12, 42, 3, 8, 6, 18}, {8, 9, 5, 15, 1.2, 3, 2, 7},
                               {"InternetOpenUrlA", "HttpOpenRequestA", "InternetReadFile"}, snaps));
    out.push_back(make_profile("remote_desktop", {33, 40, 26, 72, 9, 24, 13, 48},
                               {13, 15, 10, 26, 3, 8, 4, 16},
                               {"WSASocketW", "WSAConnect", "RpcBindingFromStringBindingW",
                                "UuidCreate"},
                               snaps));
    out.push_back(make_profile("netmon", {15, 18, 22, 35, 6, 14, 7, 22}, {6, 7, 9, 13, 2, 5, 2.5, 8},
                               {"WSAIoctl", "SnmpMgrOpen", "NetbiosSend", "WNetGetConnectionW"},
                               snaps));

    // networking imports but idle during the session
    out.push_back(make_profile("ftp_client", {28, 32, 16, 58, 4, 11, 7, 38},
                               {11, 12, 6, 21, 1.5, 4, 2.5, 13},
                               {"FtpOpenFileA", "FtpGetFileA", "InternetConnectA"}, snaps, false));
    out.push_back(make_profile("vpn_helper", {22, 26, 14, 48, 5, 12, 6, 30},
                               {9, 10, 5, 17, 2, 4, 2, 10},
                               {"WSAIoctl", "DhcpRequestParams", "DnsQuery_W"}, snaps, false));
    out.push_back(make_profile("snmp_agent", {12, 14, 10, 26, 3, 7, 4, 15}, {5, 5, 4, 9, 1, 2.5, 1.5, 5},
                               {"SnmpMgrOpen", "SnmpMgrGetTrap", "NetUserGetInfo"}, snaps, false));

    // no networking imports
    const std::vector<std::string> plain = {"CreateFileW", "ReadFile", "WriteFile", "CloseHandle"};
    const std::vector<std::string> gui = {"CreateWindowExW", "GetMessageW", "DispatchMessageW",
                                          "TextOutW"};
    const std::vector<std::string> shell = {"ShellExecuteW", "PathCombineW", "FindFirstFileW",
                                            "FindNextFileW"};
    out.push_back(make_profile("editor", {16, 30, 9, 40, 2.5, 6, 4, 0}, {6, 11, 4, 14, 1, 2.5, 1.5, 0},
                               gui, snaps));
    out.push_back(make_profile("spreadsheet", {22, 38, 12, 55, 3, 9, 6, 0}, {8, 14, 5, 20, 1.2, 3, 2, 0},
                               gui, snaps));
    out.push_back(make_profile("pdf_viewer", {12, 45, 8, 52, 2, 7, 5, 0}, {5, 16, 3, 18, 1, 2.5, 2, 0},
                               gui, snaps));
    out.push_back(make_profile("terminal", {8, 10, 6, 16, 2, 5, 3, 0}, {3, 4, 2.5, 6, 1, 2, 1.2, 0},
                               plain, snaps));
    out.push_back(make_profile("file_indexer", {60, 85, 20, 140, 4, 10, 6, 0},
                               {22, 30, 8, 48, 1.5, 3.5, 2, 0}, shell, snaps));
    out.push_back(make_profile("photo_viewer", {10, 40, 7, 46, 2, 8, 6, 0}, {4, 15, 3, 16, 1, 3, 2, 0},
                               gui, snaps));
    out.push_back(make_profile("music_player", {9, 26, 6, 30, 2, 7, 4, 0}, {3.5, 10, 2.5, 11, 1, 2.5, 1.5, 0},
                               plain, snaps));
    out.push_back(make_profile("archiver", {70, 75, 18, 150, 5, 12, 7, 0}, {26, 28, 7, 52, 2, 4, 2.5, 0},
                               plain, snaps));
    out.push_back(make_profile("clipboard_mgr", {3, 4, 2, 6, 1, 2, 1.5, 0}, {1.2, 1.6, 1, 2.4, 0.5, 1, 0.7, 0},
                               gui, snaps));
    out.push_back(make_profile("calculator", {2, 3, 2, 5, 0.8, 2, 1.2, 0}, {1, 1.2, 1, 2, 0.4, 1, 0.6, 0},
                               gui, snaps));
    out.push_back(make_profile("notes", {6, 9, 4, 13, 1, 3, 2, 0}, {2.5, 3.5, 1.6, 5, 0.5, 1.2, 1, 0},
                               gui, snaps));
    out.push_back(make_profile("ide", {35, 55, 15, 85, 4, 14, 10, 0}, {13, 20, 6, 30, 1.5, 5, 3.5, 0},
                               shell, snaps));
    out.push_back(make_profile("compiler_daemon", {45, 65, 14, 105, 6, 20, 9, 0},
                               {17, 24, 6, 37, 2, 7, 3, 0}, plain, snaps));
    out.push_back(make_profile("search_indexer", {50, 70, 16, 115, 3, 9, 5, 0},
                               {19, 26, 6.5, 40, 1.2, 3, 2, 0}, shell, snaps));
    out.push_back(make_profile("defrag", {80, 90, 25, 170, 6, 11, 5, 0}, {30, 33, 10, 60, 2, 4, 2, 0},
                               plain, snaps));
    out.push_back(make_profile("backup_local", {65, 80, 22, 145, 4, 9, 5, 0},
                               {24, 30, 9, 50, 1.5, 3, 2, 0}, shell, snaps));
    out.push_back(make_profile("font_cache", {5, 12, 3, 16, 1, 3, 2, 0}, {2, 4.5, 1.2, 6, 0.5, 1.2, 1, 0},
                               plain, snaps));
    out.push_back(make_profile("print_spooler", {14, 16, 8, 28, 2, 5, 3, 0}, {5.5, 6, 3, 10, 1, 2, 1.2, 0},
                               plain, snaps));
    out.push_back(make_profile("task_scheduler", {7, 8, 5, 14, 1.5, 4, 2.5, 0},
                               {2.8, 3.2, 2, 5.5, 0.7, 1.6, 1, 0}, plain, snaps));
    out.push_back(make_profile("widget_host", {11, 14, 7, 24, 2, 6, 4, 0}, {4.5, 5.5, 3, 9, 1, 2.4, 1.6, 0},
                               gui, snaps));
    out.push_back(make_profile("screensaver", {2, 3, 1.5, 4, 1, 5, 3, 0}, {1, 1.2, 0.7, 1.6, 0.5, 2, 1.2, 0},
                               gui, snaps));
    return out;
}

/// Two processes sampled for 150 one-second snapshots each.  Every attribute
/// is a per-profile Gaussian draw clipped to its valid range; the editor's
/// datagram column is identically zero while the messenger's is positive.
inline Dataset synth_experiment1(std::uint64_t seed) {
    const std::vector<ProcessProfile> profiles = experiment1_profiles();
    Dataset d;
    d.attribute_names = process_attribute_names();

    Rng rng(derive_seed(seed, 2));
    const std::size_t snapshots = profiles.front().snapshots;
    for (std::size_t t = 0; t < snapshots; ++t) {
        for (const ProcessProfile& p : profiles) {
            InputRecord r;
            r.id = p.name + "@" + std::to_string(t);
            r.x.resize(kProcessAttributeCount);
            for (std::size_t k = 0; k < kProcessAttributeCount; ++k)
                r.x[k] = detail::clip_attribute(
                    rng.gaussian(p.attribute_means[k], p.attribute_stddevs[k]), k);
            r.s = p.imports;
            d.records.push_back(std::move(r));
        }
    }
    return d;
}

/// Thirty-three processes sampled for 200 one-second snapshots.  Active
/// processes alternate between an idle level and bursts of full activity;
/// the datagram column is a single system-wide signal, fed by the bursts of
/// the active networking processes and copied into every record of the same
/// snapshot instant.
inline Dataset synth_experiment2(std::uint64_t seed) {
    const std::vector<ProcessProfile> profiles = experiment2_profiles();
    Dataset d;
    d.attribute_names = process_attribute_names();

    Rng rng(derive_seed(seed, 3));
    const std::size_t snapshots = profiles.front().snapshots;

    // Burst state machine per profile: bursts start with probability 0.08
    // per second and persist with probability 0.8.
    std::vector<bool> bursting(profiles.size(), false);
    const double burst_start = 0.08;
    const double burst_continue = 0.8;

    for (std::size_t t = 0; t < snapshots; ++t) {
        // advance activity envelopes
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (!profiles[i].active) { bursting[i] = false; continue; }
            bursting[i] = bursting[i] ? rng.chance(burst_continue) : rng.chance(burst_start);
        }

        // system-wide datagram level for this instant
        double datagrams = std::abs(rng.gaussian(0.0, 2.0));
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const ProcessProfile& p = profiles[i];
            if (!p.active || p.attribute_means[kNetAttributeIndex] <= 0.0) continue;
            const double contribution =
                rng.gaussian(p.attribute_means[kNetAttributeIndex],
                             p.attribute_stddevs[kNetAttributeIndex]);
            datagrams += (bursting[i] ? 1.0 : 0.1) * std::max(contribution, 0.0);
        }

        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const ProcessProfile& p = profiles[i];
            const double scale = p.active ? (bursting[i] ? 1.0 : 0.55) : 0.04;
            InputRecord r;
            r.id = p.name + "@" + std::to_string(t);
            r.x.resize(kProcessAttributeCount);
            for (std::size_t k = 0; k + 1 < kProcessAttributeCount; ++k)
                r.x[k] = detail::clip_attribute(
                    scale * rng.gaussian(p.attribute_means[k], p.attribute_stddevs[k]), k);
            r.x[kNetAttributeIndex] = datagrams;
            r.s = p.imports;
            d.records.push_back(std::move(r));
        }
    }
    return d;
}

// --- profile files -------------------------------------------------------

inline std::string profiles_to_json(const std::vector<ProcessProfile>& profiles) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const ProcessProfile& p = profiles[i];
        out += "{\"name\":" + jsonio::quoted(p.name) + ",\"attribute_means\":[";
        for (std::size_t k = 0; k < kProcessAttributeCount; ++k) {
            if (k) out += ",";
            out += jsonio::num_exact(p.attribute_means[k]);
        }
        out += "],\"attribute_stddevs\":[";
        for (std::size_t k = 0; k < kProcessAttributeCount; ++k) {
            if (k) out += ",";
            out += jsonio::num_exact(p.attribute_stddevs[k]);
        }
        out += "],\"imports\":[";
        std::size_t j = 0;
        for (const std::string& token : p.imports.tokens) {
            if (j++) out += ",";
            out += jsonio::quoted(token);
        }
        out += "],\"snapshots\":" + std::to_string(p.snapshots) +
               ",\"active\":" + (p.active ? "true" : "false") + "}";
        out += i + 1 < profiles.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

inline std::vector<ProcessProfile> parse_profiles(const std::string& text,
                                                  const std::string& context = "profiles") {
    const nlohmann::json doc = jsonio::parse(text, context);
    if (!doc.is_array()) throw ParseError(context + ": expected a JSON array of profiles");
    std::vector<ProcessProfile> out;
    for (const auto& entry : doc) {
        ProcessProfile p;
        p.name = jsonio::field_as<std::string>(entry, "name", context);
        const std::string ctx = context + ": profile \"" + p.name + "\"";
        const auto means = jsonio::field_as<std::vector<double>>(entry, "attribute_means", ctx);
        const auto sds = jsonio::field_as<std::vector<double>>(entry, "attribute_stddevs", ctx);
        if (means.size() != kProcessAttributeCount || sds.size() != kProcessAttributeCount)
            throw ParseError(ctx + ": expected " + std::to_string(kProcessAttributeCount) +
                             " means and stddevs");
        std::copy(means.begin(), means.end(), p.attribute_means.begin());
        std::copy(sds.begin(), sds.end(), p.attribute_stddevs.begin());
        for (const double sd : p.attribute_stddevs)
            if (sd < 0.0) throw ParseError(ctx + ": negative stddev");
        for (const auto& token : jsonio::field_as<std::vector<std::string>>(entry, "imports", ctx))
            p.imports.tokens.insert(token);
        p.snapshots = jsonio::field_as<std::size_t>(entry, "snapshots", ctx);
        if (p.snapshots == 0) throw ParseError(ctx + ": snapshots must be positive");
        p.active = jsonio::field_as<bool>(entry, "active", ctx);
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<ProcessProfile> load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profile file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profiles(buf.str(), path.filename().string());
}

// --- experiment report ---------------------------------------------------

/// Winner-node statistics over one trained map: how many winners carry any
/// receptor state, and the mean networking level of each group expressed as
/// a share of the two group means combined.
struct ExperimentReport {
    std::size_t total_nodes = 0;
    std::size_t tlr_on_winners = 0;
    std::size_t tlr_off_winners = 0;
    double mean_net_on = 0.0;
    double mean_net_off = 0.0;

    double separation() const { return std::abs(mean_net_on - mean_net_off); }

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

inline ExperimentReport experiment_report(const SomMap& map, const Dataset& dataset,
                                          std::size_t net_attribute_index) {
    if (net_attribute_index >= map.dim)
        throw std::invalid_argument("experiment_report: attribute index out of range");
    if (!dataset.records.empty() && dataset.records.front().x.size() != map.dim)
        throw std::invalid_argument("experiment_report: dataset dimension does not match map");

    ExperimentReport rep;
    rep.total_nodes = map.node_count();
    double on_sum = 0.0, off_sum = 0.0;
    for (const Node& node : map.nodes) {
        if (node.win_count == 0) continue;
        if (node.any_tlr_set()) {
            ++rep.tlr_on_winners;
            on_sum += node.prototype[net_attribute_index];
        } else {
            ++rep.tlr_off_winners;
            off_sum += node.prototype[net_attribute_index];
        }
    }
    if (rep.tlr_on_winners + rep.tlr_off_winners == 0)
        throw std::runtime_error("experiment_report: map has no winner nodes; train it first");

    const double raw_on = rep.tlr_on_winners ? on_sum / static_cast<double>(rep.tlr_on_winners) : 0.0;
    const double raw_off =
        rep.tlr_off_winners ? off_sum / static_cast<double>(rep.tlr_off_winners) : 0.0;
    const double denom = raw_on + raw_off;
    rep.mean_net_on = denom > 0.0 ? raw_on / denom : 0.0;
    rep.mean_net_off = denom > 0.0 ? raw_off / denom : 0.0;
    return rep;
}

} // namespace storm
