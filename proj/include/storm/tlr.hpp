#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "storm/json_util.hpp"
#include "storm/som.hpp"

namespace storm {

/// Per-instance symbolic side information: a set of identifier tokens
/// (for process telemetry, the API names an executable imports).  May be
/// empty when nothing is known about the instance.
struct SideInfo {
    std::set<std::string> tokens;

    friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

enum class MatchMode { prefix, substring, exact };

/// A named matching predicate over tokens.  Matching is case-insensitive.
struct Receptor {
    std::string name;
    std::string pattern;
    MatchMode mode = MatchMode::prefix;

    friend bool operator==(const Receptor&, const Receptor&) = default;
};

/// Global ordered receptor list; list positions define the bit positions of
/// every node state and activation vector.
struct Repertoire {
    std::vector<Receptor> receptors;

    std::size_t size() const { return receptors.size(); }

    friend bool operator==(const Repertoire&, const Repertoire&) = default;
};

/// Which receptors matched one record; length equals the repertoire size.
using ActivationVector = std::vector<std::uint8_t>;

/// Optional per-receptor predicate over the measured features.
using FeaturePredicate = std::function<bool(const FeatureVector&)>;

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool receptor_matches(const Receptor& r, std::string_view token) {
    const std::string t = ascii_lower(token);
    const std::string p = ascii_lower(r.pattern);
    switch (r.mode) {
    case MatchMode::prefix: return t.size() >= p.size() && t.compare(0, p.size(), p) == 0;
    case MatchMode::substring: return t.find(p) != std::string::npos;
    case MatchMode::exact: return t == p;
    }
    return false;
}

/// The stock repertoire: thirteen case-insensitive prefixes covering the
/// Windows networking API families.
inline Repertoire default_repertoire() {
    Repertoire rep;
    for (const char* name : {"Internet", "Ftp", "Http", "WinHttp", "WSA", "Rpc", "Uuid", "Dns",
                             "Dhcp", "Netbios", "Net", "Snmp", "WNet"})
        rep.receptors.push_back({name, name, MatchMode::prefix});
    return rep;
}

namespace detail {
inline MatchMode parse_match_mode(const std::string& text, const std::string& context) {
    if (text == "prefix") return MatchMode::prefix;
    if (text == "substring") return MatchMode::substring;
    if (text == "exact") return MatchMode::exact;
    throw ParseError(context + ": unknown mode \"" + text + "\"");
}

inline const char* match_mode_name(MatchMode mode) {
    switch (mode) {
    case MatchMode::prefix: return "prefix";
    case MatchMode::substring: return "substring";
    case MatchMode::exact: return "exact";
    }
    return "prefix";
}
} // namespace detail

/// Parses a receptor definition document: a JSON array of
/// {"name", "pattern", "mode"} entries.  Names must be unique, patterns
/// non-empty; errors name the offending entry.
inline Repertoire parse_repertoire(const std::string& text, const std::string& context = "repertoire") {
    const nlohmann::json doc = jsonio::parse(text, context);
    if (!doc.is_array()) throw ParseError(context + ": expected a JSON array of receptors");
    if (doc.empty()) throw ParseError(context + ": at least one receptor is required");

    Repertoire rep;
    std::set<std::string> seen;
    for (const auto& entry : doc) {
        Receptor r;
        r.name = jsonio::field_as<std::string>(entry, "name", context);
        const std::string entry_ctx = context + ": receptor \"" + r.name + "\"";
        r.pattern = jsonio::field_as<std::string>(entry, "pattern", entry_ctx);
        if (r.pattern.empty()) throw ParseError(entry_ctx + ": pattern is empty");
        r.mode = entry.contains("mode")
                     ? detail::parse_match_mode(jsonio::field_as<std::string>(entry, "mode", entry_ctx), entry_ctx)
                     : MatchMode::prefix;
        if (!seen.insert(r.name).second)
            throw ParseError(context + ": duplicate receptor name \"" + r.name + "\"");
        rep.receptors.push_back(std::move(r));
    }
    return rep;
}

inline Repertoire load_repertoire(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open repertoire file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_repertoire(buf.str(), path.filename().string());
}

inline std::string repertoire_to_json(const Repertoire& rep) {
    std::string out = "[\n";
    for (std::size_t k = 0; k < rep.receptors.size(); ++k) {
        const Receptor& r = rep.receptors[k];
        out += "{\"name\":" + jsonio::quoted(r.name) + ",\"pattern\":" + jsonio::quoted(r.pattern) +
               ",\"mode\":\"" + detail::match_mode_name(r.mode) + "\"}";
        out += k + 1 < rep.receptors.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

/// Evaluates every receptor against a record: bit k is set when some token
/// matches receptor k, or when its optional feature predicate accepts x.
/// The default configuration has no feature predicates, so matching uses
/// the token set only.  An empty token set activates nothing.
inline ActivationVector match_tlrs(const SideInfo& s, const Repertoire& e,
                                   const FeatureVector& x = {},
                                   const std::vector<FeaturePredicate>& feature_predicates = {}) {
    if (!feature_predicates.empty() && feature_predicates.size() != e.size())
        throw std::invalid_argument("match_tlrs: one feature predicate per receptor required");

    ActivationVector bits(e.size(), 0);
    for (std::size_t k = 0; k < e.size(); ++k) {
        for (const std::string& token : s.tokens) {
            if (receptor_matches(e.receptors[k], token)) {
                bits[k] = 1;
                break;
            }
        }
        if (!bits[k] && !feature_predicates.empty() && feature_predicates[k] &&
            feature_predicates[k](x))
            bits[k] = 1;
    }
    return bits;
}

/// Elementwise Boolean OR; the result bitwise-dominates the prior state.
inline ActivationVector update_tlr_state(const ActivationVector& state,
                                         const ActivationVector& activation) {
    if (state.size() != activation.size())
        throw std::invalid_argument("update_tlr_state: vector lengths differ");
    ActivationVector out(state.size());
    for (std::size_t k = 0; k < state.size(); ++k) out[k] = (state[k] || activation[k]) ? 1 : 0;
    return out;
}

/// One observation: measured features plus optional symbolic tokens.
struct InputRecord {
    std::string id;
    FeatureVector x;
    SideInfo s;

    friend bool operator==(const InputRecord&, const InputRecord&) = default;
};

/// Fused training with a step hook.  Runs the ordinary training loop; after
/// each update the winner additionally ORs in the record's activation vector
/// and bumps its per-receptor activation counts.  Prototypes and win counts
/// come out identical to plain training under the same seed, since the
/// receptor step never feeds back into the update rule.
template <typename OnStep>
void fused_train_with(SomMap& map, const std::vector<InputRecord>& records, const Repertoire& e,
                      const TrainingSchedule& schedule, OnStep&& on_step) {
    const std::size_t m = e.size();
    if (map.tlr_count != 0 && map.tlr_count != m)
        throw std::invalid_argument("fused_train: repertoire has " + std::to_string(m) +
                                    " receptors, map expects " + std::to_string(map.tlr_count));
    if (map.tlr_count == 0) {
        map.tlr_count = m;
        for (Node& node : map.nodes) {
            node.tlr_state.assign(m, 0);
            node.activation_counts.assign(m, 0);
        }
    }

    // Token sets never change during training, so activations are computed
    // once per record.
    std::vector<ActivationVector> activations;
    std::vector<FeatureVector> inputs;
    activations.reserve(records.size());
    inputs.reserve(records.size());
    for (const InputRecord& r : records) {
        inputs.push_back(r.x);
        activations.push_back(match_tlrs(r.s, e));
    }

    train_with(map, inputs, schedule, [&](std::size_t t, std::size_t idx, LatticeCoord winner) {
        Node& node = map.at(winner);
        const ActivationVector& a = activations[idx];
        for (std::size_t k = 0; k < m; ++k) {
            if (a[k]) {
                node.tlr_state[k] = 1;
                node.activation_counts[k] += 1;
            }
        }
        on_step(t, idx, winner);
    });
}

/// Training plus receptor-state accumulation on winner nodes.
inline SomMap fused_train(SomMap map, const std::vector<InputRecord>& records, const Repertoire& e,
                          const TrainingSchedule& schedule) {
    fused_train_with(map, records, e, schedule, [](std::size_t, std::size_t, LatticeCoord) {});
    return map;
}

} // namespace storm
