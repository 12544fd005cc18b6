#pragma once

/// JSON rendering for the result types. Reports are nlohmann ordered_json so
/// key order is insertion order and the serialized text is deterministic.
/// Exact rationals are emitted as {"fraction": "a/b", "decimal": "..."}: the
/// fraction is authoritative, the decimal is a convenience rounding.

#include <chrono>
#include <string>

#include <json.hpp>

#include "cremona/cremona.hpp"
#include "cremona/dyndeg.hpp"
#include "cremona/findyn.hpp"
#include "cremona/version.hpp"

namespace cremona {

using Json = nlohmann::ordered_json;

inline const char* to_string(SeqTermination t) {
    switch (t) {
        case SeqTermination::Completed: return "completed";
        case SeqTermination::TermCapHit: return "term-cap-hit";
        case SeqTermination::MapDegenerated: return "map-degenerated";
    }
    return "?";
}

inline const char* to_string(InverseCheck c) {
    switch (c) {
        case InverseCheck::Unknown: return "unknown";
        case InverseCheck::Verified: return "verified";
        case InverseCheck::Failed: return "failed";
    }
    return "?";
}

inline const char* to_string(StabilityKind k) {
    switch (k) {
        case StabilityKind::StableUpTo: return "stable-up-to";
        case StabilityKind::UnstableAt: return "unstable-at";
        case StabilityKind::StableProven: return "stable-proven";
    }
    return "?";
}

inline Json json_rat(const Rat& q, int frac_digits = 12) {
    Json j;
    j["fraction"] = q.get_num().get_str() + "/" + q.get_den().get_str();
    j["decimal"] = decimal_string(q, frac_digits);
    return j;
}

inline Json json_degree_sequence(const DegreeSequence& seq) {
    Json j;
    j["source"] = seq.source;
    j["degrees"] = seq.degrees;
    j["termination"] = to_string(seq.termination);
    if (seq.termination != SeqTermination::Completed) j["stopped_at"] = seq.stopped_at;
    return j;
}

inline Json json_bounds(const Lambda1Bounds& b) {
    Json rows = Json::array();
    for (const auto& e : b.entries) {
        Json r;
        r["n"] = e.n;
        r["lower"] = e.lower ? json_rat(*e.lower) : Json(nullptr);
        r["upper"] = json_rat(e.upper);
        r["tag"] = to_string(e.tag);
        rows.push_back(std::move(r));
    }
    Json j;
    j["entries"] = std::move(rows);
    j["best_lower"] = b.best_lower ? json_rat(*b.best_lower) : Json(nullptr);
    j["best_upper"] = b.best_upper ? json_rat(*b.best_upper) : Json(nullptr);
    return j;
}

inline Json json_root_bracket(const RootBracket& r) {
    Json j;
    j["lo"] = json_rat(r.lo, 15);
    j["hi"] = json_rat(r.hi, 15);
    return j;
}

inline Json json_growth(const GrowthClass& g) {
    Json j;
    j["kind"] = to_string(g.kind);
    j["coefficient"] = g.coefficient;
    j["note"] = g.note;
    return j;
}

inline Json json_reduction(const ReductionReport& r) {
    Json j;
    j["p"] = r.p;
    j["degree_before"] = r.degree_before;
    j["degree_after"] = r.degree_after;
    j["inverse"] = to_string(r.birational_verified);
    j["notes"] = r.notes;
    return j;
}

template <class Ring>
Json json_point(const Ring& R, const ProjPoint<Ring>& p) {
    Json j = Json::array();
    for (const auto& c : p.c) j.push_back(R.to_string(c));
    return j;
}

template <class Ring>
Json json_stability(const Ring& R, const StabilityVerdict<Ring>& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["n"] = v.n;
    Json orbit = Json::array();
    for (const auto& p : v.witness) orbit.push_back(json_point(R, p));
    j["witness_orbit"] = std::move(orbit);
    return j;
}

template <class Ring>
Json json_census_entry(const Ring& R, const CensusEntry<Ring>& e) {
    Json j;
    j["coords"] = json_point(R, e.point);
    j["period"] = e.period;
    j["critical"] = e.critical;
    return j;
}

template <class Ring>
Json json_census(const Ring& R, const std::vector<CensusEntry<Ring>>& entries) {
    Json j = Json::array();
    for (const auto& e : entries) j.push_back(json_census_entry(R, e));
    return j;
}

/// One compact JSON object per line: the streaming export of a census.
template <class Ring>
std::string census_jsonl(const Ring& R, const std::vector<CensusEntry<Ring>>& entries) {
    std::string out;
    for (const auto& e : entries) {
        out += json_census_entry(R, e).dump();
        out += '\n';
    }
    return out;
}

template <class Ring>
Json json_density(const Ring& R, const DensityReport<Ring>& d) {
    Json j;
    j["point_count"] = d.point_count;
    j["degree"] = d.degree;
    j["monomials"] = d.monomials;
    j["rank"] = d.rank;
    j["contained"] = d.contained;
    j["curve"] = d.curve ? Json(hp_to_string(R, *d.curve)) : Json(nullptr);
    return j;
}

inline Json json_sweep(const SweepStats& s) {
    Json j;
    j["trials"] = s.trials;
    j["horizon"] = s.horizon;
    j["seed"] = s.seed;
    j["base_degree"] = s.base_degree;
    j["full_growth"] = s.full_growth;
    j["fraction"] = s.fraction;
    return j;
}

template <class Ring>
Json json_orbit(const Ring& R, const OrbitRecord<Ring>& o) {
    Json j;
    j["start"] = json_point(R, o.start);
    j["tail"] = o.tail;
    j["cycle"] = o.cycle;
    j["abort"] = to_string(o.abort);
    if (o.abort != OrbitAbort::None) j["abort_step"] = o.abort_step;
    j["critical"] = o.critical;
    return j;
}

/// Shell of a command report. Fill "inputs" and "results", then stamp the
/// elapsed time and render; everything except wall_time_ms is a pure function
/// of the inputs and seed.
inline Json report_new(const std::string& command, u64 seed) {
    Json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["inputs"] = Json::object();
    j["results"] = Json::object();
    j["wall_time_ms"] = 0.0;
    return j;
}

inline std::string report_render(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cremona
