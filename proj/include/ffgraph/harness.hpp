// Verification driver and serializers: builds an instance from its key, runs
// the closed-form predictor against the brute-force oracle, diffs the results,
// sweeps instance grids deterministically, and emits JSON/CSV/DOT. Mismatches
// can be excused by a known-discrepancies file carrying theorem tags.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffgraph/census.hpp"
#include "ffgraph/orbits.hpp"

namespace ffgraph {

struct InstanceKey {
    std::uint32_t p = 0;
    std::uint32_t s = 0;
    std::uint64_t n = 0;
    std::uint32_t a = 0;  // canonical element index
    std::uint32_t c = 0;
    std::string modulus;       // comma-separated coefficients; empty = canonical
    std::uint32_t b = 0;       // nonresidue index; 0 = canonical
    std::uint32_t generator = 0;  // 0 = canonical

    auto tied() const { return std::tie(p, s, n, a, c, modulus, b, generator); }
    bool operator<(const InstanceKey& o) const { return tied() < o.tied(); }
    bool operator==(const InstanceKey& o) const { return tied() == o.tied(); }
};

std::string key_to_string(const InstanceKey& key);

// Full per-instance payload, attached to results on demand.
struct InstanceDetail {
    Prediction predicted;
    GraphReport observed;
};

struct VerifyResult {
    InstanceKey key;
    bool census_match = false;
    bool tree_match = false;
    bool zero_match = false;
    bool audit_ok = false;
    std::vector<std::array<std::string, 3>> diffs;  // (field, predicted, observed)
    std::vector<std::string> mismatch_tags;         // theorem tags touched by diffs
    bool excused = false;                           // set by sweep when known covers all tags
    std::shared_ptr<const InstanceDetail> detail;

    bool all_match() const { return census_match && tree_match && zero_match; }
};

// Builds field/extension from the key (resolving canonical defaults into the
// returned key), runs predictor and oracle, and diffs. with_detail attaches
// the full payloads.
VerifyResult verify_instance(const InstanceKey& key, bool with_detail = true,
                             std::uint32_t field_cap = kDefaultFieldCap);

// (key -> tags) parsed from the known-discrepancies file.
using KnownSet = std::map<InstanceKey, std::set<std::string>>;

KnownSet load_known_discrepancies(const std::string& path);
// One line per (unexcused) mismatching (key, tag) of the given results.
void write_known_discrepancies(const std::string& path, const std::vector<VerifyResult>& results);

struct SweepSpec {
    std::vector<std::uint32_t> p_list{3, 5, 7, 11, 13};
    std::vector<std::uint32_t> s_list{1, 2};
    std::uint64_t n_min = 2;
    std::uint64_t n_max = 7;
    std::uint32_t q_cap = 169;     // fields with q beyond this are skipped
    std::uint64_t sample_k = 0;    // 0 = all coefficient pairs
    std::uint64_t seed = 0;        // sample selection seed
    bool with_detail = false;      // attach payloads (needed for JSON/CSV emission)
    bool check_dual = true;        // accumulate direct-vs-coords disagreements
    bool check_indegree = true;    // accumulate preimage-size lemma violations
};

struct SweepSummary {
    std::uint64_t instances = 0;
    std::uint64_t matched = 0;
    std::uint64_t excused = 0;
    std::uint64_t unexplained = 0;
    std::map<std::string, std::uint64_t> match_by_tag;
    std::map<std::string, std::uint64_t> mismatch_by_tag;
    std::uint64_t dual_mismatch_nodes = 0;
    std::uint64_t indegree_violations = 0;
    std::uint64_t tau0_statement_divergences = 0;  // informational
    double elapsed_seconds = 0.0;
};

struct SweepOutcome {
    std::vector<VerifyResult> results;  // sorted by key
    SweepSummary summary;
};

SweepOutcome sweep(const SweepSpec& spec, const KnownSet& known = {});

// Support of the preimage-size histogram over nonzero targets.
std::set<std::uint64_t> nonzero_indegree_support(const SuccessorMap& sm);

struct DotOptions {
    std::optional<std::uint32_t> component_of;  // keep only the component of this node
};

// Stable DOT text; labels are "x+y*B" when the node count is a perfect square,
// raw indices otherwise.
std::string render_dot(const SuccessorMap& sm, const DotOptions& opt = {});

// JSON (one document per instance) and/or CSV (one row per instance); results
// must carry detail. Empty path = skip that format.
void emit_reports(const std::vector<VerifyResult>& results, const std::string& json_path,
                  const std::string& csv_path);

std::string render_json(const std::vector<VerifyResult>& results);
std::string render_csv(const std::vector<VerifyResult>& results);

}  // namespace ffgraph
