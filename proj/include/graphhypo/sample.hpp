#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace graphhypo {

enum class SamplerKind {
    RNS,
    DBS,
    PRBS,
    RES,
    SRW,
    FrontierS,
    NBRW,
    RWR,
    MHRW,
    CNARW,
    CommunitySES,
    SBS,
    FFS,
    ShortestPathS,
    PHASE,
    PHASE_OPT,
    GroundTruth,
};

// Estimator dispatch family. Expansion-style samplers traverse edges and are
// treated like walks; GroundTruth samples behave like a full edge traversal.
enum class SamplerFamily { NodeSet, EdgeSet, Walk };

inline SamplerFamily sampler_family(SamplerKind k) {
    switch (k) {
        case SamplerKind::RNS:
        case SamplerKind::DBS:
        case SamplerKind::PRBS:
            return SamplerFamily::NodeSet;
        case SamplerKind::RES:
        case SamplerKind::GroundTruth:
            return SamplerFamily::EdgeSet;
        default:
            return SamplerFamily::Walk;
    }
}

inline std::string_view sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::RNS: return "rns";
        case SamplerKind::DBS: return "dbs";
        case SamplerKind::PRBS: return "prbs";
        case SamplerKind::RES: return "res";
        case SamplerKind::SRW: return "srw";
        case SamplerKind::FrontierS: return "frontier";
        case SamplerKind::NBRW: return "nbrw";
        case SamplerKind::RWR: return "rwr";
        case SamplerKind::MHRW: return "mhrw";
        case SamplerKind::CNARW: return "cnarw";
        case SamplerKind::CommunitySES: return "community-se";
        case SamplerKind::SBS: return "sbs";
        case SamplerKind::FFS: return "ffs";
        case SamplerKind::ShortestPathS: return "shortest-path";
        case SamplerKind::PHASE: return "phase";
        case SamplerKind::PHASE_OPT: return "phase-opt";
        case SamplerKind::GroundTruth: return "ground-truth";
    }
    return "?";
}

inline bool sampler_kind_from_name(std::string_view name, SamplerKind& out) {
    for (int k = int(SamplerKind::RNS); k <= int(SamplerKind::GroundTruth); ++k)
        if (sampler_name(SamplerKind(k)) == name) {
            out = SamplerKind(k);
            return true;
        }
    return false;
}

// One traversed edge in visit order; forward means the walk moved along the
// stored direction (src -> dst), so the arrival node is dst.
struct TraversalStep {
    std::uint32_t edge;
    bool forward;
};

struct SampleMeta {
    SamplerKind kind = SamplerKind::GroundTruth;
    SamplerFamily family = SamplerFamily::EdgeSet;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::uint64_t charged = 0;       // node visits charged against the budget
    std::uint64_t weight_evals = 0;  // neighbor-weight evaluations (PHASE family)
    std::uint64_t max_step_weight_evals = 0;
    std::uint64_t teleports = 0;
};

// Sampler output: node set, edge set, and the traversal sequence with
// repetition. Sets are kept sorted and unique.
struct SampledSubgraph {
    std::vector<std::uint32_t> nodes;
    std::vector<std::uint32_t> edges;
    std::vector<TraversalStep> sequence;
    SampleMeta meta;
};

}  // namespace graphhypo
