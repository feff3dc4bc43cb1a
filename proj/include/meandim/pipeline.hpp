#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meandim/embedding.hpp"

namespace meandim {

struct PipelineConfig {
    int k = 1;
    int m = 3;
    Rational eta = Rational(1, 16);
    Rational delta = Rational(1, 8);
    int castle_level = 4;  // odometer castle rank
    InvarianceParams invariance{FiniteWindow{-1, 0, 1}, Rational(1, 8)};
    SampleSpec sample{1, 1, 200, 2, 4, Rational(1, 16)};
    std::uint64_t seed = 1;
    int max_tries = 64;
    long window_radius = 16;  // verification window [-radius, radius]
    long mdim_check_n = 32;   // Folner length for the hypothesis estimate
};

/// The demo base map family: up to three outputs reading u_0, the Cantor
/// coding of the odometer coordinate, and a neighbor blend, over the feature
/// basis of radius 1.
BaseMap make_demo_base_map(int k, int m);

struct PipelineError : std::runtime_error {
    PipelineError(std::string stage_, const std::string& what)
        : std::runtime_error(stage_ + ": " + what), stage(std::move(stage_)) {}
    std::string stage;
};

struct PipelineResult {
    BaseMap f0;
    Rational epsilon;  // calibrated
    GluedMap map;
    EmbeddingCertificate certificate;
    std::vector<PerturbResult> tower_results;

    // hypothesis checks: logged, not enforced
    bool hypothesis_mdim_ok = false;      // normalized widim estimate < m/2
    Rational mdim_estimate;
    bool per_shape_verified = false;      // widim upper bound < |S_i| m/2 everywhere

    // the certified chain
    bool per_tower_certified = false;     // (a)
    bool gluing_identity_ok = false;      // (b)
    bool close_to_f0 = false;             // (c) sup |f - f0| < delta on sample
    bool separates_fibers = false;        // (d)
    bool margin_positive = false;         // (e)
    long same_fiber_pairs = 0;

    std::vector<std::string> report;

    bool certified() const {
        return per_tower_certified && gluing_identity_ok && close_to_f0 && separates_fibers &&
               margin_positive;
    }
};

/// The full construction: calibrate epsilon from the base map, build and
/// verify the odometer castle, pull it back, search per-tower block maps,
/// glue, and verify the eta-embedding on the sample. Throws PipelineError
/// with the failing stage on any uncertified step; hypothesis checks are
/// reported but never abort.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace meandim
