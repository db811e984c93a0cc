#pragma once

#include "anchorplan/config.hpp"
#include "anchorplan/env.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anchorplan {

// One line of the raw CSV: variant,seed,episode,step,success,final_distance_m
struct RawRow {
    std::string variant;
    std::uint64_t seed = 0;
    int episode = 0;
    int step = 0;
    bool success = false;
    double final_distance = 0.0;
};

struct VariantRow {
    std::string variant;
    double non_mem_sr_mean = 0.0;            // steps 1-3
    double non_mem_sr_std = 0.0;             // sample std over per-seed means
    double memory_sr_mean = 0.0;             // steps 4-5
    double memory_sr_std = 0.0;
    std::optional<double> delta_vs_greedy;   // memory SR mean difference
    double step5_sr = 0.0;
    std::array<double, 5> per_step_sr{};
    double non_mem_sr_std_episodes = 0.0;    // std over per-episode means, for transparency
    double memory_sr_std_episodes = 0.0;
};

struct AblationReport {
    std::vector<VariantRow> rows;
    std::vector<RawRow> raw;
    std::vector<std::uint64_t> seeds;
    int episodes = 0;
    std::string oracle;
    std::string scorer;
    std::string memory_source;
    bool blend_active = false;
    std::string std_convention = "per-seed means, sample std over seeds";
};

// Runs every (variant, seed, episode) cell, fanning out to `jobs` workers.
// Aggregation is keyed on cell indices, so output bytes never depend on the
// worker count.
AblationReport run_ablation(const RunConfig& config);

// The one aggregation path: both run_ablation and the CSV round-trip checks
// go through here, so recomputing a report row from the raw CSV reproduces
// it exactly.
AblationReport aggregate(std::vector<RawRow> raw, const std::vector<std::string>& variant_order,
                         const std::vector<std::uint64_t>& seeds, int episodes);

void write_raw_csv(const AblationReport& report, std::ostream& out);
std::vector<RawRow> read_raw_csv(std::istream& in);
void write_report_json(const AblationReport& report, std::ostream& out);

// Per-step SR chart (SVG), steps 4-5 shaded as the memory-required region.
// Pure function of the report; throws std::invalid_argument on an empty
// report and std::runtime_error on an unwritable path.
void emit_chart(const AblationReport& report, const std::string& path);
std::string render_chart_svg(const AblationReport& report);

struct Phase0Report {
    struct OracleResult {
        std::string oracle;
        int trajectories = 0;
        bool bit_identical = false;
    };
    std::vector<OracleResult> oracles;
    double seconds = 0.0;
    bool pass = false;
};

// Renders a fixed probe pose before and after each of five scripted
// trajectories and requires bit-identical frames.
Phase0Report verify_phase0(const RunConfig& config);

// Core probe shared with the negative-control tests: true iff the probe
// render is unchanged by interleaved trajectory renders.
bool render_path_independent(const WorldModel& oracle, const KinematicChain& chain,
                             int trajectories, int waypoints_per_trajectory);

struct Phase1Report {
    double max_angular_error_rad = 0.0;
    bool angular_pass = false;          // max error within 1e-9 rad over 100 configs
    double median_fk_latency_ms = 0.0;
    double latency_budget_ms = 1.0;     // reported, never a hard gate
    double monotonicity_value = 0.0;
    bool monotonicity_degenerate = false;
    bool monotonicity_pass = false;     // exactly 1.0
    bool pass = false;                  // angular && monotonicity
};

Phase1Report verify_phase1(const RunConfig& config);

// Independent rotation route for the kinematic bridge check: accumulates the
// chain's joint rotations as quaternions and converts once at the end.
Mat3 rotation_product_oracle(const JointConfig& q, const KinematicChain& chain);

struct FlatRegressionReport {
    std::vector<int> root_visits;
    int max_visit_spread = 0;     // max - min over root children
    double returned_q_max = 0.0;  // q_max of the selected child
    bool pass = false;            // spread <= 1 and returned_q_max == 0
};

// plan() with the flat scorer on one reach step: UCB1 must reduce to pure
// exploration (sibling visits within 1) and the returned action's value
// stays at zero.
FlatRegressionReport regression_flat_scorer(const RunConfig& config);

// Runs `actions` plan/advance cycles of a planner on step 1 of the task and
// dumps the resulting tree.
void dump_demo_tree(const RunConfig& config, std::uint64_t seed, int actions, std::ostream& out);

} // namespace anchorplan
