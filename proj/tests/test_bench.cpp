#include "anchorplan/bench.hpp"
#include "anchorplan/config.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace anchorplan;

namespace {

RunConfig tiny_config() {
    RunConfig config = default_config();
    config.episodes = 3;
    config.seeds = {0, 1};
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Stateful wrapper that perturbs its output after every render; the
// path-independence probe must flag it.
class DriftingOracle : public WorldModel {
public:
    explicit DriftingOracle(Scene scene) : inner_(std::move(scene)) {}

    Frame render(const Pose& c2w) const override {
        Frame frame = inner_.render(c2w);
        auto& geo = std::get<GeometricFrame>(frame);
        geo.ee_position.x += static_cast<double>(renders_++) * 1e-9;
        return frame;
    }
    Frame render_masked(const Pose& c2w, std::span<const std::string> hidden) const override {
        (void)hidden;
        return render(c2w);
    }
    ReferenceLatent encode(const Frame& frame) const override { return inner_.encode(frame); }
    std::string_view name() const override { return "drifting"; }

private:
    GeometricOracle inner_;
    mutable long renders_ = 0;
};

} // namespace

TEST_CASE("config files parse with overrides and strict keys") {
    const std::string path = "/tmp/anchorplan_test_config.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "episodes = 4\n";
        out << "task.a = 0.5 0.1 0.2   # trailing comment\n";
        out << "seeds = 3,4,5\n";
        out << "scorer = flat\n";
    }
    const RunConfig config = load_config_file(path);
    CHECK(config.episodes == 4);
    CHECK(config.task_a == Vec3{0.5, 0.1, 0.2});
    CHECK(config.seeds == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(config.scorer == "flat");

    RunConfig base = default_config();
    CHECK_THROWS_AS(set_config_key(base, "not_a_key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_key(base, "episodes", "many"), std::invalid_argument);
    CHECK_THROWS_AS(set_config_key(base, "task.a", "1 2"), std::invalid_argument);

    set_config_key(base, "depth", "3");
    CHECK(base.depth == 3);
}

TEST_CASE("config validation catches unresolvable names") {
    RunConfig config = default_config();
    config.seeds = {1, 1};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = default_config();
    config.scorer = "vlm";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = default_config();
    config.variants = {"greedy", "dream"};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = default_config();
    config.memory_source = "psychic";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("aggregation implements the documented column definitions") {
    std::vector<RawRow> raw;
    // variant v, seed 0: episode 0 all-success, episode 1 all-fail
    for (int step = 1; step <= 5; ++step) raw.push_back({"greedy", 0, 0, step, true, 0.01});
    for (int step = 1; step <= 5; ++step) raw.push_back({"greedy", 0, 1, step, false, 0.5});
    // seed 1: steps 1-3 succeed, steps 4-5 fail, both episodes
    for (int episode = 0; episode < 2; ++episode)
        for (int step = 1; step <= 5; ++step)
            raw.push_back({"greedy", 1, episode, step, step <= 3, 0.2});

    const AblationReport report = aggregate(std::move(raw), {"greedy"}, {0, 1}, 2);
    REQUIRE(report.rows.size() == 1);
    const VariantRow& row = report.rows[0];
    // seed 0 non-mem: 3/6; seed 1 non-mem: 6/6 -> mean 0.75
    CHECK(row.non_mem_sr_mean == doctest::Approx(0.75).epsilon(1e-15));
    // seed 0 memory: 2/4; seed 1 memory: 0/4 -> mean 0.25
    CHECK(row.memory_sr_mean == doctest::Approx(0.25).epsilon(1e-15));
    // sample std over {0.5, 1.0} = sqrt(0.125)
    CHECK(row.non_mem_sr_std == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
    CHECK(row.step5_sr == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_FALSE(row.delta_vs_greedy.has_value());   // greedy row carries no delta
}

TEST_CASE("csv round-trip reproduces every aggregate exactly") {
    RunConfig config = tiny_config();
    const AblationReport report = run_ablation(config);

    std::stringstream csv;
    write_raw_csv(report, csv);
    std::vector<RawRow> parsed = read_raw_csv(csv);
    REQUIRE(parsed.size() == report.raw.size());

    const AblationReport recomputed =
        aggregate(std::move(parsed), config.variants, config.seeds, config.episodes);
    REQUIRE(recomputed.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(recomputed.rows[i].non_mem_sr_mean == report.rows[i].non_mem_sr_mean);
        CHECK(recomputed.rows[i].non_mem_sr_std == report.rows[i].non_mem_sr_std);
        CHECK(recomputed.rows[i].memory_sr_mean == report.rows[i].memory_sr_mean);
        CHECK(recomputed.rows[i].memory_sr_std == report.rows[i].memory_sr_std);
        CHECK(recomputed.rows[i].step5_sr == report.rows[i].step5_sr);
        CHECK(recomputed.rows[i].per_step_sr == report.rows[i].per_step_sr);
        CHECK(recomputed.rows[i].delta_vs_greedy == report.rows[i].delta_vs_greedy);
    }
}

TEST_CASE("ablation outputs are byte-stable under any worker count") {
    RunConfig config = tiny_config();

    config.jobs = 1;
    const AblationReport serial = run_ablation(config);
    config.jobs = 4;
    const AblationReport parallel = run_ablation(config);

    std::stringstream csv_a, csv_b, json_a, json_b;
    write_raw_csv(serial, csv_a);
    write_raw_csv(parallel, csv_b);
    write_report_json(serial, json_a);
    write_report_json(parallel, json_b);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(json_a.str() == json_b.str());
    CHECK(render_chart_svg(serial) == render_chart_svg(parallel));
}

TEST_CASE("single-seed aggregation reports zero seed-level spread") {
    std::vector<RawRow> raw;
    for (int step = 1; step <= 5; ++step) raw.push_back({"greedy", 0, 0, step, step == 1, 0.3});
    const AblationReport report = aggregate(std::move(raw), {"greedy"}, {0}, 1);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].non_mem_sr_std == 0.0);
    CHECK(report.rows[0].memory_sr_std == 0.0);
}

TEST_CASE("chart shows the collapse-to-zero series for a memoryless variant") {
    std::vector<RawRow> raw;
    for (int step = 1; step <= 5; ++step) raw.push_back({"greedy", 0, 0, step, step <= 3, 0.1});
    const AblationReport report = aggregate(std::move(raw), {"greedy"}, {0}, 1);
    const std::string svg = render_chart_svg(report);
    // steps 4 and 5 sit on the zero line (chart bottom, y = 40 + 310)
    CHECK(svg.find("350.00 ") != std::string::npos);
    CHECK(svg.find(",350.00\"") != std::string::npos);
}

TEST_CASE("emit_chart leaves no file behind on invalid input") {
    const std::string path = "/tmp/anchorplan_no_chart.svg";
    std::filesystem::remove(path);
    AblationReport empty;
    CHECK_THROWS_AS(emit_chart(empty, path), std::invalid_argument);
    CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("chart rendering is deterministic and validates its input") {
    RunConfig config = tiny_config();
    config.variants = {"greedy"};
    const AblationReport report = run_ablation(config);
    const std::string svg = render_chart_svg(report);
    CHECK(svg == render_chart_svg(report));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("greedy") != std::string::npos);

    AblationReport empty;
    CHECK_THROWS_AS((void)render_chart_svg(empty), std::invalid_argument);

    const std::string path = "/tmp/anchorplan_chart_test.svg";
    emit_chart(report, path);
    CHECK(slurp(path) == svg);
    std::filesystem::remove(path);
}

TEST_CASE("path-independence probe accepts pure oracles and flags a drifting one") {
    const RunConfig config = default_config();
    const KinematicChain chain = reference_chain_3dof();

    GeometricOracle pure(config.make_scene(), {}, config.absent_sentinel);
    CHECK(render_path_independent(pure, chain, 5, 50));

    DriftingOracle mutant(config.make_scene());
    CHECK_FALSE(render_path_independent(mutant, chain, 5, 50));
}

TEST_CASE("phase0 passes for both oracles in well under the time budget") {
    const Phase0Report report = verify_phase0(default_config());
    CHECK(report.pass);
    REQUIRE(report.oracles.size() == 2);
    CHECK(report.oracles[0].bit_identical);
    CHECK(report.oracles[1].bit_identical);
    CHECK(report.seconds < 5.0);
}

TEST_CASE("phase1 reports a zero kinematic bridge error and unit monotonicity") {
    const Phase1Report report = verify_phase1(default_config());
    CHECK(report.angular_pass);
    CHECK(report.max_angular_error_rad <= 1e-12);
    CHECK(report.monotonicity_pass);
    CHECK(report.monotonicity_value == 1.0);
    CHECK_FALSE(report.monotonicity_degenerate);
    CHECK(report.pass);
    CHECK(report.median_fk_latency_ms > 0.0);
}

TEST_CASE("rotation product oracle agrees with forward kinematics") {
    const KinematicChain chain = reference_chain_3dof();
    const JointConfig q{0.7, -1.1, 2.2};
    const Pose fk = forward_kinematics(q, chain);
    const Mat3 oracle_rotation = rotation_product_oracle(q, chain);
    CHECK(angular_distance(fk, Pose{oracle_rotation, fk.translation}) < 1e-12);
    CHECK_THROWS_AS((void)rotation_product_oracle({0.1}, chain), std::invalid_argument);
}

TEST_CASE("flat-scorer regression shows pure exploration") {
    const FlatRegressionReport report = regression_flat_scorer(default_config());
    CHECK(report.pass);
    CHECK(report.max_visit_spread <= 1);
    CHECK(report.returned_q_max == 0.0);
    REQUIRE(report.root_visits.size() == 4);
    int total = 0;
    for (int v : report.root_visits) total += v;
    CHECK(total == default_config().budget_nodes);
}

TEST_CASE("exact scorer concentrates visits unlike the flat regime") {
    // contrast case: same planner setup, informative scorer
    const RunConfig config = default_config();
    const KinematicChain chain = reference_chain_3dof();
    GeometricOracle oracle(config.make_scene(), {}, config.absent_sentinel);
    const ExactNodeScorer exact;
    SamplerConfig sampler_config{config.action_bound, false, 64, 1e-5, true};
    BallActionSampler sampler(sampler_config, 0x8f2cull);
    SearchTree tree(JointConfig(chain.dof(), 0.1), chain);
    const Goal goal{config.task_a, "A"};
    PlanParams params = config.make_plan_params();
    params.depth_limit = 2;
    (void)plan(tree, goal, oracle, exact, chain, sampler, params);
    int min_visits = 1 << 20, max_visits = 0;
    for (const TreeNode& child : tree.root().children) {
        min_visits = std::min(min_visits, child.visits);
        max_visits = std::max(max_visits, child.visits);
    }
    CHECK(max_visits > min_visits + 1);
}

TEST_CASE("demo tree dumps are deterministic") {
    const RunConfig config = default_config();
    std::ostringstream first, second;
    dump_demo_tree(config, 0, 3, first);
    dump_demo_tree(config, 0, 3, second);
    CHECK(first.str() == second.str());
    CHECK(first.str().find("# id parent_id depth visits q_max tx ty tz") == 0);
}
