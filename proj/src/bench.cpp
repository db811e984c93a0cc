#include "anchorplan/bench.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace anchorplan {

namespace {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

double sample_std(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double mean_of(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

} // namespace

AblationReport aggregate(std::vector<RawRow> raw, const std::vector<std::string>& variant_order,
                         const std::vector<std::uint64_t>& seeds, int episodes) {
    AblationReport report;
    report.raw = std::move(raw);
    report.seeds = seeds;
    report.episodes = episodes;

    const auto rows_of = [&](const std::string& variant, std::uint64_t seed) {
        std::vector<const RawRow*> rows;
        for (const RawRow& r : report.raw)
            if (r.variant == variant && r.seed == seed) rows.push_back(&r);
        return rows;
    };

    const auto sr_over = [](const std::vector<const RawRow*>& rows, int step_lo, int step_hi) {
        int hits = 0, total = 0;
        for (const RawRow* r : rows)
            if (r->step >= step_lo && r->step <= step_hi) {
                ++total;
                hits += r->success ? 1 : 0;
            }
        return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    };

    std::optional<double> greedy_memory_mean;
    for (const std::string& variant : variant_order) {
        VariantRow row;
        row.variant = variant;

        std::vector<double> non_mem_by_seed, memory_by_seed;
        std::array<std::vector<double>, 5> step_by_seed;
        std::vector<double> non_mem_by_episode, memory_by_episode;
        for (std::uint64_t seed : seeds) {
            const auto rows = rows_of(variant, seed);
            non_mem_by_seed.push_back(sr_over(rows, 1, 3));
            memory_by_seed.push_back(sr_over(rows, 4, 5));
            for (int step = 1; step <= 5; ++step)
                step_by_seed[static_cast<std::size_t>(step - 1)].push_back(
                    sr_over(rows, step, step));
            for (int episode = 0; episode < episodes; ++episode) {
                std::vector<const RawRow*> ep;
                for (const RawRow* r : rows)
                    if (r->episode == episode) ep.push_back(r);
                non_mem_by_episode.push_back(sr_over(ep, 1, 3));
                memory_by_episode.push_back(sr_over(ep, 4, 5));
            }
        }

        row.non_mem_sr_mean = mean_of(non_mem_by_seed);
        row.non_mem_sr_std = sample_std(non_mem_by_seed, row.non_mem_sr_mean);
        row.memory_sr_mean = mean_of(memory_by_seed);
        row.memory_sr_std = sample_std(memory_by_seed, row.memory_sr_mean);
        for (int step = 0; step < 5; ++step)
            row.per_step_sr[static_cast<std::size_t>(step)] =
                mean_of(step_by_seed[static_cast<std::size_t>(step)]);
        row.step5_sr = row.per_step_sr[4];
        row.non_mem_sr_std_episodes = sample_std(non_mem_by_episode, mean_of(non_mem_by_episode));
        row.memory_sr_std_episodes = sample_std(memory_by_episode, mean_of(memory_by_episode));

        if (variant == "greedy") greedy_memory_mean = row.memory_sr_mean;
        report.rows.push_back(std::move(row));
    }
    if (greedy_memory_mean.has_value()) {
        for (VariantRow& row : report.rows)
            if (row.variant != "greedy")
                row.delta_vs_greedy = row.memory_sr_mean - *greedy_memory_mean;
    }
    return report;
}

AblationReport run_ablation(const RunConfig& config) {
    config.validate();
    const EpisodeConfig episode_config = config.make_episode_config();

    struct Cell {
        VariantSpec variant;
        std::uint64_t seed;
        int episode;
    };
    std::vector<Cell> cells;
    for (const std::string& name : config.variants) {
        const VariantSpec variant = parse_variant(name);
        for (std::uint64_t seed : config.seeds)
            for (int episode = 0; episode < config.episodes; ++episode)
                cells.push_back(Cell{variant, seed, episode});
    }

    std::vector<EpisodeRecord> records(cells.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs) : hw;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load()) break;
            const Cell& cell = cells[i];
            try {
                records[i] = run_episode(cell.variant, cell.seed, cell.episode, episode_config);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                failure_message = "cell (" + cell.variant.name + ", seed " +
                                  std::to_string(cell.seed) + ", episode " +
                                  std::to_string(cell.episode) + "): " + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs && t < cells.size(); ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("run_ablation: " + failure_message);

    std::vector<RawRow> raw;
    raw.reserve(records.size() * 5);
    for (const EpisodeRecord& record : records) {
        for (int step = 1; step <= 5; ++step) {
            const StepOutcome& out = record.steps[static_cast<std::size_t>(step - 1)];
            raw.push_back(RawRow{record.variant, record.seed, record.episode, step, out.success,
                                 out.final_distance});
        }
    }

    AblationReport report = aggregate(std::move(raw), config.variants, config.seeds,
                                      config.episodes);
    report.oracle = config.oracle;
    report.scorer = config.scorer;
    report.memory_source = config.memory_source;
    report.blend_active = config.oracle == "pixel";
    return report;
}

void write_raw_csv(const AblationReport& report, std::ostream& out) {
    out << "variant,seed,episode,step,success,final_distance_m\n";
    for (const RawRow& r : report.raw) {
        out << r.variant << ',' << r.seed << ',' << r.episode << ',' << r.step << ','
            << (r.success ? 1 : 0) << ',' << format_double(r.final_distance, 6) << '\n';
    }
}

std::vector<RawRow> read_raw_csv(std::istream& in) {
    std::vector<RawRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_raw_csv: empty stream");
    if (line != "variant,seed,episode,step,success,final_distance_m")
        throw std::runtime_error("read_raw_csv: unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        RawRow row;
        std::string field;
        std::getline(ls, row.variant, ',');
        std::getline(ls, field, ',');
        row.seed = std::stoull(field);
        std::getline(ls, field, ',');
        row.episode = std::stoi(field);
        std::getline(ls, field, ',');
        row.step = std::stoi(field);
        std::getline(ls, field, ',');
        row.success = field == "1";
        std::getline(ls, field, ',');
        row.final_distance = std::stod(field);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report_json(const AblationReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["episodes"] = report.episodes;
    j["seeds"] = report.seeds;
    j["oracle"] = report.oracle;
    j["scorer"] = report.scorer;
    j["memory_source"] = report.memory_source;
    j["blend_active"] = report.blend_active;
    j["std_convention"] = report.std_convention;
    j["variants"] = nlohmann::ordered_json::array();
    for (const VariantRow& row : report.rows) {
        nlohmann::ordered_json v;
        v["variant"] = row.variant;
        v["non_mem_sr_mean"] = row.non_mem_sr_mean;
        v["non_mem_sr_std"] = row.non_mem_sr_std;
        v["memory_sr_mean"] = row.memory_sr_mean;
        v["memory_sr_std"] = row.memory_sr_std;
        if (row.delta_vs_greedy.has_value()) v["delta_vs_greedy"] = *row.delta_vs_greedy;
        else v["delta_vs_greedy"] = nullptr;
        v["step5_sr"] = row.step5_sr;
        v["per_step_sr"] = row.per_step_sr;
        v["non_mem_sr_std_episodes"] = row.non_mem_sr_std_episodes;
        v["memory_sr_std_episodes"] = row.memory_sr_std_episodes;
        j["variants"].push_back(std::move(v));
    }
    out << j.dump(2) << '\n';
}

namespace {

const char* variant_color(std::size_t index) {
    static const char* palette[] = {"#d1495b", "#00798c", "#edae49", "#6a4c93", "#2e6f40"};
    return palette[index % 5];
}

} // namespace

std::string render_chart_svg(const AblationReport& report) {
    if (report.rows.empty())
        throw std::invalid_argument("render_chart_svg: report has no variants");

    const double width = 640.0, height = 400.0;
    const double ml = 60.0, mr = 160.0, mt = 40.0, mb = 50.0;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    const auto x_of = [&](int step) {
        return ml + plot_w * (static_cast<double>(step) - 1.0) / 4.0;
    };
    const auto y_of = [&](double sr) { return mt + plot_h * (1.0 - sr); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
           "viewBox=\"0 0 640 400\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";

    // memory-required region: steps 4-5
    svg << "<rect x=\"" << format_double(x_of(4) - plot_w / 8.0, 2) << "\" y=\""
        << format_double(mt, 2) << "\" width=\""
        << format_double(plot_w / 4.0 + plot_w / 8.0, 2) << "\" height=\""
        << format_double(plot_h, 2) << "\" fill=\"#f5d78e\" fill-opacity=\"0.35\"/>\n";

    // axes and gridlines
    svg << "<line x1=\"" << format_double(ml, 2) << "\" y1=\"" << format_double(mt, 2)
        << "\" x2=\"" << format_double(ml, 2) << "\" y2=\"" << format_double(mt + plot_h, 2)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << format_double(ml, 2) << "\" y1=\"" << format_double(mt + plot_h, 2)
        << "\" x2=\"" << format_double(ml + plot_w, 2) << "\" y2=\""
        << format_double(mt + plot_h, 2) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double sr = static_cast<double>(tick) / 4.0;
        svg << "<line x1=\"" << format_double(ml - 4.0, 2) << "\" y1=\""
            << format_double(y_of(sr), 2) << "\" x2=\"" << format_double(ml, 2) << "\" y2=\""
            << format_double(y_of(sr), 2) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << format_double(ml - 8.0, 2) << "\" y=\""
            << format_double(y_of(sr) + 4.0, 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
            << format_double(sr, 2) << "</text>\n";
    }
    for (int step = 1; step <= 5; ++step) {
        svg << "<text x=\"" << format_double(x_of(step), 2) << "\" y=\""
            << format_double(mt + plot_h + 20.0, 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">step "
            << step << "</text>\n";
    }
    svg << "<text x=\"" << format_double(ml + plot_w / 2.0, 2) << "\" y=\"20\" "
        << "font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << "Per-step success rate (shaded: memory-required steps)</text>\n";

    for (std::size_t vi = 0; vi < report.rows.size(); ++vi) {
        const VariantRow& row = report.rows[vi];
        const char* color = variant_color(vi);
        std::ostringstream points;
        for (int step = 1; step <= 5; ++step) {
            if (step > 1) points << ' ';
            points << format_double(x_of(step), 2) << ','
                   << format_double(y_of(row.per_step_sr[static_cast<std::size_t>(step - 1)]), 2);
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << points.str() << "\"/>\n";
        for (int step = 1; step <= 5; ++step) {
            svg << "<circle cx=\"" << format_double(x_of(step), 2) << "\" cy=\""
                << format_double(y_of(row.per_step_sr[static_cast<std::size_t>(step - 1)]), 2)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = mt + 20.0 * static_cast<double>(vi);
        svg << "<line x1=\"" << format_double(ml + plot_w + 12.0, 2) << "\" y1=\""
            << format_double(ly, 2) << "\" x2=\"" << format_double(ml + plot_w + 36.0, 2)
            << "\" y2=\"" << format_double(ly, 2) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << format_double(ml + plot_w + 42.0, 2) << "\" y=\""
            << format_double(ly + 4.0, 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << row.variant << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_chart(const AblationReport& report, const std::string& path) {
    const std::string svg = render_chart_svg(report);   // validate before touching the file
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_chart: cannot open '" + path + "' for writing");
    out << svg;
    if (!out) throw std::runtime_error("emit_chart: write failed for '" + path + "'");
}

bool render_path_independent(const WorldModel& oracle, const KinematicChain& chain,
                             int trajectories, int waypoints_per_trajectory) {
    JointConfig probe(chain.dof(), 0.0);
    for (std::size_t i = 0; i < probe.size(); ++i)
        probe[i] = 0.3 + 0.1 * static_cast<double>(i);
    const Pose probe_pose = forward_kinematics(probe, chain);
    const Frame reference = oracle.render(probe_pose);

    Rng rng(0x9d5c0f2be1a7ull);
    for (int t = 0; t < trajectories; ++t) {
        for (int w = 0; w < waypoints_per_trajectory; ++w) {
            JointConfig q(chain.dof(), 0.0);
            for (std::size_t i = 0; i < q.size(); ++i)
                q[i] = rng.uniform(chain.links[i].limit_lo, chain.links[i].limit_hi);
            (void)oracle.render(forward_kinematics(q, chain));
        }
        if (!frames_equal(oracle.render(probe_pose), reference)) return false;
    }
    return true;
}

Phase0Report verify_phase0(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const KinematicChain chain = reference_chain_3dof();
    const Scene scene = config.make_scene();

    Phase0Report report;
    const GeometricOracle geometric(scene, OcclusionPolicy{}, config.absent_sentinel);
    report.oracles.push_back(Phase0Report::OracleResult{
        "geometric", 5, render_path_independent(geometric, chain, 5, 100)});
    const PixelOracle pixel(scene, config.pixel_width, config.pixel_height);
    report.oracles.push_back(Phase0Report::OracleResult{
        "pixel", 5, render_path_independent(pixel, chain, 5, 100)});

    report.pass = std::all_of(report.oracles.begin(), report.oracles.end(),
                              [](const auto& o) { return o.bit_identical; });
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

struct Quaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    static Quaternion from_axis_angle(const Vec3& axis, double angle) {
        const double h = 0.5 * angle;
        const double s = std::sin(h);
        return {std::cos(h), axis.x * s, axis.y * s, axis.z * s};
    }

    static Quaternion from_matrix(const Mat3& m) {
        Quaternion q;
        const double tr = m.trace();
        if (tr > 0.0) {
            const double s = std::sqrt(tr + 1.0) * 2.0;
            q.w = 0.25 * s;
            q.x = (m.at(2, 1) - m.at(1, 2)) / s;
            q.y = (m.at(0, 2) - m.at(2, 0)) / s;
            q.z = (m.at(1, 0) - m.at(0, 1)) / s;
        } else if (m.at(0, 0) > m.at(1, 1) && m.at(0, 0) > m.at(2, 2)) {
            const double s = std::sqrt(1.0 + m.at(0, 0) - m.at(1, 1) - m.at(2, 2)) * 2.0;
            q.w = (m.at(2, 1) - m.at(1, 2)) / s;
            q.x = 0.25 * s;
            q.y = (m.at(0, 1) + m.at(1, 0)) / s;
            q.z = (m.at(0, 2) + m.at(2, 0)) / s;
        } else if (m.at(1, 1) > m.at(2, 2)) {
            const double s = std::sqrt(1.0 + m.at(1, 1) - m.at(0, 0) - m.at(2, 2)) * 2.0;
            q.w = (m.at(0, 2) - m.at(2, 0)) / s;
            q.x = (m.at(0, 1) + m.at(1, 0)) / s;
            q.y = 0.25 * s;
            q.z = (m.at(1, 2) + m.at(2, 1)) / s;
        } else {
            const double s = std::sqrt(1.0 + m.at(2, 2) - m.at(0, 0) - m.at(1, 1)) * 2.0;
            q.w = (m.at(1, 0) - m.at(0, 1)) / s;
            q.x = (m.at(0, 2) + m.at(2, 0)) / s;
            q.y = (m.at(1, 2) + m.at(2, 1)) / s;
            q.z = 0.25 * s;
        }
        return q;
    }

    Mat3 to_matrix() const {
        Mat3 m;
        m.at(0, 0) = 1.0 - 2.0 * (y * y + z * z);
        m.at(0, 1) = 2.0 * (x * y - z * w);
        m.at(0, 2) = 2.0 * (x * z + y * w);
        m.at(1, 0) = 2.0 * (x * y + z * w);
        m.at(1, 1) = 1.0 - 2.0 * (x * x + z * z);
        m.at(1, 2) = 2.0 * (y * z - x * w);
        m.at(2, 0) = 2.0 * (x * z - y * w);
        m.at(2, 1) = 2.0 * (y * z + x * w);
        m.at(2, 2) = 1.0 - 2.0 * (x * x + y * y);
        return m;
    }
};

} // namespace

Mat3 rotation_product_oracle(const JointConfig& q, const KinematicChain& chain) {
    if (q.size() != chain.links.size())
        throw std::invalid_argument("rotation_product_oracle: dimension mismatch");
    Quaternion acc;
    for (std::size_t i = 0; i < q.size(); ++i)
        acc = acc * Quaternion::from_axis_angle(chain.links[i].axis, q[i]);
    acc = acc * Quaternion::from_matrix(chain.cam_offset.rotation);
    return acc.to_matrix();
}

Phase1Report verify_phase1(const RunConfig& config) {
    const KinematicChain chain = reference_chain_3dof();
    Phase1Report report;

    // (a) kinematic bridge vs the quaternion rotation-product route
    Rng rng(0x51a7e21bull);
    double max_error = 0.0;
    std::vector<JointConfig> configs;
    for (int i = 0; i < 100; ++i) {
        JointConfig q(chain.dof(), 0.0);
        for (std::size_t j = 0; j < q.size(); ++j)
            q[j] = rng.uniform(chain.links[j].limit_lo, chain.links[j].limit_hi);
        configs.push_back(q);
        const Pose fk = forward_kinematics(q, chain);
        const Pose oracle_pose{rotation_product_oracle(q, chain), fk.translation};
        max_error = std::max(max_error, angular_distance(fk, oracle_pose));
    }
    report.max_angular_error_rad = max_error;
    report.angular_pass = max_error <= 1e-9;

    // (b) FK latency, median over the same configurations (reported only)
    std::vector<double> latencies;
    latencies.reserve(configs.size());
    for (const JointConfig& q : configs) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 100; ++rep) (void)forward_kinematics(q, chain);
        const auto t1 = std::chrono::steady_clock::now();
        latencies.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count() / 100.0);
    }
    std::sort(latencies.begin(), latencies.end());
    report.median_fk_latency_ms = latencies[latencies.size() / 2];

    // (c) exact-scorer monotonicity over 100 random poses within 1 m of the goal
    const Scene scene = config.make_scene();
    const GeometricOracle oracle(scene, OcclusionPolicy{}, config.absent_sentinel);
    const Goal goal{config.task_a, "A"};
    std::vector<Pose> samples;
    while (samples.size() < 100) {
        Pose p;
        p.translation = Vec3{goal.position.x + rng.uniform(-0.6, 0.6),
                             goal.position.y + rng.uniform(-0.6, 0.6),
                             goal.position.z + rng.uniform(-0.6, 0.6)};
        if ((p.translation - goal.position).norm() < 1.0) samples.push_back(p);
    }
    const ExactNodeScorer exact;
    const MonotonicityResult mono = monotonicity(exact, oracle, samples, goal);
    report.monotonicity_value = mono.value;
    report.monotonicity_degenerate = mono.degenerate;
    report.monotonicity_pass = !mono.degenerate && mono.value == 1.0;

    report.pass = report.angular_pass && report.monotonicity_pass;
    return report;
}

FlatRegressionReport regression_flat_scorer(const RunConfig& config) {
    const KinematicChain chain = reference_chain_3dof();
    const Scene scene = config.make_scene();
    const GeometricOracle oracle(scene, OcclusionPolicy{}, config.absent_sentinel);
    const FlatNodeScorer flat;

    SamplerConfig sampler_config{config.action_bound, false, 64, 1e-5, true};
    BallActionSampler sampler(sampler_config, 0x8f2cull);

    SearchTree tree(JointConfig(chain.dof(), 0.1), chain);
    const Goal goal{config.task_a, "A"};
    PlanParams params = config.make_plan_params();
    params.depth_limit = 2;

    const Action chosen = plan(tree, goal, oracle, flat, chain, sampler, params);

    FlatRegressionReport report;
    int min_visits = std::numeric_limits<int>::max();
    int max_visits = 0;
    for (const TreeNode& child : tree.root().children) {
        report.root_visits.push_back(child.visits);
        min_visits = std::min(min_visits, child.visits);
        max_visits = std::max(max_visits, child.visits);
        if (child.action == chosen) report.returned_q_max = child.q_max;
    }
    report.max_visit_spread = max_visits - min_visits;
    report.pass = report.max_visit_spread <= 1 && report.returned_q_max == 0.0;
    return report;
}

void dump_demo_tree(const RunConfig& config, std::uint64_t seed, int actions, std::ostream& out) {
    const EpisodeConfig ec = config.make_episode_config();
    const KinematicChain& chain = ec.chain;
    const GeometricOracle oracle(ec.scene, OcclusionPolicy{}, ec.absent_sentinel);
    const std::unique_ptr<NodeScorer> scorer = make_scorer(ec.scorer, ec.scene, ec.ee_disc_radius);

    const std::uint64_t stream = cell_seed("dump-tree", seed, 0);
    Rng init_rng(splitmix64(stream));
    JointConfig q0(chain.dof(), 0.0);
    for (std::size_t i = 0; i < q0.size(); ++i)
        q0[i] = init_rng.uniform(ec.init_joint_lo, ec.init_joint_hi);

    BallActionSampler sampler(ec.planner_sampler, splitmix64(stream ^ 0x5bf03635ull));
    SearchTree tree(q0, chain);
    PlanParams params = config.make_plan_params();
    const Goal goal{ec.task.step_goal_position(1), ec.task.goal_target_id(1)};
    for (int i = 0; i < actions; ++i) {
        const Action action = plan(tree, goal, oracle, *scorer, chain, sampler, params);
        tree.advance(action);
    }
    (void)plan(tree, goal, oracle, *scorer, chain, sampler, params);
    dump_tree(tree.root(), out);
}

} // namespace anchorplan
