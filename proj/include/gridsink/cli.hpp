#pragma once

// Command-line surface: gen, validate, enumerate, solve, adversary, bench.
//
// Exit codes: 0 ok, 1 USO violation / input not a USO, 2 usage or invalid
// input, 3 validator or enumeration cap exceeded, 4 query bound violated,
// 5 sink mismatch or inconsistent oracle, 6 adversary materialization
// inconsistent.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "gridsink/generate.hpp"
#include "gridsink/grid.hpp"
#include "gridsink/io.hpp"
#include "gridsink/oracles.hpp"
#include "gridsink/solvers.hpp"

namespace gridsink::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kUsage = 2,
    kCapExceeded = 3,
    kBoundViolated = 4,
    kSinkMismatch = 5,
    kAdversaryInconsistent = 6,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "8x13" -> {8, 13}; "5" -> {5, 5} when square_if_single.
inline std::vector<int> parse_shape(const std::string& text, bool square_if_single = false) {
    std::vector<int> dims;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, 'x')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("malformed shape '" + text + "'");
        }
        const int n = std::stoi(part);
        if (n < 1) throw UsageError("shape '" + text + "' has an empty dimension");
        dims.push_back(n);
    }
    if (dims.empty()) throw UsageError("malformed shape '" + text + "'");
    if (square_if_single && dims.size() == 1) dims.push_back(dims.front());
    return dims;
}

inline GridShape shape_2d(const std::vector<int>& dims) {
    if (dims.size() != 2) throw UsageError("expected a two-dimensional shape MxN");
    return {dims[0], dims[1]};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw UsageError("cannot write " + path);
    file << text;
}

using Instance = std::variant<ValueMatrix, OrientedGrid, DOrientedGrid>;

struct SolveOptions {
    std::string algorithm;
    Seed seed = 0;
    std::optional<int> fixed_k;
    bool verify = true;
    bool timing = false;
    bool record = false;
};

struct SolveOutcome {
    RunReport report;
    Transcript transcript;
};

inline bool is_vertex_algorithm(const std::string& alg) {
    return alg == "diagonal" || alg == "rect" || alg == "walk" || alg == "random-edge";
}

inline void check_algorithm(const std::string& alg) {
    if (!is_vertex_algorithm(alg) && alg != "dc-edge" && alg != "ddim") {
        throw UsageError("unknown algorithm '" + alg + "'");
    }
}

/// Runs one vertex-model solver on an oracle; throws UsageError on shape
/// restrictions.
inline SolveResult run_vertex_algorithm(const std::string& alg, VertexOracle& oracle, Seed seed) {
    if (alg == "diagonal") {
        if (oracle.shape().rows != oracle.shape().cols) throw UsageError("diagonal needs a square grid");
        return diagonal_solve(oracle);
    }
    if (alg == "rect") return rectangular_solve(oracle);
    if (alg == "walk") return walk_solve(oracle);
    if (alg == "random-edge") return random_edge_solve(oracle, seed);
    throw UsageError("algorithm '" + alg + "' does not use the vertex oracle");
}

inline double vertex_bound(const std::string& alg, const GridShape& s) {
    if (alg == "diagonal") return 2.0 * s.rows - 1;
    if (alg == "rect") return s.rows + s.cols - 1.0;
    return static_cast<double>(s.vertex_count());
}

template <OrientationSource Source>
SolveOutcome solve_2d(const Source& source, const SolveOptions& opt, std::optional<Seed> report_seed) {
    const auto start = std::chrono::steady_clock::now();
    const GridShape s = source.shape();
    SolveOutcome outcome;
    RunReport& r = outcome.report;
    r.algorithm = opt.algorithm;
    r.shape = {s.rows, s.cols};
    r.seed = report_seed;
    SolveResult result;
    if (opt.algorithm == "dc-edge") {
        auto oracle = edge_oracle(source);
        oracle.set_recording(opt.record);
        const KSchedule schedule = opt.fixed_k ? KSchedule::fixed(*opt.fixed_k) : KSchedule::standard();
        result = dc_edge_solve(oracle, schedule);
        const int side = std::max(s.rows, s.cols);
        r.bound = opt.fixed_k ? dc_edge_recurrence_bound(side, schedule) : std::floor(dc_edge_bound(side));
        outcome.transcript = oracle.transcript();
    } else if (is_vertex_algorithm(opt.algorithm)) {
        auto oracle = vertex_oracle(source);
        oracle.set_recording(opt.record);
        result = run_vertex_algorithm(opt.algorithm, oracle, opt.seed);
        r.bound = vertex_bound(opt.algorithm, s);
        outcome.transcript = oracle.transcript();
    } else {
        throw UsageError("algorithm '" + opt.algorithm + "' needs a d-dimensional grid");
    }
    r.queries = result.queries;
    r.bound_ok = within_bound(r.queries, r.bound);
    r.sink = {result.sink.row, result.sink.col};
    if (opt.verify) r.verdict = brute_force_sink(source) == result.sink ? "verified" : "mismatch";
    if (opt.timing) {
        r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return outcome;
}

inline SolveOutcome solve_ddim(const DOrientedGrid& grid, const SolveOptions& opt, std::optional<Seed> report_seed) {
    if (opt.algorithm != "ddim") throw UsageError("d-dimensional grids are solved with --alg ddim");
    const auto start = std::chrono::steady_clock::now();
    ExplicitDVertexOracle oracle(grid);
    DSolveResult result = ddim_solve(oracle);
    SolveOutcome outcome;
    RunReport& r = outcome.report;
    r.algorithm = opt.algorithm;
    r.shape = grid.shape().dims;
    r.seed = report_seed;
    r.queries = result.queries;
    r.bound = static_cast<double>(ddim_query_bound(grid.shape().dims));
    r.bound_ok = within_bound(r.queries, r.bound);
    r.sink = result.sink;
    if (opt.verify) r.verdict = brute_force_sink(grid) == result.sink ? "verified" : "mismatch";
    if (opt.timing) {
        r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return outcome;
}

inline SolveOutcome solve_instance(const Instance& instance, const SolveOptions& opt, std::optional<Seed> report_seed) {
    check_algorithm(opt.algorithm);
    return std::visit(
        [&](const auto& grid) -> SolveOutcome {
            using T = std::decay_t<decltype(grid)>;
            if constexpr (std::is_same_v<T, DOrientedGrid>) {
                return solve_ddim(grid, opt, report_seed);
            } else {
                if (opt.algorithm == "ddim") {
                    // A 2-D grid is the d = 2 case.
                    return solve_ddim(as_ddim(grid), opt, report_seed);
                }
                return solve_2d(grid, opt, report_seed);
            }
        },
        instance);
}

inline Instance generate(const std::string& model, const std::vector<int>& dims, Seed seed, std::uint64_t index) {
    if (model == "oneline") {
        GridShape s = shape_2d(dims);
        return gen_one_line(s.rows, s.cols, seed);
    }
    if (model == "separable") return gen_separable_ddim(dims, seed);
    if (model == "enumerate-index") {
        GridShape s = shape_2d(dims);
        std::optional<OrientedGrid> pick;
        std::uint64_t seen = 0;
        for_each_uso(s, [&](const OrientedGrid& g) {
            if (seen++ == index) pick = g;
        });
        if (!pick) throw UsageError("enumeration index " + std::to_string(index) + " out of range (" +
                                    std::to_string(seen) + " USOs)");
        return *pick;
    }
    throw UsageError("unknown model '" + model + "'");
}

inline json instance_json(const Instance& instance) {
    return std::visit([](const auto& g) { return to_json(g); }, instance);
}

inline Instance instance_from_json(const json& doc) {
    GridDocument parsed = grid_from_json(doc);
    return std::visit([](auto&& g) -> Instance { return std::move(g); }, std::move(parsed));
}

inline UsoCheck validate_instance(const Instance& instance, const ValidationLimits& limits) {
    return std::visit(
        [&](const auto& g) -> UsoCheck {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, DOrientedGrid>) return validate_uso_ddim(g, limits);
            else return validate_uso(g, limits);
        },
        instance);
}

inline std::string describe(const SubgridViolation& v) {
    std::ostringstream out;
    out << "violation: subgrid";
    for (const auto& set : v.coordinate_sets) {
        out << " {";
        for (std::size_t k = 0; k < set.size(); ++k) out << (k ? "," : "") << set[k] + 1;
        out << "}";
    }
    out << " has " << v.sink_count << " sinks";
    return out.str();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sink finding on grid unique sink orientations", "gridsink"};
    app.require_subcommand(1);

    // gen
    std::string gen_model = "oneline";
    std::string gen_shape;
    Seed gen_seed = 0;
    std::uint64_t gen_index = 0;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate an instance as grid JSON");
    gen->add_option("--model", gen_model, "oneline | separable | enumerate-index | points")->capture_default_str();
    gen->add_option("--shape", gen_shape, "MxN (or n1xn2x...xnd for separable)")->required();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--index", gen_index, "USO index for enumerate-index")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "output path (default stdout)");

    // validate
    std::string validate_path;
    int validate_cap = ValidationLimits{}.max_coordinates;
    auto* validate = app.add_subcommand("validate", "Check every subgrid for a unique sink");
    validate->add_option("grid", validate_path, "grid JSON file")->required();
    validate->add_option("--max-coordinates", validate_cap, "cap on m + n")->capture_default_str();

    // enumerate
    std::string enum_shape;
    bool enum_count_only = false;
    auto* enumerate = app.add_subcommand("enumerate", "List every USO of a small shape");
    enumerate->add_option("--shape", enum_shape, "MxN")->required();
    enumerate->add_flag("--count-only", enum_count_only, "print only the number of USOs");

    // solve
    SolveOptions solve_opt;
    std::string solve_grid;
    std::string solve_model;
    std::string solve_shape;
    Seed solve_seed = 0;
    std::string solve_report;
    std::string solve_transcript;
    int solve_k = 0;
    bool solve_skip_verify = false;
    auto* solve = app.add_subcommand("solve", "Find the sink with a chosen algorithm");
    solve->add_option("--alg", solve_opt.algorithm, "diagonal | rect | dc-edge | ddim | walk | random-edge")->required();
    auto* grid_opt = solve->add_option("--grid", solve_grid, "grid JSON file");
    auto* model_opt = solve->add_option("--model", solve_model, "generate instead: oneline | separable");
    solve->add_option("--shape", solve_shape, "shape for --model");
    solve->add_option("--seed", solve_seed, "generator and random-edge seed")->capture_default_str();
    solve->add_option("--report", solve_report, "RunReport JSON path (default stdout)");
    solve->add_option("--transcript", solve_transcript, "write the query transcript as JSON lines");
    solve->add_option("--k", solve_k, "fixed block count for dc-edge");
    solve->add_flag("--skip-verify", solve_skip_verify, "do not compare against the brute-force sink");
    solve->add_flag("--timing", solve_opt.timing, "include wall_time_ms in the report");
    grid_opt->excludes(model_opt);

    // adversary
    std::string adv_shape;
    std::string adv_alg = "rect";
    Seed adv_seed = 0;
    std::string adv_transcript;
    auto* adversary = app.add_subcommand("adversary", "Run a solver against the adaptive lower-bound oracle");
    adversary->add_option("--shape", adv_shape, "MxN")->required();
    adversary->add_option("--alg", adv_alg, "diagonal | rect | walk | random-edge")->capture_default_str();
    adversary->add_option("--seed", adv_seed)->capture_default_str();
    adversary->add_option("--transcript", adv_transcript, "write the query transcript as JSON lines");

    // bench
    std::string bench_alg;
    std::string bench_sizes;
    int bench_trials = 10;
    Seed bench_seed = 0;
    std::string bench_csv;
    int bench_jobs = 1;
    int bench_k = 0;
    auto* bench = app.add_subcommand("bench", "Query counts over sizes and seeds as CSV");
    bench->add_option("--alg", bench_alg, "diagonal | rect | dc-edge | walk | random-edge")->required();
    bench->add_option("--sizes", bench_sizes, "comma list of n or MxN")->required();
    bench->add_option("--trials", bench_trials)->capture_default_str();
    bench->add_option("--seed", bench_seed, "first seed; trial t uses seed + t")->capture_default_str();
    bench->add_option("--csv", bench_csv, "CSV path (default stdout)");
    bench->add_option("--jobs", bench_jobs, "parallel trials")->capture_default_str();
    bench->add_option("--k", bench_k, "fixed block count for dc-edge");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            const auto dims = parse_shape(gen_shape);
            std::string text;
            if (gen_model == "points") {
                GridShape s = shape_2d(dims);
                text = to_json(one_line_points(s.rows, s.cols, gen_seed)).dump();
            } else {
                text = instance_json(generate(gen_model, dims, gen_seed, gen_index)).dump();
            }
            write_text(gen_out, text + "\n", out);
            return kOk;
        }

        if (*validate) {
            Instance instance = instance_from_json(read_json_file(validate_path));
            ValidationLimits limits;
            limits.max_coordinates = validate_cap;
            UsoCheck check = validate_instance(instance, limits);
            if (check.ok()) {
                out << "ok\n";
                return kOk;
            }
            out << describe(*check.violation) << "\n";
            return kViolation;
        }

        if (*enumerate) {
            GridShape s = shape_2d(parse_shape(enum_shape));
            if (enum_count_only) {
                out << for_each_uso(s, nullptr) << "\n";
            } else {
                for_each_uso(s, [&](const OrientedGrid& g) { out << to_json(g).dump() << "\n"; });
            }
            return kOk;
        }

        if (*solve) {
            std::optional<Seed> report_seed;
            Instance instance = [&]() -> Instance {
                if (!solve_grid.empty()) return instance_from_json(read_json_file(solve_grid));
                if (solve_model.empty() || solve_shape.empty()) {
                    throw UsageError("solve needs --grid or --model with --shape");
                }
                report_seed = solve_seed;
                return generate(solve_model, parse_shape(solve_shape), solve_seed, 0);
            }();
            solve_opt.seed = solve_seed;
            if (solve_k > 0) solve_opt.fixed_k = solve_k;
            solve_opt.verify = !solve_skip_verify;
            solve_opt.record = !solve_transcript.empty();
            if (solve_opt.algorithm == "random-edge") report_seed = solve_seed;
            SolveOutcome outcome = solve_instance(instance, solve_opt, report_seed);
            write_text(solve_report, to_json(outcome.report).dump(2) + "\n", out);
            if (!solve_transcript.empty()) {
                std::ostringstream lines;
                write_transcript(lines, outcome.transcript);
                write_text(solve_transcript, lines.str(), out);
            }
            if (outcome.report.verdict == "mismatch") {
                err << "sink mismatch against brute force\n";
                return kSinkMismatch;
            }
            if (!outcome.report.bound_ok) {
                err << "query bound violated\n";
                return kBoundViolated;
            }
            return kOk;
        }

        if (*adversary) {
            GridShape s = shape_2d(parse_shape(adv_shape));
            if (!is_vertex_algorithm(adv_alg)) throw UsageError("adversary answers vertex queries only");
            AdversaryVertexOracle oracle(s);
            SolveResult result = run_vertex_algorithm(adv_alg, oracle, adv_seed);
            OrientedGrid grid = oracle.materialize();
            auto replay = vertex_oracle(grid);
            const bool replayed = replay_matches(oracle.transcript(), replay);
            std::optional<bool> validated;
            if (s.size() <= ValidationLimits{}.max_coordinates) validated = validate_uso(grid).ok();
            const bool sink_ok = oracle.sink() && *oracle.sink() == result.sink;
            const bool consistent = replayed && validated.value_or(true) && sink_ok;
            json doc;
            doc["algorithm"] = adv_alg;
            doc["shape"] = {s.rows, s.cols};
            doc["queries"] = result.queries.vertex_queries;
            doc["lower_bound"] = s.rows + s.cols - 1;
            doc["sink"] = detail::vertex_json(result.sink);
            doc["replay_ok"] = replayed;
            doc["validated"] = validated ? json(*validated) : json(nullptr);
            doc["consistent"] = consistent;
            out << doc.dump(2) << "\n";
            if (!adv_transcript.empty()) {
                std::ofstream file(adv_transcript);
                write_transcript(file, oracle.transcript());
            }
            return consistent ? kOk : kAdversaryInconsistent;
        }

        if (*bench) {
            check_algorithm(bench_alg);
            if (bench_alg == "ddim") throw UsageError("bench covers two-dimensional algorithms only");
            if (bench_trials < 1) throw UsageError("--trials must be positive");
            std::vector<GridShape> shapes;
            std::stringstream list(bench_sizes);
            std::string token;
            while (std::getline(list, token, ',')) shapes.push_back(shape_2d(parse_shape(token, true)));
            if (shapes.empty()) throw UsageError("--sizes is empty");

            struct Job {
                GridShape shape;
                Seed seed;
            };
            std::vector<Job> jobs;
            for (const GridShape& s : shapes)
                for (int t = 0; t < bench_trials; ++t) jobs.push_back({s, bench_seed + static_cast<Seed>(t)});
            std::vector<RunReport> rows(jobs.size());
            std::vector<std::string> failures(jobs.size());
            SolveOptions opt;
            opt.algorithm = bench_alg;
            if (bench_k > 0) opt.fixed_k = bench_k;
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++) {
                    try {
                        SolveOptions local = opt;
                        local.seed = jobs[i].seed;
                        ValueMatrix vm = gen_one_line(jobs[i].shape.rows, jobs[i].shape.cols, jobs[i].seed);
                        rows[i] = solve_2d(vm, local, jobs[i].seed).report;
                    } catch (const std::exception& e) {
                        failures[i] = e.what();
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int t = 1; t < std::max(1, bench_jobs); ++t) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();
            for (const auto& f : failures) {
                if (!f.empty()) throw UsageError(f);
            }
            // Canonical order: shape as listed, then seed.
            std::ostringstream csv;
            csv << csv_header << "\n";
            bool all_ok = true;
            bool all_verified = true;
            for (const RunReport& r : rows) {
                csv << csv_row(r) << "\n";
                all_ok = all_ok && r.bound_ok;
                all_verified = all_verified && r.verdict == "verified";
            }
            write_text(bench_csv, csv.str(), out);
            if (!all_verified) return kSinkMismatch;
            return all_ok ? kOk : kBoundViolated;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const NotUsoError& e) {
        err << "error: " << e.what() << "\n";
        return kViolation;
    } catch (const OracleInconsistency& e) {
        err << "error: " << e.what() << "\n";
        return kSinkMismatch;
    }
    return kUsage;
}

}  // namespace gridsink::cli
