// lsf: dataset generation, index build/query, benchmarks, verification and
// tradeoff tables. Exit status: 0 success, 1 verification failure or runtime
// error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsf/bench.hpp"
#include "lsf/dataset.hpp"
#include "lsf/gaussian_filters.hpp"
#include "lsf/ls_solver.hpp"
#include "lsf/lsf_index.hpp"
#include "lsf/snapshot.hpp"
#include "lsf/tradeoff.hpp"
#include "lsf/verification.hpp"

using namespace lsf;

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::uint64_t seed = 0;
    std::size_t n = 10'000;
    std::size_t d = 128;
    double alpha = 0.7;
    std::optional<double> beta;
    double lambda = 0.0;
    double t = 2.5;
    double s = 2.0;
    double c = 2.0;
    double r = 1.0;
    std::size_t reps = 10;
    std::uint64_t trials = 1'000'000;
    std::string out;
    std::string format = "fvecs";
    std::string mode = "calibrated";

    std::string kind = "sphere-planted";
    std::size_t queries = 100;
    std::string data;
    std::string query_file;
    std::string index;
    std::optional<std::size_t> embed_dim;
    std::optional<double> scale_target;
    std::optional<double> margin;
    std::vector<double> lambdas;
    std::vector<std::uint64_t> n_grid;
    std::optional<double> t_growth;
};

StatsMode parse_mode(const std::string& mode) { return mode == "analytic" ? StatsMode::analytic : StatsMode::calibrated; }

void add_common(CLI::App* cmd, Options& o, std::initializer_list<const char*> flags) {
    for (std::string f : flags) {
        if (f == "seed") cmd->add_option("--seed", o.seed, "Master seed");
        if (f == "n") cmd->add_option("--n", o.n, "Number of points")->check(CLI::PositiveNumber);
        if (f == "d") cmd->add_option("--d", o.d, "Dimension")->check(CLI::PositiveNumber);
        if (f == "alpha") cmd->add_option("--alpha", o.alpha, "Target similarity");
        if (f == "beta") cmd->add_option("--beta", o.beta, "Distractor similarity");
        if (f == "lambda") cmd->add_option("--lambda", o.lambda, "Tradeoff parameter in [-1, 1]");
        if (f == "t") cmd->add_option("--t", o.t, "Filter threshold scale");
        if (f == "s") cmd->add_option("--s", o.s, "Norm order in (0, 2]");
        if (f == "c") cmd->add_option("--c", o.c, "Approximation factor");
        if (f == "r") cmd->add_option("--r", o.r, "Near-neighbor radius");
        if (f == "reps") cmd->add_option("--reps", o.reps, "Independent repetitions")->check(CLI::PositiveNumber);
        if (f == "trials") cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
        if (f == "out") cmd->add_option("--out", o.out, "Output path");
        if (f == "format") cmd->add_option("--format", o.format, "Vector file format")->check(CLI::IsMember({"fvecs", "txt"}));
        if (f == "mode") {
            cmd->add_option("--mode", o.mode, "Planner statistics")->check(CLI::IsMember({"analytic", "calibrated"}));
        }
        if (f == "queries") cmd->add_option("--queries", o.queries, "Planted queries")->check(CLI::PositiveNumber);
    }
}

// Writes to --out if given, else stdout.
void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(o.out);
    if (!os) throw std::runtime_error("cannot open " + o.out + " for writing");
    os << text;
}

GaussianFamilySpec sphere_spec(const Options& o, double beta) {
    GaussianFamilySpec spec{o.d, {o.alpha, beta, o.lambda}, o.t};
    spec.validate();
    return spec;
}

int cmd_gen(const Options& o) {
    DatasetSpec spec;
    spec.n = o.n;
    spec.d = o.d;
    spec.kind = parse_dataset_kind(o.kind);
    spec.alpha = o.alpha;
    spec.r = o.r;
    spec.c = o.c;
    spec.s = o.s;
    spec.queries = o.queries;
    spec.seed = o.seed;
    const Dataset data = generate_dataset(spec);
    const std::string prefix = o.out.empty() ? "dataset" : o.out;
    write_vectors_file(prefix + ".base." + o.format, data.base, o.format);
    nlohmann::json files = {{"base", prefix + ".base." + o.format}};
    if (!data.queries.empty()) {
        write_vectors_file(prefix + ".queries." + o.format, data.queries, o.format);
        std::ofstream gt(prefix + ".truth.csv");
        write_ground_truth_csv(gt, data.truth);
        files["queries"] = prefix + ".queries." + o.format;
        files["truth"] = prefix + ".truth.csv";
    }
    std::cout << nlohmann::json{{"kind", o.kind}, {"n", o.n}, {"d", o.d}, {"files", files}}.dump(2) << '\n';
    return 0;
}

int cmd_build(const Options& o) {
    const std::vector<Vector> base = read_vectors_file(o.data);
    if (base.empty()) throw std::invalid_argument("empty dataset: " + o.data);
    Options local = o;
    local.d = base.front().size();
    if (!o.beta) throw std::invalid_argument("build needs --beta");
    IndexConfig config{sphere_spec(local, *o.beta), parse_mode(o.mode), o.trials, o.seed};
    const FilterFamilyStats stats = resolve_stats(config);
    const IndexPlan plan = plan_parameters(std::max<std::size_t>(2, base.size()), stats);
    LsfIndex index(plan, config.spec, o.seed);
    std::vector<PointId> ids(base.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::vector<Vector> unit;
    unit.reserve(base.size());
    // Files hold float32 values, so renormalize before the sphere check.
    for (const Vector& v : base) unit.push_back(normalize(v));
    index.insert_batch(ids, unit);
    const std::string path = o.out.empty() ? "index.lsf" : o.out;
    save_snapshot_file(index, path);
    std::cout << nlohmann::json{{"snapshot", path},
                                {"points", index.size()},
                                {"kappa1", plan.kappa1},
                                {"tau", plan.tau},
                                {"m1", plan.m1},
                                {"kappa2", plan.kappa2},
                                {"m2", plan.m2},
                                {"rho_q", plan.exponents.rho_q},
                                {"rho_u", plan.exponents.rho_u},
                                {"incidences", index.incidence_count()}}
                     .dump(2)
              << '\n';
    return 0;
}

int cmd_query(const Options& o) {
    const LsfIndex index = load_snapshot_file(o.index);
    const std::vector<Vector> queries = read_vectors_file(o.query_file);
    std::ostringstream os;
    os << "query_id,found,answer_id,similarity,candidates,filters_probed\n";
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const Vector q = normalize(queries[i]);
        const QueryOutcome out = index.query(q);
        os << i << ',' << (out.found ? 1 : 0) << ',';
        if (out.found) {
            const auto y = index.stored_point(*out.found);
            double sim = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k) sim += q[k] * y[k];
            os << *out.found << ',' << sim;
        } else {
            os << ',';
        }
        os << ',' << out.candidates_examined << ',' << out.filters_probed << '\n';
    }
    emit(o, os.str());
    return 0;
}

int cmd_bench(const Options& o) {
    DatasetSpec ds;
    ds.n = o.n;
    ds.d = o.d;
    ds.queries = o.queries;
    ds.seed = derive_seed(o.seed, {0xda7a});
    BenchReport report;
    if (o.kind == "ls" || o.kind == "ls-planted") {
        ds.kind = DatasetKind::ls_planted;
        ds.r = o.r;
        ds.c = o.c;
        ds.s = o.s;
        const Dataset data = generate_dataset(ds);
        LsConfig cfg;
        cfg.embed_dim = o.embed_dim;
        cfg.scale_target = o.scale_target;
        cfg.margin = o.margin;
        cfg.t = o.t;
        cfg.mode = parse_mode(o.mode);
        cfg.calibration_trials = o.trials;
        cfg.seed = o.seed;
        const LsPlan plan = plan_ls(o.n, o.d, {o.r, o.c, o.s}, o.lambda, cfg);
        report = run_ls_recall_bench(plan, data, o.reps, o.seed);
    } else {
        ds.kind = DatasetKind::sphere_planted;
        ds.alpha = o.alpha;
        const Dataset data = generate_dataset(ds);
        const double beta = o.beta.value_or(distractor_similarity_quantile(data, 0.99));
        Options local = o;
        if (o.t_growth) local.t = scheduled_t({o.alpha, beta, o.lambda}, o.n, *o.t_growth);
        IndexConfig config{sphere_spec(local, beta), parse_mode(o.mode), o.trials, o.seed};
        report = run_recall_bench(config, data, o.reps);
    }
    emit(o, to_json(report).dump(2) + "\n");
    return report.unsound == 0 ? 0 : kExitVerification;
}

int cmd_verify(const Options& o) {
    VerificationOptions opt;
    opt.seed = o.seed;
    opt.tail_trials = o.trials;
    const VerificationReport report = run_verification_suite(opt);
    emit(o, to_json(report).dump(2) + "\n");
    for (const auto& c : report.checks) std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    return report.all_passed() ? 0 : kExitVerification;
}

int cmd_tradeoff(const Options& o, bool ls_table) {
    std::vector<double> lambdas = o.lambdas;
    if (lambdas.empty()) {
        for (int i = -4; i <= 4; ++i) lambdas.push_back(0.25 * i);
    }
    const std::vector<TradeoffRow> rows = ls_table ? emit_tradeoff_table(NearNeighborParams{o.r, o.c, o.s}, lambdas)
                                                   : emit_tradeoff_table(o.alpha, o.beta.value_or(0.0), lambdas);
    std::ostringstream os;
    write_tradeoff_csv(os, rows);
    emit(o, os.str());
    return 0;
}

int cmd_calibrate(const Options& o) {
    const GaussianFamilySpec spec = sphere_spec(o, o.beta.value_or(0.0));
    const MonteCarloStats mc = estimate_stats_monte_carlo(spec, o.trials, o.seed);
    nlohmann::json out = {
        {"alpha", o.alpha}, {"beta", spec.params.beta}, {"lambda", o.lambda}, {"t", o.t}, {"trials", mc.trials},
        {"estimate", {{"p1", mc.stats.p1}, {"p2", mc.stats.p2}, {"pq", mc.stats.pq}, {"pu", mc.stats.pu}}},
        {"standard_error",
         {{"p1", mc.standard_errors.p1}, {"p2", mc.standard_errors.p2}, {"pq", mc.standard_errors.pq},
          {"pu", mc.standard_errors.pu}}},
        {"analytic",
         {{"p1_lower", collision_lower_bound(o.alpha, o.lambda, o.t)},
          {"p2_upper", collision_upper_bound(spec.params.beta, o.alpha, o.lambda, o.t)},
          {"pq_upper", std::exp(-spec.query_threshold() * spec.query_threshold() / 2.0)},
          {"pu_upper", std::exp(-o.t * o.t / 2.0)}}}};
    if (mc.stats.p1 > mc.stats.p2 && mc.stats.p2 > 0.0) {
        const Exponents rho = exponents_from_stats(mc.stats);
        out["rho_q"] = rho.rho_q;
        out["rho_u"] = rho.rho_u;
    }
    emit(o, out.dump(2) + "\n");
    return 0;
}

int cmd_scaling(const Options& o) {
    std::vector<std::uint64_t> grid = o.n_grid;
    if (grid.empty()) grid = {1u << 10, 1u << 12, 1u << 14};
    ScalingConfig cfg;
    cfg.spec = sphere_spec(o, o.beta.value_or(0.0));
    cfg.mode = parse_mode(o.mode);
    cfg.calibration_trials = o.trials;
    cfg.queries = o.queries;
    cfg.repetitions = o.reps;
    cfg.seed = o.seed;
    const ScalingResult result = scaling_study(grid, cfg);
    std::ostringstream os;
    write_scaling_csv(os, result.rows);
    emit(o, os.str());
    std::cerr << nlohmann::json{{"slope", result.slope}, {"rho_q", result.rho_q}}.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locality-sensitive filtering index tools"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Generate a dataset");
    add_common(gen, o, {"seed", "n", "d", "alpha", "s", "c", "r", "out", "format", "queries"});
    gen->add_option("--kind", o.kind, "sphere-random | sphere-planted | ls-planted")
        ->check(CLI::IsMember({"sphere-random", "sphere-planted", "ls-planted"}));

    auto* build = app.add_subcommand("build", "Build an index snapshot from a vector file");
    add_common(build, o, {"seed", "alpha", "beta", "lambda", "t", "trials", "out", "mode"});
    build->add_option("--data", o.data, "Base vectors (.fvecs or text)")->required();

    auto* query = app.add_subcommand("query", "Query a snapshot");
    add_common(query, o, {"out"});
    query->add_option("--index", o.index, "Snapshot path")->required();
    query->add_option("--queries", o.query_file, "Query vectors (.fvecs or text)")->required();

    auto* bench = app.add_subcommand("bench", "Planted recall benchmark");
    add_common(bench, o, {"seed", "n", "d", "alpha", "beta", "lambda", "t", "s", "c", "r", "reps", "trials", "out",
                          "mode", "queries"});
    bench->add_option("--kind", o.kind, "sphere | ls")->check(CLI::IsMember({"sphere", "ls", "sphere-planted", "ls-planted"}));
    bench->add_option("--l", o.embed_dim, "Feature dimension for ls benchmarks");
    bench->add_option("--scale-target", o.scale_target, "(gamma r)^s for ls benchmarks");
    bench->add_option("--margin", o.margin, "Embedding error budget for ls benchmarks");
    bench->add_option("--t-growth", o.t_growth, "Set t from n: t^2/2 = (1-b^2)/(1-a^l b)^2 (ln n)^growth; overrides --t")
        ->check(CLI::Range(0.0, 1.0));

    auto* verify = app.add_subcommand("verify", "Monte-Carlo verification suite");
    add_common(verify, o, {"seed", "trials", "out"});

    auto* tradeoff = app.add_subcommand("tradeoff", "Exponent tradeoff table (CSV)");
    add_common(tradeoff, o, {"alpha", "beta", "s", "c", "r", "out"});
    bool ls_table = false;
    tradeoff->add_flag("--ls", ls_table, "l_s table from --c and --s instead of the sphere table");
    tradeoff->add_option("--lambdas", o.lambdas, "Lambda values")->delimiter(',');

    auto* calibrate = app.add_subcommand("calibrate", "Monte-Carlo family statistics");
    add_common(calibrate, o, {"seed", "alpha", "beta", "lambda", "t", "trials", "out"});

    auto* scaling = app.add_subcommand("scaling", "Work versus n on planted data (CSV)");
    add_common(scaling, o, {"seed", "d", "alpha", "beta", "lambda", "t", "reps", "trials", "out", "mode", "queries"});
    scaling->add_option("--n-grid", o.n_grid, "Ascending n values")->delimiter(',');

    o.reps = 10;
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    if (scaling->parsed() && scaling->count("--reps") == 0) o.reps = 1;

    try {
        if (gen->parsed()) return cmd_gen(o);
        if (build->parsed()) return cmd_build(o);
        if (query->parsed()) return cmd_query(o);
        if (bench->parsed()) return cmd_bench(o);
        if (verify->parsed()) return cmd_verify(o);
        if (tradeoff->parsed()) return cmd_tradeoff(o, ls_table);
        if (calibrate->parsed()) return cmd_calibrate(o);
        if (scaling->parsed()) return cmd_scaling(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerification;
    }
    return kExitUsage;
}
