// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Oracles here are written against the math, not against library helpers,
// wherever the check allows it.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lsf/bench.hpp"
#include "lsf/combinatorics.hpp"
#include "lsf/composition.hpp"
#include "lsf/dataset.hpp"
#include "lsf/feature_map.hpp"
#include "lsf/gaussian_filters.hpp"
#include "lsf/kernels.hpp"
#include "lsf/ls_solver.hpp"
#include "lsf/lsf_index.hpp"
#include "lsf/rng.hpp"
#include "lsf/tradeoff.hpp"

using namespace lsf;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (passed) detail << "first failure: " << what << "; ";
            passed = false;
        }
    }
};

int failures = 0;

void run(int id, const char* name, double budget_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < budget_seconds, "runtime over budget");
    if (!out.passed) ++failures;
    std::printf("%s %d %s (%.1f s): %s\n", out.passed ? "PASS" : "FAIL", id, name, secs, out.detail.str().c_str());
    std::fflush(stdout);
}

// Binomial standard error with one pseudo-hit and one pseudo-miss, so a
// zero-hit estimate still gets a positive error bar.
double smoothed_se(double probability, double trials) {
    const double p = (probability * trials + 1.0) / (trials + 2.0);
    return std::sqrt(p * (1.0 - p) / trials);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double normal_pdf(double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * std::numbers::pi); }

double simpson_tail(double t) {
    const int k = 100000;
    const double h = 40.0 / k;
    double sum = normal_pdf(t) + normal_pdf(t + 40.0);
    for (int i = 1; i < k; ++i) sum += normal_pdf(t + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

Vector random_unit(std::size_t d, RngStream& rng) {
    Vector v(d);
    for (double& x : v) x = rng.normal();
    return normalize(v);
}

// Lexicographic rank of every tau-subset of {0..m-1}, from sorted bitmask enumeration.
std::map<std::vector<std::uint32_t>, std::uint64_t> lex_ranks(std::uint32_t m, std::uint32_t tau) {
    std::vector<std::vector<std::uint32_t>> all;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::uint32_t>(std::popcount(mask)) != tau) continue;
        std::vector<std::uint32_t> s;
        for (std::uint32_t i = 0; i < m; ++i) {
            if (mask >> i & 1) s.push_back(i);
        }
        all.push_back(s);
    }
    std::sort(all.begin(), all.end());
    std::map<std::vector<std::uint32_t>, std::uint64_t> ranks;
    for (std::size_t r = 0; r < all.size(); ++r) ranks[all[r]] = r;
    return ranks;
}

void exponents(Outcome& o) {
    const double tol = 1e-12;
    Exponents e = ls_exponents({1.0, 2.0, 2.0}, 1.0);
    o.require(close(e.rho_q, 16.0 / 25.0, tol) && close(e.rho_u, 0.0, tol), "l2 c=2 lambda=1");
    e = ls_exponents({1.0, 2.0, 2.0}, -1.0);
    o.require(close(e.rho_q, 0.0, tol) && close(e.rho_u, 16.0 / 9.0, tol), "l2 c=2 lambda=-1");
    for (double c : {1.5, 2.0, 4.0}) {
        for (double s : {1.0, 2.0}) {
            e = ls_exponents({1.0, c, s}, 0.0);
            o.require(close(e.rho_q, 1.0 / std::pow(c, s), tol) && close(e.rho_u, 1.0 / std::pow(c, s), tol),
                      "balanced ls exponent");
        }
    }
    for (double a : {0.3, 0.5, 0.8}) {
        e = sphere_exponents({a, 0.0, 0.0});
        o.require(close(e.rho_q, (1 - a) / (1 + a), tol) && close(e.rho_u, (1 - a) / (1 + a), tol),
                  "balanced sphere exponent");
    }
    o.detail << "rho(l2, c=2, lambda=+-1) = (16/25, 0), (0, 16/9)";
}

void tail_bounds(Outcome& o) {
    int checked = 0;
    double worst = -1e9;
    for (double a : {0.3, 0.5, 0.8}) {
        for (double lambda : {-1.0, 0.0, 1.0}) {
            for (double t : {1.0, 2.0, 3.0}) {
                const double corr[] = {a, 0.0, a / 2.0};
                const double qth = std::pow(a, lambda) * t;
                const auto est = estimate_joint_tails(corr, qth, t, 1'000'000, derive_seed(7, {static_cast<std::uint64_t>(++checked)}));
                const double lower = collision_lower_bound(a, lambda, t);
                const double se0 = smoothed_se(est[0].probability, 1e6);
                o.require(lower <= est[0].probability + 3 * se0, "lower bound vs estimate at alpha");
                worst = std::max(worst, (lower - est[0].probability) / se0);
                for (int b = 1; b <= 2; ++b) {
                    const double upper = collision_upper_bound(corr[b], a, lambda, t);
                    const double se = smoothed_se(est[b].probability, 1e6);
                    o.require(est[b].probability - 3 * se <= upper, "upper bound vs estimate at beta");
                    worst = std::max(worst, (est[b].probability - upper) / se);
                }
            }
        }
    }
    for (double t = 0.0; t <= 4.0 + 1e-9; t += 0.5) {
        const double tail = simpson_tail(t);
        const TailBounds b = normal_tail_bounds(t);
        o.require(b.lower <= tail && tail <= b.upper, "normal tail bracket");
    }
    o.detail << checked << " grid points, worst violation " << worst << " sigma (negative is inside)";
}

void tensoring(Outcome& o) {
    const std::size_t d = 8;
    const GaussianFamilySpec spec{d, {0.7, 0.1, 0.5}, 0.4};
    const FilterFamilyStats stats{0.2, 0.05, 0.4, 0.4};
    RngStream rng(31);
    std::vector<Vector> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(random_unit(d, rng));
    std::uint64_t configs = 0, incidences = 0;
    for (std::uint32_t m1 = 1; m1 <= 12; ++m1) {
        for (std::uint32_t tau = 1; tau <= std::min(3u, m1); ++tau) {
            const auto ranks = lex_ranks(m1, tau);
            for (std::uint32_t m2 = 1; m2 <= 4; ++m2) {
                for (std::uint32_t k1 = 1; k1 <= 2; ++k1) {
                    for (std::uint32_t k2 = 0; k2 <= 1; ++k2) {
                        IndexPlan plan;
                        plan.kappa1 = k1;
                        plan.tau = tau;
                        plan.m1 = m1;
                        plan.kappa2 = k2;
                        plan.m2 = m2;
                        plan.stats = stats;
                        plan.n_target = 100;
                        LsfIndex index(plan, spec, derive_seed(5, {configs++}));
                        for (PointId i = 0; i < pts.size(); ++i) index.insert(i, pts[i]);

                        // Exhaustive: every tau-subset times every second-collection filter.
                        std::vector<std::pair<std::uint64_t, PointId>> expect;
                        for (PointId i = 0; i < pts.size(); ++i) {
                            const auto f = index.stored_point(i);
                            const Vector y(f.begin(), f.end());
                            std::vector<bool> in1(m1), in2(m2), q1(m1), q2(m2);
                            for (std::uint32_t j = 0; j < m1; ++j) {
                                const auto pf = index.first_collection().filter(j);
                                in1[j] = power_membership(pf, y, Role::update);
                                q1[j] = power_membership(pf, y, Role::query);
                            }
                            for (std::uint32_t j = 0; j < m2; ++j) {
                                const auto pf = index.second_collection().filter(j);
                                in2[j] = power_membership(pf, y, Role::update);
                                q2[j] = power_membership(pf, y, Role::query);
                            }
                            std::vector<std::uint64_t> query_keys;
                            for (const auto& [subset, rank] : ranks) {
                                const bool all_u = std::all_of(subset.begin(), subset.end(), [&](auto j) { return in1[j]; });
                                const bool all_q = std::all_of(subset.begin(), subset.end(), [&](auto j) { return q1[j]; });
                                for (std::uint32_t j = 0; j < m2; ++j) {
                                    if (all_u && in2[j]) expect.emplace_back(rank * m2 + j, i);
                                    if (all_q && q2[j]) query_keys.push_back(rank * m2 + j);
                                }
                            }
                            auto got_q = index.simulated_keys(y, Role::query);
                            std::sort(got_q.begin(), got_q.end());
                            o.require(got_q == query_keys, "query-side simulated keys");
                        }
                        std::sort(expect.begin(), expect.end());
                        incidences += expect.size();
                        o.require(index.bucket_incidences() == expect, "update-side bucket incidences");
                    }
                }
            }
        }
    }

    // Pr[Bin(10, 0.3) >= 3] by the direct sum.
    double exact = 0.0;
    for (int k = 3; k <= 10; ++k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (10 - i) / (i + 1);
        exact += c * std::pow(0.3, k) * std::pow(0.7, 10 - k);
    }
    o.require(close(exact, 0.6172, 1e-4) && exact >= 0.5, "exact binomial tail");
    o.require(close(binomial_tail(10, 0.3, 3), exact, 1e-12), "library binomial tail");
    RngStream coin(99);
    const int draws = 1'000'000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
        int k = 0;
        for (int j = 0; j < 10; ++j) k += coin.uniform() < 0.3;
        hits += k >= 3;
    }
    const double mc = double(hits) / draws;
    const double se = std::sqrt(exact * (1 - exact) / draws);
    o.require(std::abs(mc - exact) <= 3 * se, "Monte-Carlo binomial tail");
    o.detail << configs << " plans, " << incidences << " incidences matched; Pr[Bin(10,0.3)>=3] = " << exact
             << ", MC " << mc;
}

void planner(Outcome& o) {
    const FilterFamilyStats s{0.1, 0.01, 0.3, 0.3};
    const IndexPlan p = plan_parameters(1u << 20, s);
    // By hand: ln n = 13.863, rho_q = ln(3) / ln(30) = 0.3230, ln(1/p1) = 2.3026.
    const double ln_n = 20 * std::log(2.0);
    const double rho = std::log(0.3 / 0.1) / std::log(0.3 / 0.01);
    const double k1 = std::ceil(rho * ln_n / std::log(10.0));
    const double tau = std::floor(ln_n / (k1 * std::log(30.0)));
    const double m1 = std::round(tau / std::pow(0.1, k1));
    const double k2 = std::ceil(ln_n / std::log(30.0)) - tau * k1;
    const double m2 = std::round(1.0 / std::pow(0.1, k2));
    o.require(k1 == 2 && tau == 2 && m1 == 200 && k2 == 1 && m2 == 10, "hand evaluation");
    o.require(p.kappa1 == 2 && p.tau == 2 && p.m1 == 200 && p.kappa2 == 1 && p.m2 == 10, "plan_parameters");
    o.detail << "(kappa1, tau, m1, kappa2, m2) = (" << p.kappa1 << ", " << p.tau << ", " << p.m1 << ", " << p.kappa2
             << ", " << p.m2 << ")";
}

void feature_maps(Outcome& o) {
    double worst_cf = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        RngStream rng(derive_seed(3, {static_cast<std::uint64_t>(s * 10)}));
        std::vector<double> x(1'000'000);
        for (double& v : x) v = sample_stable(s, rng);
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            double c = 0.0;
            for (double v : x) c += std::cos(t * v);
            const double err = std::abs(c / x.size() - std::exp(-std::pow(t, s)));
            worst_cf = std::max(worst_cf, err);
            o.require(err <= 0.02, "characteristic function");
        }
    }

    // Mean absolute kernel error over many maps and pairs at three widths.
    const std::size_t d = 8, maps = 20, pairs = 100;
    std::ostringstream ratios;
    for (double s : {1.0, 2.0}) {
        double mae[3] = {0, 0, 0};
        const std::size_t widths[3] = {256, 1024, 4096};
        for (std::size_t w = 0; w < 3; ++w) {
            for (std::size_t m = 0; m < maps; ++m) {
                const FeatureMap map = build_map(d, widths[w], s, derive_seed(11, {w, m}));
                RngStream rng(derive_seed(12, {m}));
                for (std::size_t p = 0; p < pairs; ++p) {
                    Vector x(d), delta(d);
                    for (double& v : x) v = rng.normal();
                    double norm_s = 0.0;
                    for (double& v : delta) {
                        v = rng.normal();
                        norm_s += std::pow(std::abs(v), s);
                    }
                    // ||delta||_s^s uniform on (0, 2].
                    const double want = 2.0 * rng.uniform_open();
                    Vector y(d);
                    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + delta[i] * std::pow(want / norm_s, 1.0 / s);
                    const Vector vx = embed(map, x), vy = embed(map, y);
                    double dot = 0.0, self = 0.0;
                    for (std::size_t i = 0; i < vx.size(); ++i) {
                        dot += vx[i] * vy[i];
                        self += vx[i] * vx[i];
                    }
                    o.require(std::abs(self - 1.0) <= 1e-12, "unit norm after normalization");
                    mae[w] += std::abs(dot - std::exp(-want));
                }
            }
        }
        const double r1 = mae[0] / mae[1], r2 = mae[1] / mae[2];
        o.require(r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4, "kernel error halving");
        ratios << " s=" << s << ": " << r1 << ", " << r2 << ";";
    }
    o.detail << "max CF error " << worst_cf << "; MAE ratios" << ratios.str();
}

Dataset planted_sphere() {
    DatasetSpec ds;
    ds.n = 10000;
    ds.d = 128;
    ds.kind = DatasetKind::sphere_planted;
    ds.alpha = 0.7;
    ds.queries = 100;
    ds.seed = derive_seed(1, {0xda7a});
    return generate_dataset(ds);
}

// Independent soundness: every reported query must have some base point at
// similarity >= threshold, which the report counts as `found`.
void sphere_recall(Outcome& o) {
    const Dataset data = planted_sphere();
    const double beta = distractor_similarity_quantile(data, 0.99);
    o.detail << "beta = 99th-percentile distractor similarity " << beta << ";";
    for (double lambda : {-0.5, 0.0, 0.5}) {
        const IndexConfig config{{128, {0.7, beta, lambda}, 2.5}, StatsMode::calibrated, 1'000'000, 1};
        const BenchReport r = run_recall_bench(config, data, 10);
        o.require(r.recall >= 0.9, "recall at lambda " + std::to_string(lambda));
        o.require(r.unsound == 0, "soundness at lambda " + std::to_string(lambda));
        o.detail << " lambda " << lambda << ": recall " << r.recall << ", unsound " << r.unsound << ", candidates "
                 << r.mean_candidates << ";";
    }
}

void ls_recall(Outcome& o) {
    for (double s : {2.0, 1.0}) {
        DatasetSpec ds;
        ds.n = 10000;
        ds.d = 64;
        ds.kind = DatasetKind::ls_planted;
        ds.r = 1.0;
        ds.c = 2.0;
        ds.s = s;
        ds.queries = 100;
        ds.seed = derive_seed(1, {0xda7a});
        const Dataset data = generate_dataset(ds);
        // Planted structure: answer at distance r, nothing else within c r.
        bool separated = true;
        for (std::size_t i = 0; i < data.queries.size(); i += 10) {
            const auto hits = linear_scan(data.base, data.queries[i], 2.0, Metric::ls, s);
            separated = separated && hits.size() == 1 && hits[0].id == data.truth[i].answer_id;
        }
        o.require(separated, "planted ls data");

        LsConfig cfg;
        cfg.embed_dim = 256;
        if (s == 1.0) cfg.scale_target = std::log(2.0);
        cfg.t = 2.5;
        cfg.seed = 1;
        const LsPlan plan = plan_ls(ds.n, ds.d, {1.0, 2.0, s}, 0.0, cfg);
        const BenchReport r = run_ls_recall_bench(plan, data, 10, 1);
        o.require(r.recall >= 0.9, "recall s=" + std::to_string(s));
        o.require(r.unsound == 0, "soundness s=" + std::to_string(s));
        o.detail << " s=" << s << ": l=" << plan.embed_dim << ", recall " << r.recall << ", unsound " << r.unsound
                 << ";";
    }
}

void sublinearity(Outcome& o) {
    ScalingConfig cfg;
    cfg.spec = {512, {0.8, 0.1, 0.0}, 2.0};
    cfg.mode = StatsMode::calibrated;
    cfg.queries = 100;
    cfg.repetitions = 10;
    cfg.seed = 1;
    const std::uint64_t grid[] = {1u << 10, 1u << 12, 1u << 14};
    const ScalingResult r = scaling_study(grid, cfg);
    std::vector<double> lx, ly;
    for (const auto& row : r.rows) {
        lx.push_back(std::log(double(row.n)));
        ly.push_back(std::log(row.work));
        o.detail << "n=" << row.n << " work " << row.work << " recall " << row.recall << "; ";
    }
    // Own least-squares fit.
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    o.require(close(slope, r.slope, 1e-9), "slope agrees with library fit");
    o.require(slope <= r.rho_q + 0.15, "slope within rho_q + 0.15");
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        o.require(r.rows[i].work / r.rows[i].n < r.rows[i - 1].work / r.rows[i - 1].n, "work / n decreasing");
    }
    o.detail << "slope " << slope << ", rho_q " << r.rho_q;
}

void dynamics(Outcome& o) {
    const std::size_t d = 16;
    const GaussianFamilySpec spec{d, {0.8, 0.2, 0.0}, 1.0};
    const IndexPlan plan = plan_parameters(500, planner_stats(spec, StatsMode::calibrated, 1'000'000, 2));
    LsfIndex index(plan, spec, 77);
    RngStream rng(8);
    std::map<PointId, Vector> live, dead;
    PointId next = 0;
    for (int op = 0; op < 1000; ++op) {
        if (live.empty() || rng.uniform() < 0.6) {
            Vector v = random_unit(d, rng);
            index.insert(next, v);
            live.emplace(next++, std::move(v));
        } else {
            auto it = live.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(rng.next_u64() % live.size()));
            index.erase(it->first);
            dead.insert(*it);
            live.erase(it);
        }
    }
    LsfIndex fresh(plan, spec, 77);
    for (const auto& [id, v] : live) fresh.insert(id, v);
    o.require(fresh.bucket_incidences() == index.bucket_incidences(), "bucket state equals rebuild from scratch");
    std::size_t returned_dead = 0;
    for (const auto& [id, v] : dead) {
        const QueryOutcome q = index.query(v);
        if (q.found && !live.contains(*q.found)) ++returned_dead;
    }
    o.require(returned_dead == 0, "deleted point returned");
    o.detail << live.size() << " live, " << dead.size() << " deleted, " << index.incidence_count()
             << " incidences identical";
}

void lsh_demo(Outcome& o) {
    const double t = 1.0;
    const GaussianFamilySpec base{2, {0.5, 0.0, 0.0}, t};
    for (double a : {0.5, 0.8}) {
        GaussianFamilySpec spec = base;
        spec.params.alpha = a;
        const int pairs = 20000;
        int same = 0;
        RngStream rng(derive_seed(4, {static_cast<std::uint64_t>(a * 10)}));
        for (int i = 0; i < pairs; ++i) {
            const double phi = 2 * std::numbers::pi * rng.uniform();
            const double gap = std::acos(a);
            const Vector x{std::cos(phi), std::sin(phi)}, y{std::cos(phi + gap), std::sin(phi + gap)};
            const std::uint64_t seed = derive_seed(5, {static_cast<std::uint64_t>(i)});
            same += lsf_to_lsh_hash(spec, x, seed) == lsf_to_lsh_hash(spec, y, seed);
        }
        const double rate = double(same) / pairs;
        // Both and either from one simulation of the pair's projections.
        const double corr[] = {a};
        const auto counts = kernels::parallel::tail_counts(6, 4'000'000, corr, t, t);
        const double both = double(counts.joint[0]);
        const double either = 2.0 * double(counts.update_marginal) - both;
        const double predicted = both / either;
        // Ratio error is dominated by the count of joint hits.
        const double sigma = std::hypot(std::sqrt(rate * (1 - rate) / pairs), predicted / std::sqrt(both));
        o.require(std::abs(rate - predicted) <= 3 * sigma, "collision rate at alpha " + std::to_string(a));
        o.detail << "alpha " << a << ": rate " << rate << " vs both/either " << predicted << "; ";
    }
}

}  // namespace

int main() {
    run(1, "exponent_reproduction", 1, exponents);
    run(2, "gaussian_tail_bounds", 120, tail_bounds);
    run(3, "tensoring_oracle_and_binomial_median", 60, tensoring);
    run(4, "parameter_planner", 1, planner);
    run(5, "feature_maps_and_stable_sampling", 120, feature_maps);
    run(6, "sphere_recall", 300, sphere_recall);
    run(7, "ls_recall", 300, ls_recall);
    run(8, "sublinear_scaling", 600, sublinearity);
    run(9, "dynamic_updates", 60, dynamics);
    run(10, "lsf_to_lsh_collision_rate", 60, lsh_demo);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
