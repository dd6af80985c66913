#include "lsf/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lsf/rng.hpp"

namespace lsf {

namespace {

Vector gaussian_vector(RngStream& rng, std::size_t d, double scale = 1.0) {
    Vector v(d);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

Vector random_unit(RngStream& rng, std::size_t d) {
    for (;;) {
        Vector v = gaussian_vector(rng, d);
        if (euclidean_norm(v) > 0.0) return normalize(v);
    }
}

// Base points of the l_s kind: i.i.d. N(0, sigma^2) coordinates with sigma
// chosen so E ||x - y||_s^s = (4 c r)^s, using E|Z|^s = 2^{s/2} Gamma((s+1)/2) / sqrt(pi).
double ls_base_sigma(const DatasetSpec& spec) {
    const double s = spec.s;
    const double abs_moment = std::pow(2.0, s / 2.0) * std::tgamma((s + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    const double per_coordinate = std::pow(4.0 * spec.c * spec.r, s) / (static_cast<double>(spec.d) * abs_moment);
    return std::pow(per_coordinate, 1.0 / s) / std::sqrt(2.0);
}

void plant_ls_pair(const DatasetSpec& spec, double sigma, std::size_t i, std::uint64_t attempt, Vector& answer,
                   Vector& query) {
    RngStream rng(spec.seed, {2, i, attempt});
    answer = gaussian_vector(rng, spec.d, sigma);
    Vector dir;
    double norm = 0.0;
    while (!(norm > 0.0)) {
        dir = gaussian_vector(rng, spec.d);
        norm = ls_distance(dir, Vector(spec.d, 0.0), spec.s);
    }
    query.resize(spec.d);
    for (std::size_t k = 0; k < spec.d; ++k) query[k] = answer[k] + spec.r * dir[k] / norm;
}

Dataset generate_ls_planted(const DatasetSpec& spec) {
    const double sigma = ls_base_sigma(spec);
    const std::size_t q = spec.queries;
    const std::size_t stride = spec.n / q;
    Dataset data;
    data.base.resize(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) {
        RngStream rng(spec.seed, {1, j});
        data.base[j] = gaussian_vector(rng, spec.d, sigma);
    }
    std::vector<std::uint64_t> attempts(std::max(spec.n, q), 0);
    std::vector<std::int64_t> planted_for(spec.n, -1);
    data.queries.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
        planted_for[i * stride] = static_cast<std::int64_t>(i);
        plant_ls_pair(spec, sigma, i, 0, data.base[i * stride], data.queries[i]);
    }

    // Resample anything other than the planted answer that falls within c r
    // of a query until the instance is clean.
    const double limit = spec.c * spec.r;
    for (int pass = 0;; ++pass) {
        if (pass == 1000) throw std::runtime_error("ls-planted: could not separate distractors from queries");
        bool clean = true;
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < spec.n; ++j) {
                if (j == i * stride || ls_distance(data.base[j], data.queries[i], spec.s) > limit) continue;
                clean = false;
                const std::uint64_t attempt = ++attempts[j];
                if (planted_for[j] >= 0) {
                    const auto k = static_cast<std::size_t>(planted_for[j]);
                    plant_ls_pair(spec, sigma, k, attempt, data.base[j], data.queries[k]);
                } else {
                    RngStream rng(spec.seed, {3, j, attempt});
                    data.base[j] = gaussian_vector(rng, spec.d, sigma);
                }
            }
        }
        if (clean) break;
    }
    for (std::size_t i = 0; i < q; ++i) {
        data.truth.push_back({i, i * stride, ls_distance(data.queries[i], data.base[i * stride], spec.s)});
    }
    return data;
}

void check_stream(std::istream& is, const char* what) {
    if (!is) throw std::runtime_error(std::string("read failed: ") + what);
}

}  // namespace

DatasetKind parse_dataset_kind(const std::string& name) {
    if (name == "sphere-random") return DatasetKind::sphere_random;
    if (name == "sphere-planted") return DatasetKind::sphere_planted;
    if (name == "ls-planted") return DatasetKind::ls_planted;
    throw std::invalid_argument("unknown dataset kind: " + name);
}

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::sphere_random: return "sphere-random";
        case DatasetKind::sphere_planted: return "sphere-planted";
        case DatasetKind::ls_planted: return "ls-planted";
    }
    return "?";
}

void DatasetSpec::validate() const {
    if (n < 1 || d < 1) throw RangeError("dataset needs n >= 1 and d >= 1");
    if (kind == DatasetKind::sphere_random) return;
    if (queries < 1 || queries > n) throw RangeError("planted datasets need 1 <= queries <= n");
    if (kind == DatasetKind::sphere_planted) {
        if (!(alpha > -1.0 && alpha < 1.0)) throw RangeError("planted alpha must lie in (-1, 1)");
        if (d < 2) throw RangeError("sphere-planted needs d >= 2");
    } else {
        NearNeighborParams{r, c, s}.validate();
    }
}

Dataset generate_dataset(const DatasetSpec& spec) {
    spec.validate();
    if (spec.kind == DatasetKind::ls_planted) return generate_ls_planted(spec);

    Dataset data;
    data.base.reserve(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) {
        RngStream rng(spec.seed, {1, j});
        data.base.push_back(random_unit(rng, spec.d));
    }
    if (spec.kind == DatasetKind::sphere_random) return data;

    const std::size_t stride = spec.n / spec.queries;
    const double orth = std::sqrt(1.0 - spec.alpha * spec.alpha);
    for (std::size_t i = 0; i < spec.queries; ++i) {
        RngStream rng(spec.seed, {2, i});
        Vector q = random_unit(rng, spec.d);
        Vector u;
        for (;;) {
            Vector g = gaussian_vector(rng, spec.d);
            const double proj = inner_product(g, q);
            for (std::size_t k = 0; k < spec.d; ++k) g[k] -= proj * q[k];
            if (euclidean_norm(g) > 1e-6) {
                u = normalize(g);
                break;
            }
        }
        Vector answer(spec.d);
        for (std::size_t k = 0; k < spec.d; ++k) answer[k] = spec.alpha * q[k] + orth * u[k];
        answer = normalize(answer);
        data.base[i * stride] = answer;
        data.truth.push_back({i, i * stride, inner_product(q, answer)});
        data.queries.push_back(std::move(q));
    }
    return data;
}

// --- I/O --------------------------------------------------------------------

void write_fvecs(std::ostream& os, const std::vector<Vector>& vectors) {
    for (const Vector& v : vectors) {
        if (v.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
            throw std::length_error("fvecs: vector too long");
        }
        const auto d = static_cast<std::uint32_t>(v.size());
        unsigned char head[4];
        for (int b = 0; b < 4; ++b) head[b] = static_cast<unsigned char>(d >> (8 * b));
        os.write(reinterpret_cast<const char*>(head), 4);
        for (double x : v) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
            unsigned char buf[4];
            for (int b = 0; b < 4; ++b) buf[b] = static_cast<unsigned char>(bits >> (8 * b));
            os.write(reinterpret_cast<const char*>(buf), 4);
        }
    }
    if (!os) throw std::runtime_error("fvecs: write failed");
}

std::vector<Vector> read_fvecs(std::istream& is) {
    std::vector<Vector> out;
    unsigned char head[4];
    while (is.read(reinterpret_cast<char*>(head), 4)) {
        std::uint32_t d = 0;
        for (int b = 0; b < 4; ++b) d |= static_cast<std::uint32_t>(head[b]) << (8 * b);
        if (d == 0 || d > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max())) {
            throw std::runtime_error("fvecs: bad dimension");
        }
        Vector v(d);
        for (double& x : v) {
            unsigned char buf[4];
            is.read(reinterpret_cast<char*>(buf), 4);
            check_stream(is, "fvecs: truncated vector");
            std::uint32_t bits = 0;
            for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(buf[b]) << (8 * b);
            x = std::bit_cast<float>(bits);
        }
        out.push_back(std::move(v));
    }
    if (is.gcount() != 0) throw std::runtime_error("fvecs: truncated header");
    return out;
}

void write_txt(std::ostream& os, const std::vector<Vector>& vectors) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (const Vector& v : vectors) {
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
        os << '\n';
    }
    os.precision(old);
    if (!os) throw std::runtime_error("txt: write failed");
}

std::vector<Vector> read_txt(std::istream& is) {
    std::vector<Vector> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        Vector v;
        double x;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) throw std::runtime_error("txt: malformed line: " + line);
        if (!out.empty() && v.size() != out.front().size()) throw std::runtime_error("txt: ragged rows");
        out.push_back(std::move(v));
    }
    return out;
}

void write_ground_truth_csv(std::ostream& os, const std::vector<GroundTruth>& truth) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "query_id,answer_id,distance\n";
    for (const auto& g : truth) os << g.query_id << ',' << g.answer_id << ',' << g.distance << '\n';
    os.precision(old);
}

std::vector<GroundTruth> parse_ground_truth_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.substr(0, 27) != "query_id,answer_id,distance") {
        throw std::runtime_error("ground truth: bad header");
    }
    std::vector<GroundTruth> out;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        GroundTruth g;
        char c1 = 0, c2 = 0;
        if (!(ls >> g.query_id >> c1 >> g.answer_id >> c2 >> g.distance) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("ground truth: malformed row: " + line);
        }
        out.push_back(g);
    }
    return out;
}

void write_vectors_file(const std::string& path, const std::vector<Vector>& vectors, const std::string& format) {
    if (format != "fvecs" && format != "txt") throw std::invalid_argument("unknown format: " + format);
    std::ofstream os(path, format == "fvecs" ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    format == "fvecs" ? write_fvecs(os, vectors) : write_txt(os, vectors);
}

std::vector<Vector> read_vectors_file(const std::string& path) {
    const bool binary = path.size() >= 6 && path.substr(path.size() - 6) == ".fvecs";
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw std::runtime_error("cannot open " + path);
    return binary ? read_fvecs(is) : read_txt(is);
}

// --- oracle -----------------------------------------------------------------

std::vector<ScanHit> linear_scan(const std::vector<Vector>& points, VectorView query, double threshold,
                                 Metric metric, double s, Execution exec) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<double> score(points.size());
    for (const Vector& p : points) require_same_dimension(p, query);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        score[i] = metric == Metric::inner_product ? inner_product(points[i], query) : ls_distance(points[i], query, s);
    }
    std::vector<ScanHit> hits;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool within = metric == Metric::inner_product ? score[i] >= threshold : score[i] <= threshold;
        if (within) hits.push_back({i, score[i]});
    }
    std::sort(hits.begin(), hits.end(), [&](const ScanHit& a, const ScanHit& b) {
        if (a.distance != b.distance) {
            return metric == Metric::inner_product ? a.distance > b.distance : a.distance < b.distance;
        }
        return a.id < b.id;
    });
    return hits;
}

double distractor_similarity_quantile(const Dataset& data, double quantile) {
    if (!(quantile >= 0.0 && quantile <= 1.0)) throw RangeError("quantile must lie in [0, 1]");
    std::vector<std::uint64_t> answer_of(data.queries.size(), std::numeric_limits<std::uint64_t>::max());
    for (const auto& g : data.truth) {
        if (g.query_id < answer_of.size()) answer_of[g.query_id] = g.answer_id;
    }
    std::vector<double> sims;
    sims.reserve(data.queries.size() * data.base.size());
    for (std::size_t i = 0; i < data.queries.size(); ++i) {
        for (std::size_t j = 0; j < data.base.size(); ++j) {
            if (j != answer_of[i]) sims.push_back(inner_product(data.queries[i], data.base[j]));
        }
    }
    if (sims.empty()) throw RangeError("no distractor pairs");
    const auto k = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(sims.size() - 1)));
    std::nth_element(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end());
    return sims[k];
}

}  // namespace lsf
