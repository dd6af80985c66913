#include "lsf/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lsf {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'F', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

void put_f32(std::ostream& os, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("snapshot: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

float get_f32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("snapshot: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return std::bit_cast<float>(v);
}

std::uint32_t get_u32_field(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    if (v > 0xffffffffULL) throw std::runtime_error("snapshot: plan field out of range");
    return static_cast<std::uint32_t>(v);
}

}  // namespace

void save_snapshot(const LsfIndex& index, std::ostream& os) {
    const auto& spec = index.spec();
    const auto& plan = index.plan();
    os.write(kMagic, 4);
    put_u64(os, spec.dimension);
    put_f64(os, spec.params.alpha);
    put_f64(os, spec.params.beta);
    put_f64(os, spec.params.lambda);
    put_f64(os, spec.t);
    for (std::uint64_t v : {std::uint64_t{plan.kappa1}, std::uint64_t{plan.tau}, std::uint64_t{plan.m1},
                            std::uint64_t{plan.kappa2}, std::uint64_t{plan.m2}, plan.n_target}) {
        put_u64(os, v);
    }
    for (double v : {plan.stats.p1, plan.stats.p2, plan.stats.pq, plan.stats.pu, plan.exponents.rho_q,
                     plan.exponents.rho_u}) {
        put_f64(os, v);
    }
    put_u64(os, index.seed());
    put_f64(os, index.accept_threshold());
    const auto ids = index.ids();
    put_u64(os, ids.size());
    for (PointId id : ids) {
        put_u64(os, id);
        for (float c : index.stored_point(id)) put_f32(os, c);
    }
    if (!os) throw std::runtime_error("snapshot: write failed");
}

LsfIndex load_snapshot(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("snapshot: bad magic");
    GaussianFamilySpec spec;
    spec.dimension = get_u64(is);
    spec.params.alpha = get_f64(is);
    spec.params.beta = get_f64(is);
    spec.params.lambda = get_f64(is);
    spec.t = get_f64(is);
    IndexPlan plan;
    plan.kappa1 = get_u32_field(is);
    plan.tau = get_u32_field(is);
    plan.m1 = get_u32_field(is);
    plan.kappa2 = get_u32_field(is);
    plan.m2 = get_u32_field(is);
    plan.n_target = get_u64(is);
    plan.stats.p1 = get_f64(is);
    plan.stats.p2 = get_f64(is);
    plan.stats.pq = get_f64(is);
    plan.stats.pu = get_f64(is);
    plan.exponents.rho_q = get_f64(is);
    plan.exponents.rho_u = get_f64(is);
    const std::uint64_t seed = get_u64(is);
    const double threshold = get_f64(is);

    LsfIndex index(plan, spec, seed);
    index.set_accept_threshold(threshold);
    const std::uint64_t count = get_u64(is);
    std::vector<float> coords(spec.dimension);
    for (std::uint64_t i = 0; i < count; ++i) {
        const PointId id = get_u64(is);
        for (float& c : coords) c = get_f32(is);
        index.restore(id, coords);
    }
    return index;
}

void save_snapshot_file(const LsfIndex& index, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    save_snapshot(index, os);
}

LsfIndex load_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load_snapshot(is);
}

}  // namespace lsf
