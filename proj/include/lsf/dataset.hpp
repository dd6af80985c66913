#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsf/core.hpp"
#include "lsf/kernels.hpp"

namespace lsf {

enum class DatasetKind { sphere_random, sphere_planted, ls_planted };

DatasetKind parse_dataset_kind(const std::string& name);
std::string to_string(DatasetKind kind);

struct DatasetSpec {
    std::size_t n = 1000;
    std::size_t d = 32;
    DatasetKind kind = DatasetKind::sphere_random;
    /// Planted similarity for sphere-planted.
    double alpha = 0.7;
    /// Planted distance r, approximation c and norm order s for ls-planted.
    double r = 1.0;
    double c = 2.0;
    double s = 2.0;
    /// Planted queries; ignored for sphere-random.
    std::size_t queries = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Ground-truth row. For sphere data `distance` holds the inner product,
/// for l_s data the l_s distance.
struct GroundTruth {
    std::uint64_t query_id = 0;
    std::uint64_t answer_id = 0;
    double distance = 0.0;

    bool operator==(const GroundTruth&) const = default;
};

struct Dataset {
    std::vector<Vector> base;
    std::vector<Vector> queries;
    std::vector<GroundTruth> truth;
};

/// Deterministic in spec.seed.
///  - sphere-random: n uniform unit vectors, no queries.
///  - sphere-planted: n uniform unit vectors; query i is a fresh unit vector
///    and base point i * floor(n / queries) is replaced by
///    alpha q + sqrt(1 - alpha^2) u with u a unit vector orthogonal to q.
///  - ls-planted: Gaussian base points whose typical l_s distance is 4 c r;
///    query i sits at l_s distance exactly r from its answer, and any other
///    base point within c r of a query is resampled.
Dataset generate_dataset(const DatasetSpec& spec);

/// fvecs: per vector a little-endian int32 dimension then that many
/// little-endian float32 values.
void write_fvecs(std::ostream& os, const std::vector<Vector>& vectors);
std::vector<Vector> read_fvecs(std::istream& is);

/// Text: one vector per line, values separated by spaces.
void write_txt(std::ostream& os, const std::vector<Vector>& vectors);
std::vector<Vector> read_txt(std::istream& is);

/// "query_id,answer_id,distance" with a header line.
void write_ground_truth_csv(std::ostream& os, const std::vector<GroundTruth>& truth);
std::vector<GroundTruth> parse_ground_truth_csv(std::istream& is);

void write_vectors_file(const std::string& path, const std::vector<Vector>& vectors, const std::string& format);
/// Format inferred from the extension: .fvecs is binary, anything else text.
std::vector<Vector> read_vectors_file(const std::string& path);

enum class Metric { inner_product, ls };

struct ScanHit {
    std::uint64_t id = 0;
    double distance = 0.0;

    bool operator==(const ScanHit&) const = default;
};

/// Every point within `threshold` of the query, nearest first (ties by id).
/// For inner_product "within" means similarity >= threshold and the
/// distance field holds the similarity; for ls it means
/// ||x - y||_s <= threshold.
std::vector<ScanHit> linear_scan(const std::vector<Vector>& points, VectorView query, double threshold,
                                 Metric metric, double s = 2.0, Execution exec = Execution::serial);

/// The given quantile (in [0, 1]) of inner products between every query and
/// every base point other than its planted answer.
double distractor_similarity_quantile(const Dataset& data, double quantile);

}  // namespace lsf
