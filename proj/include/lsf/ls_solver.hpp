#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>

#include "lsf/core.hpp"
#include "lsf/feature_map.hpp"
#include "lsf/gaussian_filters.hpp"
#include "lsf/lsf_index.hpp"

namespace lsf {

/// Knobs of the l_s reduction. Unset optionals take the defaults below.
struct LsConfig {
    /// (gamma r)^s; default 1 / sqrt(ln n).
    std::optional<double> scale_target;
    /// Embedding error budget eps; default min(0.01, gap / 4) where
    /// gap = e^{-(gamma r)^s} - e^{-(c gamma r)^s}.
    std::optional<double> margin;
    /// Feature dimension l; default ceil(128 ln(100 n) / eps^2), capped at 2^18.
    std::optional<std::size_t> embed_dim;
    /// Threshold scale of the Gaussian filters on the embedded sphere.
    double t = 2.5;
    StatsMode mode = StatsMode::calibrated;
    std::uint64_t calibration_trials = 1'000'000;
    std::uint64_t seed = 0;
};

inline constexpr std::size_t kMaxEmbedDim = std::size_t{1} << 18;

struct LsPlan {
    NearNeighborParams nn;
    double lambda = 0.0;
    /// gamma, applied to every coordinate before embedding.
    double scale = 1.0;
    /// e^{-(gamma r)^s} - eps and e^{-(c gamma r)^s} + eps.
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t embed_dim = 0;
    double margin = 0.0;
    std::size_t input_dim = 0;
    GaussianFamilySpec family;
    IndexPlan index_plan;
};

/// Plans the reduction for n points in R^d. Throws InfeasibleSpec when the
/// margin closes the gap (alpha <= beta).
LsPlan plan_ls(std::uint64_t n, std::size_t d, const NearNeighborParams& nn, double lambda, const LsConfig& config);

/// (r, cr)-near neighbor index in l_s: points are scaled by gamma, embedded
/// on the sphere and stored in an LsfIndex; candidates are verified against
/// the original l_s distance, so every answer is within c r.
class LsIndex {
public:
    /// The feature map uses substream (seed, 0xfea), the sphere index
    /// substream (seed, 0x1d).
    LsIndex(LsPlan plan, std::uint64_t seed);

    const LsPlan& plan() const { return plan_; }
    const FeatureMap& feature_map() const { return map_; }
    const LsfIndex& sphere_index() const { return index_; }
    std::size_t size() const { return points_.size(); }

    /// gamma-scaled, embedded, unit-norm image of x.
    Vector embed_point(VectorView x) const;

    void insert(PointId id, VectorView point);
    void insert_batch(std::span<const PointId> ids, std::span<const Vector> points,
                      Execution exec = Execution::parallel);
    void erase(PointId id);

    /// First candidate y with ||x - y||_s <= c r.
    QueryOutcome query(VectorView x) const;

private:
    LsPlan plan_;
    FeatureMap map_;
    LsfIndex index_;
    std::unordered_map<PointId, Vector> points_;
};

}  // namespace lsf
