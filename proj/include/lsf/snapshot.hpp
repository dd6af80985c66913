#pragma once

#include <iosfwd>
#include <string>

#include "lsf/lsf_index.hpp"

namespace lsf {

// Binary snapshot of an LsfIndex: the plan, family spec and seed plus the
// stored point set. Filters are not serialized; loading re-samples them from
// the seed and re-inserts the points, which reproduces the bucket state.
//
// Layout, all integers little-endian u64 and reals little-endian IEEE f64
// except coordinates, which are little-endian f32:
//
//   "LSF1"
//   dimension, alpha, beta, lambda, t
//   kappa1, tau, m1, kappa2, m2, n_target
//   p1, p2, pq, pu, rho_q, rho_u
//   seed, accept_threshold
//   point_count, then per point: id, dimension x f32

void save_snapshot(const LsfIndex& index, std::ostream& os);
LsfIndex load_snapshot(std::istream& is);

void save_snapshot_file(const LsfIndex& index, const std::string& path);
LsfIndex load_snapshot_file(const std::string& path);

}  // namespace lsf
