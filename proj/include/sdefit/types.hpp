#pragma once

#include <Eigen/Dense>

namespace sdefit {

// State-space dimensions (state d, observation r, noise channels m) are
// capped at kMaxStateDim so the filter hot path runs on stack-allocated
// matrices. Parameter vectors are unbounded. Raise the cap and rebuild for
// bigger models.
inline constexpr int kMaxStateDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStateDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                          kMaxStateDim, kMaxStateDim>;

// Parameter-space vector (p-dimensional, p unrestricted).
using ParamVec = Eigen::VectorXd;

inline void symmetrize(Mat& q) { q = 0.5 * (q + q.transpose()).eval(); }

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace sdefit
