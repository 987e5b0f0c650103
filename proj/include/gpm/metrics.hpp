#pragma once

#include "gpm/types.hpp"

namespace gpm {

/// Benchmark metrics over all voxels, weighted by segment size. Classes are
/// the joint labels plus background (the last row/column). Classes absent
/// from the truth are excluded from the per-class average.
struct EvalReport {
    Eigen::VectorXd per_class_accuracy;     // NaN for classes absent from truth
    double average_per_class = 0.0;
    double global_accuracy = 0.0;
    Eigen::Matrix<VoxelCount, Eigen::Dynamic, Eigen::Dynamic> confusion; // truth x predicted
};

EvalReport evaluate(const Labeling& predicted, const Labeling& truth,
                    const std::vector<VoxelCount>& sizes, Index n_classes);

} // namespace gpm
