#include "gpm/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpm {

EvalReport evaluate(const Labeling& predicted, const Labeling& truth,
                    const std::vector<VoxelCount>& sizes, Index n_classes) {
    const Index n = truth.size();
    if (predicted.size() != n || static_cast<Index>(sizes.size()) != n)
        throw std::invalid_argument("evaluate: segment counts do not match");

    EvalReport report;
    report.confusion.setZero(n_classes, n_classes);
    for (Index i = 0; i < n; ++i) {
        if (truth.joint[i] < 0 || truth.joint[i] >= n_classes || predicted.joint[i] < 0 ||
            predicted.joint[i] >= n_classes)
            throw std::invalid_argument("evaluate: label out of range");
        report.confusion(truth.joint[i], predicted.joint[i]) += sizes[i];
    }

    report.per_class_accuracy.resize(n_classes);
    VoxelCount total = 0, correct = 0;
    double class_sum = 0.0;
    int present = 0;
    for (Index c = 0; c < n_classes; ++c) {
        const VoxelCount row = report.confusion.row(c).sum();
        total += row;
        correct += report.confusion(c, c);
        if (row > 0) {
            report.per_class_accuracy(c) =
                static_cast<double>(report.confusion(c, c)) / static_cast<double>(row);
            class_sum += report.per_class_accuracy(c);
            ++present;
        } else {
            report.per_class_accuracy(c) = std::numeric_limits<double>::quiet_NaN();
        }
    }
    report.average_per_class = present > 0 ? class_sum / present : 0.0;
    report.global_accuracy =
        total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    return report;
}

} // namespace gpm
