#pragma once

#include "gpm/hierarchy.hpp"
#include "gpm/types.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace gpm {

/// Actor classes, action classes and the valid joint pairs. The joint space
/// may be a strict subset of the full actor x action product. Background is a
/// distinguished extra label (index n_joint()) whose actor and action
/// projections are both null (-1).
struct LabelSpace {
    std::vector<std::string> actors;
    std::vector<std::string> actions;
    std::vector<std::pair<Index, Index>> joint; // (actor idx, action idx)
    std::string background = "background";

    Index n_actors() const { return static_cast<Index>(actors.size()); }
    Index n_actions() const { return static_cast<Index>(actions.size()); }
    Index n_joint() const { return static_cast<Index>(joint.size()); }
    Index n_labels() const { return n_joint() + 1; } // joint pairs + background
    Index background_label() const { return n_joint(); }

    /// Actor projection of a label in [0, n_labels); -1 for background.
    Index actor_of(Index label) const {
        return label == background_label() ? -1 : joint[label].first;
    }
    Index action_of(Index label) const {
        return label == background_label() ? -1 : joint[label].second;
    }
    std::string label_name(Index label) const;
};

struct GraphEdge {
    Index i = 0, j = 0;
    double weight = 0.0; // contrast weight, >= 0
};

/// Space-time segment adjacency with per-edge contrast and per-segment voxel
/// counts. frame_of is optional metadata (empty when absent).
struct SegmentGraph {
    Index n_segments = 0;
    std::vector<GraphEdge> edges;
    std::vector<VoxelCount> sizes;
    std::vector<int> frame_of;
};

/// All classifier-derived energies. Tables store energies, lower = better;
/// any upstream conversion from scores happens before the instance is built.
/// The joint table carries one extra trailing column for background, which is
/// the background label's entire unary (actor/action tables have no null
/// column).
struct UnaryTables {
    Eigen::MatrixXd actor;          // N x |actors|
    Eigen::MatrixXd action;         // N x |actions|
    Eigen::MatrixXd joint;          // N x (n_joint + 1)
    Eigen::VectorXd video_response; // n_joint classifier margins
};

struct Params {
    double theta_t = 0.5;      // grouping pairwise strength
    double theta_h = 1.0;      // slice depth prior
    double theta_tau = 1e6;    // slice violation penalty, large
    double theta_T = 0.5;      // video response threshold
    double theta_B = 100.0;    // video unary scale, > 2 * theta_V
    double theta_V = 2.0;      // label cost per unsupported class
    double potts_actor = 0.5;  // pairwise strengths, scaled by edge contrast
    double potts_action = 0.5;
    int max_iters = 10;
    double epsilon = 1e-6;     // convergence tolerance, relative to the
                               // initial labeling energy
};

/// Optional axis-aligned voxel boxes per segment, for rendering. Boxes are
/// half-open: [x0,x1) x [y0,y1) x [t0,t1).
struct Geometry {
    int width = 0, height = 0, frames = 0;
    std::vector<std::array<int, 6>> boxes;

    bool empty() const { return boxes.empty(); }
};

struct Instance {
    LabelSpace labels;
    SegmentGraph graph;
    UnaryTables unaries;
    SupervoxelTree tree;
    Params params;
    Geometry geometry;                  // empty when absent
    std::vector<Index> ground_truth;    // empty when absent
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant: label cross-references, graph sanity,
/// unary dimensions and finiteness, parameter constraints (theta_B > 2*theta_V,
/// theta_tau >= 10 * total absolute unary mass), tree shape and leaf coverage.
/// Violations are data, not failures; an empty report means valid.
ValidationReport validate_instance(const Instance& inst);

} // namespace gpm
